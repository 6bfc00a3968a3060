"""Ordinal Turing machines and ordinal Weihrauch reductions on hereditarily finite sets."""

from ._core import (
    HfSet,
    Ordinal,
    OtmlabError,
    ack_enumerate,
    ack_index,
    check_canonification,
    decode,
    encode,
    eval_delta0,
    eval_prenex,
    format_program,
    godel_pair,
    godel_unpair,
    holds,
    instances,
    is_valid_code,
    kpair,
    pairs_below,
    relation_names,
    run,
    search_witness,
    tc,
    verify,
)

__all__ = [
    "HfSet",
    "Ordinal",
    "OtmlabError",
    "ack_enumerate",
    "ack_index",
    "check_canonification",
    "decode",
    "encode",
    "eval_delta0",
    "eval_prenex",
    "format_program",
    "godel_pair",
    "godel_unpair",
    "holds",
    "instances",
    "is_valid_code",
    "kpair",
    "pairs_below",
    "relation_names",
    "run",
    "search_witness",
    "tc",
    "verify",
]
