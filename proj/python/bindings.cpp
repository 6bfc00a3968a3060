#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "otmlab/asmparse.hpp"
#include "otmlab/logic.hpp"
#include "otmlab/machine.hpp"
#include "otmlab/ordinal.hpp"
#include "otmlab/reducibility.hpp"
#include "otmlab/relations.hpp"
#include "otmlab/setcode.hpp"

namespace py = pybind11;
using namespace otmlab;

namespace {

HfSet as_set(const py::object& o) {
  if (py::isinstance<HfSet>(o)) return o.cast<HfSet>();
  return HfSet::parse(o.cast<std::string>());
}

Env as_env(const py::dict& d) {
  Env env;
  for (const auto& [k, v] : d) env[k.cast<std::string>()] = as_set(py::reinterpret_borrow<py::object>(v));
  return env;
}

py::dict outcome_dict(const Program& p, const RunOutcome& o) {
  py::dict tapes;
  for (std::size_t t = 0; t < p.tapes.size(); ++t) {
    py::dict tape;
    tape["head"] = o.config.heads[t].to_string();
    tape["cells"] = o.config.tapes[t].to_string();
    tapes[py::str(to_string(p.tapes[t]))] = tape;
  }
  py::dict d;
  d["kind"] = to_string(o.kind);
  d["time"] = o.config.time.to_string();
  d["state"] = p.state_names[o.config.state];
  d["tapes"] = tapes;
  d["steps"] = o.successor_steps;
  d["limits"] = o.limit_jumps;
  d["reason"] = o.reason;
  return d;
}

py::dict report_dict(const VerifyReport& r) {
  py::list cex;
  for (const auto& c : r.counterexamples) {
    py::dict e;
    e["x"] = c.x.to_string();
    py::list oracle;
    for (const auto& [q, a] : c.oracle) oracle.append(py::make_tuple(q.to_string(), a.to_string()));
    e["oracle"] = oracle;
    e["result"] = c.result ? py::object(py::str(c.result->to_string())) : py::object(py::none());
    e["error"] = c.error;
    cex.append(e);
  }
  py::dict d;
  d["ok"] = r.ok;
  d["exhaustive"] = r.exhaustive;
  d["instances"] = r.instances;
  d["in_domain"] = r.in_domain;
  d["canonifications"] = py::make_tuple(r.min_canonifications, r.max_canonifications);
  d["cases"] = r.cases;
  d["failures"] = r.failures;
  d["counterexamples"] = cex;
  py::dict calls;
  for (const auto& [x, counts] : r.miracle_calls) calls[py::str(x.to_string())] = counts;
  d["miracle_calls"] = calls;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ordinal Turing machines and ordinal Weihrauch reductions";

  py::register_exception<Error>(m, "OtmlabError", PyExc_ValueError);

  py::class_<Ordinal>(m, "Ordinal")
      .def(py::init<std::uint64_t>(), py::arg("n") = 0)
      .def_static("parse", &Ordinal::parse)
      .def_static("omega", &Ordinal::omega)
      .def("is_limit", &Ordinal::is_limit)
      .def("is_successor", &Ordinal::is_successor)
      .def("__str__", &Ordinal::to_string)
      .def("__repr__", [](const Ordinal& o) { return "Ordinal('" + o.to_string() + "')"; })
      .def("__hash__", &Ordinal::hash)
      .def(py::self == py::self)
      .def(py::self < py::self)
      .def(py::self <= py::self)
      .def(py::self + py::self)
      .def(py::self * py::self);
  m.def("godel_pair", &godel_pair);
  m.def("godel_unpair", &godel_unpair);
  m.def("pairs_below", &pairs_below);

  py::class_<HfSet>(m, "HfSet")
      .def(py::init<>())
      .def_static("parse", &HfSet::parse)
      .def_static("of", &HfSet::of)
      .def_property_readonly("elements", [](const HfSet& s) { return std::vector<HfSet>(s.elements()); })
      .def_property_readonly("rank", &HfSet::rank)
      .def("__len__", &HfSet::size)
      .def("__contains__", &HfSet::contains)
      .def("__str__", &HfSet::to_string)
      .def("__repr__", [](const HfSet& s) { return "HfSet('" + s.to_string() + "')"; })
      .def("__hash__", &HfSet::hash)
      .def(py::self == py::self)
      .def(py::self < py::self);
  m.def("ack_index", &ack_index);
  m.def("ack_enumerate", &ack_enumerate);
  m.def("kpair", &kpair);
  m.def("tc", &tc);

  m.def(
      "encode",
      [](const py::object& x) {
        const SetCode c = encode(as_set(x));
        py::list pairs;
        for (const auto& p : c.pairs) pairs.append(p.to_string());
        py::dict d;
        d["bound"] = c.bound.to_string();
        d["pairs"] = pairs;
        return d;
      },
      py::arg("set"), "Code of a set as {'bound': str, 'pairs': [str]}.");
  auto to_code = [](const py::dict& d) {
    SetCode c;
    c.bound = Ordinal::parse(d["bound"].cast<std::string>());
    for (const auto& p : d["pairs"]) c.pairs.push_back(Ordinal::parse(p.cast<std::string>()));
    std::sort(c.pairs.begin(), c.pairs.end());
    return c;
  };
  m.def("decode", [to_code](const py::dict& d) { return decode(to_code(d)); }, py::arg("code"));
  m.def(
      "is_valid_code",
      [to_code](const py::dict& d) {
        const CodeCheck c = is_valid(to_code(d));
        return py::make_tuple(c.valid, c.reason ? py::object(py::str(to_string(*c.reason))) : py::object(py::none()));
      },
      py::arg("code"));

  m.def(
      "eval_delta0",
      [](const std::string& formula, const py::dict& env) { return eval_delta0(parse_delta0(formula), as_env(env)); },
      py::arg("formula"), py::arg("env") = py::dict());
  m.def(
      "eval_prenex",
      [](const std::string& statement, unsigned rank) { return eval_prenex(parse_prenex(statement), rank_below(rank + 1)); },
      py::arg("statement"), py::arg("rank") = 2, "Truth over the sets of rank <= `rank`.");
  m.def(
      "search_witness",
      [](const std::string& psi, const py::object& a, std::uint64_t budget) {
        return search_witness(parse_delta0(psi), as_set(a), budget);
      },
      py::arg("psi"), py::arg("a"), py::arg("budget") = 1 << 16, "Least b with psi(a, b).");

  m.def(
      "run",
      [](const std::string& source, const py::object& input, std::uint64_t steps, std::uint64_t jumps) {
        const Program p = parse_program(source);
        Tape tape;
        if (!input.is_none()) tape = code_to_tape(encode(as_set(input)));
        RunOptions opts;
        opts.budget = {steps, jumps};
        return outcome_dict(p, run(p, tape, opts));
      },
      py::arg("program"), py::arg("input") = py::none(), py::arg("steps") = 100000, py::arg("jumps") = 16,
      "Runs program source text; the input set is written as its code.");
  m.def(
      "format_program", [](const std::string& source) { return print_program(parse_program(source)); },
      py::arg("program"));

  m.def("relation_names", &relation_names);
  m.def(
      "instances", [](const std::string& name, unsigned rank) { return relation(name).instances(rank); },
      py::arg("relation"), py::arg("rank") = 3);
  m.def(
      "holds",
      [](const std::string& name, const py::object& x, const py::object& y) {
        return relation(name).accepts(as_set(x), as_set(y));
      },
      py::arg("relation"), py::arg("x"), py::arg("y"));
  m.def(
      "check_canonification",
      [](const std::string& name, const std::function<HfSet(const HfSet&)>& f, unsigned rank) {
        const Relation& r = relation(name);
        const auto u = r.instances(rank);
        Canonification c;
        for (const auto& x : u) c.map.emplace(x, r.domain(x) ? f(x) : HfSet{});
        const auto res = check_canonification(c, r, u);
        return res.counterexample ? py::object(py::cast(*res.counterexample)) : py::object(py::none());
      },
      py::arg("relation"), py::arg("f"), py::arg("rank") = 3,
      "None when f is a canonification on the instances of the given rank, else a counterexample.");

  m.def(
      "verify",
      [](const std::filesystem::path& manifest, unsigned rank, std::size_t cap, std::size_t sample,
         std::optional<std::uint64_t> seed, bool weak) {
        const ReductionWitness w = load_witness(manifest);
        VerifyOptions o;
        o.cap = cap;
        o.sample = sample;
        o.seed = seed;
        o.as_weak = weak;
        VerifyReport r;
        {
          py::gil_scoped_release release;
          r = verify_reduction(w, w.source_rel().instances(rank), o);
        }
        return report_dict(r);
      },
      py::arg("manifest"), py::arg("rank") = 3, py::arg("cap") = 10000, py::arg("sample") = 100,
      py::arg("seed") = py::none(), py::arg("weak") = false);
}
