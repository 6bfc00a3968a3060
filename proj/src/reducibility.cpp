#include "otmlab/reducibility.hpp"

#include <algorithm>
#include <random>

#include "otmlab/logic.hpp"

namespace otmlab {

const HfSet& Canonification::at(const HfSet& x) const {
  auto it = map.find(x);
  if (it == map.end()) throw OracleDomainError(x);
  return it->second;
}

CanonificationCheck check_canonification(const Canonification& f, const Relation& r, const std::vector<HfSet>& u) {
  for (const auto& x : u) {
    if (!r.domain(x)) continue;
    auto it = f.map.find(x);
    if (it == f.map.end() || !r.holds(x, it->second)) return {false, x};
  }
  return {};
}

CanonificationSet enumerate_canonifications(const Relation& r, const std::vector<HfSet>& d, std::size_t cap,
                                            std::size_t sample, std::optional<std::uint64_t> seed) {
  std::vector<HfSet> xs(d);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<WitnessSpace> spaces;
  CanonificationSet out;
  bool listed = true;
  for (const auto& x : xs) {
    WitnessSpace w = r.domain(x) ? r.witnesses(x) : WitnessSpace::listed({HfSet{}});
    if (w.complete ? w.all.empty() : w.count == 0) throw EmptyWitnessSet(x);
    listed = listed && w.complete;
    out.product *= w.count;
    spaces.push_back(std::move(w));
  }

  auto build = [&](auto&& pick) {
    Canonification f;
    for (std::size_t i = 0; i < xs.size(); ++i) f.map.emplace(xs[i], pick(i));
    out.items.push_back(std::move(f));
  };

  if (listed && out.product <= static_cast<long double>(cap)) {
    std::vector<std::size_t> idx(xs.size(), 0);
    while (true) {
      build([&](std::size_t i) { return spaces[i].all[idx[i]]; });
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == spaces[k].all.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
    return out;
  }

  if (!seed) throw SamplingNeedsSeed();
  out.exhaustive = false;
  auto least = [&](std::size_t i) { return spaces[i].complete ? spaces[i].all.front() : spaces[i].extremal.front(); };
  auto greatest = [&](std::size_t i) { return spaces[i].complete ? spaces[i].all.back() : spaces[i].extremal.back(); };
  build(least);
  build(greatest);
  std::mt19937_64 rng(*seed);
  for (std::size_t s = 0; s < sample; ++s) {
    build([&](std::size_t i) {
      const auto& w = spaces[i];
      if (!w.complete) return w.draw(rng);
      return w.all[std::uniform_int_distribution<std::size_t>(0, w.all.size() - 1)(rng)];
    });
  }
  return out;
}

// ---------------------------------------------------------------------------

Procedure Procedure::native(std::string name, Native f) {
  Procedure p;
  p.name_ = std::move(name);
  p.native_ = std::move(f);
  return p;
}

Procedure Procedure::program(std::string name, std::shared_ptr<const Program> prog, RunOptions options) {
  Procedure p;
  p.name_ = std::move(name);
  p.program_ = std::move(prog);
  p.options_ = options;
  p.memo_ = std::make_shared<std::map<std::pair<HfSet, std::optional<HfSet>>, HfSet>>();
  return p;
}

namespace {

HfSet read_output(const Program& p, const RunOutcome& o, const std::string& who) {
  if (o.kind != RunOutcome::Kind::halted)
    throw WitnessExecutionError(who + ": " + to_string(o.kind) + (o.reason.empty() ? "" : " (" + o.reason + ")"));
  auto out = p.tape_index(TapeRole::output);
  if (!out) throw WitnessExecutionError(who + ": program has no output tape");
  auto code = tape_to_code(o.config.tapes[*out]);
  if (!code) throw WitnessExecutionError(who + ": output tape holds infinitely many 1s");
  CodeCheck chk = is_valid(*code);
  if (!chk) throw WitnessExecutionError(who + ": output is not a set code: " + chk.detail);
  return decode(*code);
}

}  // namespace

HfSet Procedure::operator()(const HfSet& main, const HfSet* side) const {
  if (!program_) return native_(main, side);
  std::pair<HfSet, std::optional<HfSet>> key{main, side ? std::optional<HfSet>(*side) : std::nullopt};
  if (auto it = memo_->find(key); it != memo_->end()) return it->second;
  const HfSet input = side ? kpair(main, *side) : main;
  RunOutcome o = run(*program_, code_to_tape(encode(input)), options_);
  HfSet y = read_output(*program_, o, name_);
  memo_->emplace(std::move(key), y);
  return y;
}

// ---------------------------------------------------------------------------

const Relation& ReductionWitness::source_rel() const { return source_relation ? *source_relation : relation(source); }
const Relation& ReductionWitness::target_rel() const { return relation(target); }

std::string to_string(ReductionWitness::Kind k) {
  switch (k) {
    case ReductionWitness::Kind::oW: return "oW";
    case ReductionWitness::Kind::soW: return "soW";
    case ReductionWitness::Kind::OTM: return "OTM";
  }
  return "?";
}

ReductionWitness::Kind witness_kind_from_string(std::string_view s) {
  if (s == "oW") return ReductionWitness::Kind::oW;
  if (s == "soW") return ReductionWitness::Kind::soW;
  if (s == "OTM") return ReductionWitness::Kind::OTM;
  throw std::invalid_argument("unknown witness kind '" + std::string(s) + "'");
}

namespace {

HfSet finish_oW(const ReductionWitness& w, const Canonification& f, const HfSet& x, const HfSet& q) {
  const HfSet& a = f.at(q);
  return (*w.post)(a, w.kind == ReductionWitness::Kind::oW ? &x : nullptr);
}

}  // namespace

HfSet apply_oW(const ReductionWitness& w, const Canonification& f, const HfSet& x) {
  if (w.kind == ReductionWitness::Kind::OTM || !w.pre || !w.post)
    throw std::invalid_argument("apply_oW needs an oW or soW witness");
  return finish_oW(w, f, x, (*w.pre)(x));
}

MiracleRun run_with_miracle(const ReductionWitness& w, const Canonification& f, const HfSet& x) {
  if (w.kind != ReductionWitness::Kind::OTM) throw std::invalid_argument("run_with_miracle needs an OTM witness");
  MiracleRun r;
  auto answer = [&](const HfSet& s) {
    ++r.miracle_calls;
    const HfSet& a = f.at(s);
    if (a.rank() > rank_cap()) throw MiracleRangeEscape(a);
    return a;
  };
  if (w.oracle_native) {
    r.result = w.oracle_native(x, answer);
    return r;
  }
  if (!w.oracle_program) throw std::invalid_argument("OTM witness has no body");
  const Program& p = *w.oracle_program;
  auto m = p.tape_index(TapeRole::miracle);
  if (!m) throw WitnessExecutionError(w.name + ": program has no miracle tape");
  RunHooks hooks;
  hooks.on_miracle = [&](Configuration& c) {
    auto code = tape_to_code(c.tapes[*m]);
    if (!code || !is_valid(*code)) {
      ++r.miracle_calls;
      return;
    }
    c.tapes[*m] = code_to_tape(encode(answer(decode(*code))));
  };
  RunOutcome o = run(p, code_to_tape(encode(x)), w.oracle_options, hooks);
  r.result = read_output(p, o, w.name);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

VerifyReport verify_reduction(const ReductionWitness& witness, const std::vector<HfSet>& u,
                              const VerifyOptions& options) {
  ReductionWitness w = witness;
  if (options.as_weak && w.kind == ReductionWitness::Kind::soW) {
    // The post-stage receives x and ignores it.
    w.kind = ReductionWitness::Kind::oW;
    w.post = Procedure::native(w.post->name(), [p = *w.post](const HfSet& a, const HfSet*) { return p(a); });
  }
  const Relation& src = w.source_rel();
  const Relation& dst = w.target_rel();
  const bool otm = w.kind == ReductionWitness::Kind::OTM;

  std::vector<HfSet> xs(u);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  VerifyReport rep;
  rep.instances = xs.size();
  auto fail = [&](Counterexample c) {
    ++rep.failures;
    if (rep.counterexamples.size() < options.max_counterexamples) rep.counterexamples.push_back(std::move(c));
  };

  for (std::size_t i = 0; i < xs.size(); ++i) {
    const HfSet& x = xs[i];
    if (!src.domain(x)) continue;
    ++rep.in_domain;

    std::vector<HfSet> queries;
    try {
      queries = otm ? w.queries(x) : std::vector<HfSet>{(*w.pre)(x)};
    } catch (const Error& e) {
      ++rep.cases;
      fail({x, {}, {}, e.what()});
      continue;
    }
    std::optional<std::uint64_t> seed;
    if (options.seed) seed = mix(*options.seed, i);
    CanonificationSet canons;
    try {
      canons = enumerate_canonifications(dst, queries, options.cap, options.sample, seed);
    } catch (const EmptyWitnessSet& e) {
      ++rep.cases;
      fail({x, {}, {}, e.what()});
      continue;
    }
    rep.exhaustive = rep.exhaustive && canons.exhaustive;
    const std::size_t n = canons.items.size();
    rep.min_canonifications = rep.in_domain == 1 ? n : std::min(rep.min_canonifications, n);
    rep.max_canonifications = std::max(rep.max_canonifications, n);

    for (const auto& f : canons.items) {
      ++rep.cases;
      std::optional<HfSet> result;
      std::string error;
      try {
        if (otm) {
          MiracleRun mr = run_with_miracle(w, f, x);
          rep.miracle_calls[x].insert(mr.miracle_calls);
          result = mr.result;
        } else {
          result = finish_oW(w, f, x, queries.front());
        }
        if (!src.holds(x, *result)) error = "result fails the relation";
      } catch (const Error& e) {
        error = e.what();
      }
      if (!error.empty()) fail({x, {f.map.begin(), f.map.end()}, result, error});
    }
  }
  rep.ok = rep.failures == 0;
  return rep;
}

HfSet search_reduction_zfc_analog(const PrenexStatement& phi, const HfSet& x, const Canonification& f_wo,
                                  std::uint64_t budget) {
  if (phi.blocks.size() != 1) throw std::invalid_argument("search needs a statement ALL x EX y (matrix)");
  const HfSet t = tc(singleton(x));
  const HfSet& order = f_wo.at(t);
  if (!is_strict_order_on(order, t)) throw WitnessExecutionError("oracle answer is not a well-order of tc({x})");
  return search_witness(phi.matrix, x, budget, phi.blocks[0].first, phi.blocks[0].second);
}

}  // namespace otmlab
