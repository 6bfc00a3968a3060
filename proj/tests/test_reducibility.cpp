#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "otmlab/asmparse.hpp"
#include "otmlab/logic.hpp"
#include "otmlab/reducibility.hpp"

using namespace otmlab;

namespace {

HfSet S(const char* s) { return HfSet::parse(s); }

ReductionWitness manifest(const std::string& name) {
  return load_witness(fixture_path("witnesses/" + name + ".json"));
}

Canonification least_choice(const Relation& r, const std::vector<HfSet>& d) {
  Canonification f;
  for (const auto& x : d) {
    if (!r.domain(x)) {
      f.map[x] = HfSet();
      continue;
    }
    const auto w = r.witnesses(x);
    f.map[x] = w.complete ? w.all.front() : w.extremal.front();
  }
  return f;
}

}  // namespace

TEST_SUITE("reducibility") {
  TEST_CASE("canonifications are enumerated in full below the cap") {
    const Relation& pp = relation("PP");
    const auto set = enumerate_canonifications(pp, {S("{{}}"), S("{{},{{}}}")});
    CHECK(set.exhaustive);
    CHECK(set.items.size() == 2);
    CHECK(enumerate_canonifications(pp, {}).items.size() == 1);
    const Relation& zl = relation("ZL");
    // The two-element antichain.
    const HfSet anti = HfSet::of({kpair(S("{}"), S("{}")), kpair(S("{{}}"), S("{{}}"))});
    CHECK(enumerate_canonifications(zl, {anti}).items.size() == 2);
    // Off-domain instances go to the empty set.
    const auto off = enumerate_canonifications(pp, {HfSet()});
    REQUIRE(off.items.size() == 1);
    CHECK(off.items[0].at(HfSet()) == HfSet());
  }

  TEST_CASE("every enumerated canonification is one") {
    for (const char* name : {"PP", "MPP", "ZL", "HMP", "AC"}) {
      const Relation& r = relation(name);
      auto u = r.instances(2);
      if (u.size() > 6) u.resize(6);
      const auto set = enumerate_canonifications(r, u, 10000, 20, 1);
      for (const auto& f : set.items) CHECK(check_canonification(f, r, u).ok);
    }
  }

  TEST_CASE("sampling needs a seed and is reproducible") {
    const Relation& mpp = relation("MPP");
    const auto u = plain_universe(3);
    CHECK_THROWS_AS(enumerate_canonifications(mpp, u, 100, 10), SamplingNeedsSeed);
    const auto a = enumerate_canonifications(mpp, u, 100, 10, 7);
    const auto b = enumerate_canonifications(mpp, u, 100, 10, 7);
    CHECK_FALSE(a.exhaustive);
    REQUIRE(a.items.size() == b.items.size());
    for (std::size_t i = 0; i < a.items.size(); ++i) CHECK(a.items[i].map == b.items[i].map);
    CHECK(a.items.size() >= 10);
  }

  TEST_CASE("check_canonification reports the first failure") {
    const Relation& pp = relation("PP");
    Canonification f;
    f.map[S("{{}}")] = S("{}");
    f.map[S("{{{}}}")] = S("{}");
    const auto c = check_canonification(f, pp, {S("{{}}"), S("{{{}}}")});
    CHECK_FALSE(c.ok);
    CHECK(c.counterexample == S("{{{}}}"));
    CHECK_FALSE(check_canonification(f, pp, {S("{{},{{}}}")}).ok);
    CHECK_THROWS_AS(f.at(S("{{},{{}}}")), OracleDomainError);
  }

  TEST_CASE("oW and soW composition") {
    const auto w = manifest("pp_le_zl");
    const HfSet x = S("{{},{{}}}");
    const HfSet q = (*w.pre)(x);
    Canonification f;
    f.map[q] = S("{{}}");
    CHECK(apply_oW(w, f, x) == S("{{}}"));
    CHECK(relation("PP").holds(x, apply_oW(w, f, x)));
  }

  TEST_CASE("program stages run on codes") {
    auto copy = Procedure::program("copy", std::make_shared<Program>(fixture_program("copy_identity")));
    for (const auto& x : plain_universe(3)) CHECK(copy(x) == x);
    auto bad = Procedure::program("busy", std::make_shared<Program>(fixture_program("busy_loop")));
    CHECK_THROWS_AS(bad(HfSet()), WitnessExecutionError);
  }

  TEST_CASE("oracle calls through the miracle state") {
    const auto wo = manifest("wo_le_pp_otm");
    const HfSet x = S("{{},{{}}}");
    Canonification f = least_choice(relation("PP"), wo.queries(x));
    const MiracleRun run = run_with_miracle(wo, f, x);
    CHECK(run.miracle_calls == 2);
    CHECK(run.result == strict_order_from({S("{}"), S("{{}}")}));

    const auto pp = manifest("pp_le_pp_miracle");
    const auto dx = pp.queries(x);
    Canonification g = least_choice(relation("PP"), dx);
    const MiracleRun echo = run_with_miracle(pp, g, x);
    CHECK(echo.miracle_calls == 1);
    CHECK(echo.result == g.at(x));
  }

  TEST_CASE("invalid miracle contents are left alone") {
    ReductionWitness w;
    w.kind = ReductionWitness::Kind::OTM;
    w.source = "PP";
    w.target = "PP";
    w.oracle_program = std::make_shared<Program>(fixture_program("invalid_miracle"));
    w.queries = [](const HfSet& x) { return std::vector<HfSet>{x}; };
    const HfSet x = S("{{}}");
    Canonification f;
    f.map[x] = S("{}");
    const MiracleRun run = run_with_miracle(w, f, x);
    CHECK(run.miracle_calls == 1);
    CHECK(run.result == HfSet());
  }

  TEST_CASE("shipped witnesses verify") {
    VerifyOptions o;
    o.seed = 1;
    for (std::string name : {"pp2_le_ppfin", "ppfin_le_pp", "pp_le_zl", "zl_le_pp", "pp_le_ac", "mpp_le_muc",
                             "muc_le_ac", "ac_le_acprime", "acprime_le_ac", "zero_le_pp2", "wo_le_pp_otm",
                             "pp_le_pp_miracle", "pp_le_wo"}) {
      CAPTURE(name);
      const auto w = manifest(name);
      const auto report = verify_reduction(w, w.source_rel().instances(2), o);
      CHECK(report.ok);
      CHECK(report.failures == 0);
      CHECK(report.cases > 0);
    }
  }

  TEST_CASE("strong witnesses are also weak ones") {
    VerifyOptions o;
    o.seed = 3;
    o.as_weak = true;
    for (std::string name : {"pp_le_zl", "zl_le_pp", "ac_le_acprime", "pp2_le_ppfin"}) {
      CAPTURE(name);
      const auto w = manifest(name);
      REQUIRE(w.kind == ReductionWitness::Kind::soW);
      CHECK(verify_reduction(w, w.source_rel().instances(2), o).ok);
    }
  }

  TEST_CASE("reports are deterministic") {
    VerifyOptions o;
    o.seed = 9;
    o.cap = 50;
    o.sample = 20;
    const auto w = manifest("broken/pp_le_ac_identity");
    const auto u = w.source_rel().instances(3);
    const auto a = verify_reduction(w, u, o);
    const auto b = verify_reduction(w, u, o);
    CHECK(a.ok == b.ok);
    CHECK(a.cases == b.cases);
    CHECK(a.failures == b.failures);
    REQUIRE(a.counterexamples.size() == b.counterexamples.size());
    for (std::size_t i = 0; i < a.counterexamples.size(); ++i) {
      CHECK(a.counterexamples[i].x == b.counterexamples[i].x);
      CHECK(a.counterexamples[i].oracle == b.counterexamples[i].oracle);
    }
  }

  TEST_CASE("broken witnesses are refuted") {
    VerifyOptions o;
    o.seed = 1;
    for (const char* name : {"pp_le_zl_const_empty", "pp_le_ac_identity", "zl_le_pp_field", "ac_le_acprime_identity",
                             "wo_le_pp_reflexive"}) {
      CAPTURE(name);
      const auto w = manifest(std::string("broken/") + name);
      const auto report = verify_reduction(w, w.source_rel().instances(3), o);
      CHECK_FALSE(report.ok);
      REQUIRE_FALSE(report.counterexamples.empty());
      const auto& c = report.counterexamples.front();
      if (c.result) CHECK_FALSE(w.source_rel().accepts(c.x, *c.result));
    }
    const auto w = manifest("broken/pp_le_zl_const_empty");
    const auto r = verify_reduction(w, w.source_rel().instances(3), o);
    CHECK(r.counterexamples.front().x == S("{{{}}}"));
  }

  TEST_CASE("invalid canonifications fail their relation") {
    REQUIRE(invalid_canonifications().size() == 5);
    for (const auto& inv : invalid_canonifications()) {
      CAPTURE(inv.description);
      const Relation& r = relation(inv.relation);
      const auto u = r.instances(3);
      Canonification f;
      for (const auto& x : u) f.map[x] = inv.f(x);
      CHECK_FALSE(check_canonification(f, r, u).ok);
    }
  }

  TEST_CASE("strong outputs depend only on the oracle answer") {
    for (std::string name : {"pp_le_zl", "zl_le_pp", "ac_le_acprime", "muc_le_ac", "pp_le_wo"}) {
      CAPTURE(name);
      const auto w = manifest(name);
      REQUIRE(w.kind == ReductionWitness::Kind::soW);
      const Relation& dst = w.target_rel();
      std::map<HfSet, std::vector<HfSet>> by_query;
      for (const auto& x : w.source_rel().instances(2))
        if (w.source_rel().domain(x)) by_query[(*w.pre)(x)].push_back(x);
      for (const auto& [q, xs] : by_query) {
        const Canonification f = least_choice(dst, {q});
        const HfSet first = apply_oW(w, f, xs.front());
        for (const auto& x : xs) CHECK(apply_oW(w, f, x) == first);
      }
    }
  }

  TEST_CASE("zfc analog examples") {
    const Relation& wo = relation("WO");
    auto order_of = [&](const HfSet& x) {
      Canonification f;
      const HfSet t = tc(singleton(x));
      f.map[t] = wo.witnesses(t).all.front();
      return f;
    };
    CHECK(search_reduction_zfc_analog(parse_prenex("ALL x EX y (x in y)"), HfSet(), order_of(HfSet())) ==
          S("{{}}"));
    for (const auto& x : plain_universe(2))
      CHECK(search_reduction_zfc_analog(parse_prenex("ALL x EX y (y = x)"), x, order_of(x)) == x);
  }

  TEST_CASE("the zfc analog finds the least witness") {
    std::mt19937_64 rng(41);
    const Relation& wo = relation("WO");
    int found = 0;
    for (int i = 0; i < 100; ++i) {
      std::vector<std::string> scope = {"x", "y"};
      PrenexStatement phi;
      phi.blocks = {{"x", "y"}};
      phi.matrix = make_delta0(oracle::random_formula(rng, 2 + rng() % 5, scope));
      const HfSet x = ack_enumerate(rng() % 16);
      const HfSet t = tc(singleton(x));
      Canonification f;
      f.map[t] = wo.witnesses(t).all.back();
      std::uint64_t least = 0;
      while (least < 4096 && !oracle::eval(*phi.matrix.root, {{"x", oracle::index_of(x)}, {"y", least}})) ++least;
      if (least == 4096) {
        CHECK_THROWS_AS(search_reduction_zfc_analog(phi, x, f, 4096), Exhausted);
        continue;
      }
      const HfSet y = search_reduction_zfc_analog(phi, x, f, 4096);
      CHECK(ack_index(y) == least);
      CHECK(eval_delta0(phi.matrix, {{"x", x}, {"y", y}}));
      ++found;
    }
    CHECK(found > 50);
    const auto phi = parse_prenex("ALL x EX y (x in y)");
    Canonification bad;
    bad.map[tc(singleton(HfSet()))] = HfSet();
    bad.map[tc(singleton(S("{{}}")))] = HfSet();
    CHECK_THROWS_AS(search_reduction_zfc_analog(phi, S("{{}}"), bad), WitnessExecutionError);
  }
}
