#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "otmlab/relations.hpp"

using namespace otmlab;

namespace {

HfSet S(const char* s) { return HfSet::parse(s); }

// Bit-level counts over the 4 sets of V_3, indexed 0..3.
std::size_t count_families(bool disjoint) {
  std::size_t n = 0;
  // Families are sets of 0..3 distinct nonempty blocks.
  std::vector<unsigned> blocks;
  for (unsigned a = 1; a < 16; ++a) blocks.push_back(a);
  ++n;  // the empty family
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    ++n;
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      if (disjoint && (blocks[i] & blocks[j])) continue;
      ++n;
      for (std::size_t k = j + 1; k < blocks.size(); ++k) {
        if (disjoint && ((blocks[i] | blocks[j]) & blocks[k])) continue;
        ++n;
      }
    }
  }
  return n;
}

// Reflexive partial orders on every subset of a 4-element set.
std::size_t count_posets() {
  std::size_t n = 0;
  for (unsigned field = 0; field < 16; ++field) {
    std::vector<unsigned> pts;
    for (unsigned i = 0; i < 4; ++i)
      if (field >> i & 1) pts.push_back(i);
    const std::size_t k = pts.size();
    const std::size_t off = k * (k - 1);
    for (std::uint64_t rel = 0; rel < (std::uint64_t{1} << off); ++rel) {
      bool le[4][4] = {};
      std::size_t bit = 0;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) le[i][j] = i == j || (rel >> bit++ & 1);
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i)
        for (std::size_t j = 0; j < k && ok; ++j) {
          if (i != j && le[i][j] && le[j][i]) ok = false;
          for (std::size_t m = 0; m < k && ok; ++m)
            if (le[i][j] && le[j][m] && !le[i][m]) ok = false;
        }
      n += ok;
    }
  }
  return n;
}

HfSet pairs(std::initializer_list<std::pair<const char*, const char*>> ps) {
  std::vector<HfSet> v;
  for (auto [a, b] : ps) v.push_back(kpair(S(a), S(b)));
  return HfSet::of(v);
}

std::uint64_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

TEST_SUITE("relations") {
  TEST_CASE("universe sizes") {
    CHECK(plain_universe(3).size() == 16);
    CHECK(plain_universe(2).size() == 4);
    CHECK(family_universe(3, true).size() == count_families(true));
    CHECK(family_universe(3, false).size() == count_families(false));
    CHECK(family_universe(3, false).size() == 576);
    CHECK(poset_universe(3).size() == count_posets());
    CHECK(poset_universe(3).size() == 318);
    for (const auto& p : poset_universe(3)) REQUIRE(is_poset(p));
    for (const auto& f : family_universe(3, true)) REQUIRE(is_disjoint_family(f));
  }

  TEST_CASE("catalog") {
    CHECK(relation_names().size() == 11);
    CHECK(relation("AC'").name == "AC_prime");
    CHECK_THROWS_AS(relation("nope"), std::invalid_argument);
  }

  TEST_CASE("witness lists match brute force") {
    for (const auto& name : relation_names()) {
      const Relation& r = relation(name);
      CAPTURE(name);
      for (const auto& x : r.instances(3)) {
        if (!r.domain(x)) continue;
        const WitnessSpace w = r.witnesses(x);
        const std::string xs = x.to_string();
        CAPTURE(xs);
        if (!w.complete) {
          for (const auto& y : w.extremal) REQUIRE(r.holds(x, y));
          continue;
        }
        REQUIRE(std::is_sorted(w.all.begin(), w.all.end()));
        REQUIRE(std::adjacent_find(w.all.begin(), w.all.end()) == w.all.end());
        for (const auto& y : w.all) REQUIRE(r.holds(x, y));
        if (name == "WO") {
          REQUIRE(w.all.size() == factorial(x.size()));
          continue;
        }
        if (name == "AC_prime" || name == "AC") {
          std::size_t prod = 1;
          for (const auto& a : x.elements()) prod *= a.size();
          REQUIRE(w.all.size() == prod);
          continue;
        }
        // Every other witness is a member or subset of x, of its union,
        // or of the field of the order.
        std::set<HfSet> pool;
        for (const auto& base : {x, big_union(x), field(x)}) {
          for (const auto& e : base.elements()) pool.insert(e);
          if (base.size() <= 10)
            for (auto& s : subsets(base)) pool.insert(s);
        }
        std::vector<HfSet> expect;
        // MuC lists the witnesses inside the union only.
        for (const auto& y : pool)
          if (r.holds(x, y) && (name != "MuC" || is_subset(y, big_union(x)))) expect.push_back(y);
        REQUIRE(w.all == expect);
      }
    }
  }

  TEST_CASE("implication form accepts everything off the domain") {
    const Relation& pp = relation("PP");
    CHECK(pp.accepts(HfSet(), S("{{{}}}")));
    CHECK_FALSE(pp.accepts(S("{{}}"), S("{{{}}}")));
    CHECK(relation("PP2").accepts(S("{{}}"), HfSet()));
  }

  TEST_CASE("orders") {
    const HfSet x = S("{{},{{}},{{{}}}}");
    const auto xs = x.elements();
    const HfSet lt = strict_order_from(xs);
    CHECK(is_strict_order_on(lt, x));
    CHECK(order_sequence(lt, x) == xs);
    CHECK_FALSE(is_strict_order_on(lt, S("{{},{{}}}")));
    CHECK_FALSE(is_strict_order_on(set_union(lt, singleton(kpair(xs[2], xs[0]))), x));
    CHECK(is_strict_order_on(HfSet(), HfSet()));
    const auto big = relation("WO").witnesses(plain_universe(4).back());
    CHECK_FALSE(big.complete);
  }

  TEST_CASE("posets") {
    // a <= b, a <= c: two maximal elements and two maximal chains.
    const HfSet p = pairs({{"{}", "{}"}, {"{{}}", "{{}}"}, {"{{{}}}", "{{{}}}"}, {"{}", "{{}}"}, {"{}", "{{{}}}"}});
    CHECK(is_poset(p));
    CHECK(field(p).size() == 3);
    CHECK(maximal_elements(p) == S("{{{}},{{{}}}}"));
    CHECK(poset_leq(p, S("{}"), S("{{}}")));
    CHECK_FALSE(poset_leq(p, S("{{}}"), S("{{{}}}")));
    CHECK(is_chain(p, S("{{},{{}}}")));
    CHECK(is_maximal_chain(p, S("{{},{{}}}")));
    CHECK_FALSE(is_maximal_chain(p, S("{{}}")));
    CHECK_FALSE(is_chain(p, S("{{{}},{{{}}}}")));
    CHECK(relation("HMP").witnesses(p).all.size() == 2);
    CHECK_FALSE(is_poset(pairs({{"{}", "{{}}"}})));
    CHECK_FALSE(is_poset(pairs({{"{}", "{}"}, {"{{}}", "{{}}"}, {"{}", "{{}}"}, {"{{}}", "{}"}})));
  }

  TEST_CASE("families") {
    CHECK(is_disjoint_family(S("{{{}},{{{}}}}")));
    CHECK_FALSE(is_disjoint_family(S("{{{}},{{},{{}}}}")));
    CHECK_FALSE(is_nonempty_family(S("{{}}")));
    const HfSet fam = S("{{{}},{{},{{}}}}");
    const HfSet f = HfSet::of({kpair(S("{{}}"), S("{}")), kpair(S("{{},{{}}}"), S("{{}}"))});
    CHECK(is_choice_function(f, fam));
    CHECK_FALSE(is_choice_function(HfSet::of({kpair(S("{{}}"), S("{}"))}), fam));
  }

  TEST_CASE("statements define relations") {
    PrenexStatement s;
    s.blocks = {{"x", "y"}};
    s.matrix = make_delta0(Formula::atom(Formula::Kind::in, "x", "y"));
    const Relation r = relation_from_statement(s, "succ");
    CHECK(r.holds(HfSet(), S("{{}}")));
    CHECK_FALSE(r.holds(HfSet(), HfSet()));
    CHECK(r.domain(S("{{{}}}")));
  }
}
