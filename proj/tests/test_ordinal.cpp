#include <doctest.h>

#include "oracles.hpp"
#include "otmlab/ordinal.hpp"

using namespace otmlab;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }

std::vector<oracle::Lex> below_w3(std::uint64_t max_coeff) {
  std::vector<oracle::Lex> v;
  for (std::uint64_t a = 0; a <= max_coeff; ++a)
    for (std::uint64_t b = 0; b <= max_coeff; ++b)
      for (std::uint64_t c = 0; c <= max_coeff; ++c) v.push_back({{c, b, a}});
  return v;
}

}  // namespace

TEST_SUITE("ordinal") {
  TEST_CASE("parse and print") {
    for (const char* s : {"0", "5", "w", "w+1", "w*2", "w^2*3+w*2+7", "w^w", "w^(w+1)*2+3", "w^(w^2)"})
      CHECK(O(s).to_string() == s);
    CHECK(O("w^1").to_string() == "w");
    CHECK(O("w*1+0").to_string() == "w");
    CHECK_THROWS(O("w+"));
    CHECK_THROWS(O("x"));
  }

  TEST_CASE("absorption and non-commutativity") {
    CHECK(O("1") + O("w") == O("w"));
    CHECK(O("w") + O("1") == O("w+1"));
    CHECK(O("2") * O("w") == O("w"));
    CHECK(O("w") * O("2") == O("w*2"));
    CHECK(O("w+1") * O("w") == O("w^2"));
    CHECK(O("w^2+w") + O("w^2") == O("w^2*2"));
    CHECK(O("w^w") * O("w") == O("w^(w+1)"));
  }

  TEST_CASE("classification") {
    CHECK(O("0").is_zero());
    CHECK(O("w").is_limit());
    CHECK(O("w+3").is_successor());
    CHECK(O("w+3").finite_part() == 3);
    CHECK(O("w^2*2+w+3").limit_part() == O("w^2*2+w"));
    CHECK(O("w^2*2+w+3").truncate_below(O("2")) == O("w^2*2"));
    CHECK(O("w+3").predecessor() == O("w+2"));
    CHECK_THROWS_AS(O("w").predecessor(), std::domain_error);
    CHECK(subtract(O("w^2+w"), O("w")) == O("w^2+w"));
    CHECK(subtract(O("w*2+1"), O("w")) == O("w+1"));
  }

  TEST_CASE("arithmetic agrees with coefficient sequences below w^3") {
    const auto xs = below_w3(2);
    for (const auto& a : xs) {
      const Ordinal oa = oracle::to_ordinal(a);
      for (const auto& b : xs) {
        const Ordinal ob = oracle::to_ordinal(b);
        REQUIRE(oa + ob == oracle::to_ordinal(oracle::add(a, b)));
        REQUIRE(oa * ob == oracle::to_ordinal(oracle::mul(a, b)));
        const int c = oracle::compare(a, b);
        REQUIRE((oa <=> ob) == (c < 0 ? std::strong_ordering::less
                                : c > 0 ? std::strong_ordering::greater
                                        : std::strong_ordering::equal));
      }
    }
  }

  TEST_CASE("addition and multiplication laws") {
    const auto xs = below_w3(1);
    for (const auto& a : xs)
      for (const auto& b : xs)
        for (const auto& c : xs) {
          const Ordinal x = oracle::to_ordinal(a), y = oracle::to_ordinal(b), z = oracle::to_ordinal(c);
          REQUIRE((x + y) + z == x + (y + z));
          REQUIRE((x * y) * z == x * (y * z));
          REQUIRE(x * (y + z) == x * y + x * z);
          if (y < z) REQUIRE(x + y < x + z);
          REQUIRE(subtract(x + y, x) == y);
        }
  }

  TEST_CASE("pairing on naturals follows the shell order") {
    const auto order = oracle::pairs_in_order(40);
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto [a, b] = order[i];
      REQUIRE(godel_pair(a, b) == Ordinal(i));
      const auto [ua, ub] = godel_unpair(Ordinal(i));
      REQUIRE(ua == Ordinal(a));
      REQUIRE(ub == Ordinal(b));
    }
  }

  TEST_CASE("pairing at limits") {
    CHECK(godel_pair(0, O("w")) == O("w"));
    CHECK(godel_pair(O("w"), 0) == O("w*2"));
    CHECK(godel_pair(O("w"), O("w")) == O("w*3"));
    CHECK(pairs_below(O("w")) == O("w"));
    CHECK(pairs_below(O("w+1")) == O("w*3+1"));
    CHECK(godel_unpair(O("w*2+5")) == std::pair<Ordinal, Ordinal>{O("w"), 5});
  }

  TEST_CASE("liminf of described sequences") {
    DescribedSequence periodic{DescribedSequence::Periodic{{O("9")}, {O("3"), O("w"), O("1")}}};
    CHECK(periodic.at(0) == O("9"));
    CHECK(periodic.at(2) == O("w"));
    CHECK(liminf(periodic) == O("1"));
    DescribedSequence sweep{DescribedSequence::Sweep{O("w"), 2, O("w*2")}};
    CHECK(sweep.at(3) == O("w+6"));
    CHECK(liminf(sweep) == O("w*2"));
  }

  TEST_CASE("largest_satisfying") {
    CHECK(largest_satisfying([](const Ordinal& x) { return x <= O("w^2+w*3+4"); }) == O("w^2+w*3+4"));
    CHECK(largest_satisfying([](const Ordinal& x) { return x < O("7"); }) == O("6"));
  }
}
