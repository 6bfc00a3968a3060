#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "otmlab/setcode.hpp"

using namespace otmlab;

namespace {

HfSet S(const char* s) { return HfSet::parse(s); }

HfSet random_set(std::mt19937_64& rng, unsigned rank) {
  // A random subset of V_rank.
  std::uint64_t n = rank <= 1 ? rng() % 2 : rank == 2 ? rng() % 4 : rank == 3 ? rng() % 16 : rng() % 65536;
  return ack_enumerate(n);
}

}  // namespace

TEST_SUITE("setcode") {
  TEST_CASE("literals") {
    CHECK(S("{}").empty());
    CHECK(HfSet::of({}) == HfSet());
    CHECK(set_intersection(S("{{}}"), S("{{{}}}")) == HfSet());
    CHECK(S("{{},{{}}}").size() == 2);
    CHECK(S("{ {} , {} }") == S("{{}}"));
    CHECK(S("{{{}},{}}").to_string() == "{{},{{}}}");
    CHECK_THROWS(S("{"));
    CHECK_THROWS(S("{}}"));
  }

  TEST_CASE("ackermann indices agree with the bit oracle") {
    for (std::uint64_t n = 0; n < 70000; n += 7) {
      const HfSet x = ack_enumerate(n);
      REQUIRE(oracle::index_of(x) == n);
      REQUIRE(ack_index(x) == n);
    }
    for (std::uint64_t a = 0; a < 300; ++a)
      for (std::uint64_t b = 0; b < 300; ++b) REQUIRE((ack_enumerate(a) < ack_enumerate(b)) == (a < b));
  }

  TEST_CASE("ranks") {
    CHECK(rank_below(3).size() == 4);
    CHECK(rank_at_most(3).size() == 16);
    for (const auto& x : rank_at_most(3)) CHECK(x.rank() <= 3);
    CHECK(von_neumann(3).rank() == 3);
    CHECK(von_neumann(3).size() == 3);
  }

  TEST_CASE("set algebra") {
    const HfSet a = S("{{},{{}}}"), b = S("{{{}},{{{}}}}");
    CHECK(set_union(a, b).size() == 3);
    CHECK(set_intersection(a, b) == S("{{{}}}"));
    CHECK(set_difference(a, b) == S("{{}}"));
    CHECK(big_union(S("{{{}},{{{}}}}")) == S("{{},{{}}}"));
    CHECK(is_subset(S("{{}}"), a));
    CHECK(tc(S("{{{{}}}}")) == S("{{},{{}},{{{}}}}"));
    CHECK(is_transitive(von_neumann(4)));
    CHECK_FALSE(is_transitive(S("{{{}}}")));
    const HfSet p = kpair(a, b);
    CHECK(kunpair(p) == std::pair<HfSet, HfSet>{a, b});
    CHECK(kunpair(kpair(a, a)) == std::pair<HfSet, HfSet>{a, a});
    CHECK_FALSE(kunpair(S("{{},{{}}}")));
  }

  TEST_CASE("rank cap") {
    CHECK(rank_cap() == 6);
    HfSet deep = von_neumann(0);
    for (int i = 0; i < 7; ++i) deep = singleton(deep);
    CHECK_THROWS_AS(ack_index(deep), RepresentationOverflow);
  }

  TEST_CASE("encode small sets") {
    CHECK(encode(S("{}")) == SetCode{Ordinal(1), {}});
    CHECK(encode(S("{{},{{}}}")) == SetCode{Ordinal(3), {Ordinal(1), Ordinal(4), Ordinal(5)}});
  }

  TEST_CASE("decode inverts encode") {
    for (const auto& x : rank_at_most(3)) CHECK(decode(encode(x)) == x);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 100; ++i) {
      const HfSet x = random_set(rng, 4);
      REQUIRE(decode(encode(x)) == x);
      REQUIRE(tape_to_code(code_to_tape(encode(x))) == encode(x));
    }
  }

  TEST_CASE("any labelling codes the same set") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 30; ++i) {
      const HfSet x = random_set(rng, 4);
      std::vector<std::size_t> order(code_domain(x).size());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      const SetCode c = encode_with(x, order);
      REQUIRE(is_valid(c));
      REQUIRE(decode(c) == x);
    }
  }

  TEST_CASE("invalid codes are rejected with a reason") {
    auto reason = [](SetCode c) { return is_valid(c).reason; };
    // 0 and 1 are both empty.
    CHECK(reason({Ordinal(3), {Ordinal(4)}}) == InvalidReason::not_extensional);
    // 0 in 0.
    CHECK(reason({Ordinal(1), {Ordinal(0)}}) == InvalidReason::ill_founded);
    CHECK(reason({Ordinal(2), {Ordinal(4)}}) == InvalidReason::pair_out_of_bound);
    // 0, {0}, {{0}} and {0,{0}}: the last two are members of nothing.
    CHECK(reason({Ordinal(4), {Ordinal(1), Ordinal(5), Ordinal(9), Ordinal(10)}}) == InvalidReason::no_unique_top);
    CHECK(reason({Ordinal::omega(), {}}) == InvalidReason::transfinite_bound);
    CHECK_THROWS_AS(decode({Ordinal(1), {Ordinal(0)}}), InvalidCode);
  }

  TEST_CASE("subsets come in ackermann order") {
    auto subs = subsets(S("{{},{{}}}"));
    REQUIRE(subs.size() == 4);
    CHECK(std::is_sorted(subs.begin(), subs.end()));
    CHECK(subsets(S("{{},{{}},{{{}}}}"), 1).size() == 4);
  }
}
