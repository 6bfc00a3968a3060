#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "otmlab/machine.hpp"

using namespace otmlab;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }

void same_config(const Configuration& c, const oracle::Classical::Config& o) {
  REQUIRE(c.state == o.state);
  for (std::size_t t = 0; t < o.heads.size(); ++t) {
    REQUIRE(c.heads[t] == Ordinal(o.heads[t]));
    auto cells = c.tapes[t].finite_cells();
    REQUIRE(cells);
    std::vector<Ordinal> expected;
    for (auto i : oracle::Classical::ones(o.cells[t])) expected.push_back(i);
    REQUIRE(*cells == expected);
  }
}

std::size_t role(const Program& p, TapeRole r) { return *p.tape_index(r); }

}  // namespace

TEST_SUITE("machine") {
  TEST_CASE("successor steps match a classical simulator") {
    std::mt19937_64 rng(11);
    for (int m = 0; m < 6; ++m) {
      const auto tm = oracle::Classical::random(rng);
      const Program p = tm.program();
      Configuration c = initial_configuration(p, Tape{});
      auto o = tm.initial();
      for (int s = 0; s < 300 && !tm.halting[o.state]; ++s) {
        c = step(p, c);
        tm.step(o);
        same_config(c, o);
        REQUIRE(c.time == Ordinal(s + 1));
      }
    }
  }

  TEST_CASE("halting at time zero") {
    const Program p = fixture_program("halt_immediately");
    const RunOutcome o = run(p, Tape{});
    CHECK(o.kind == RunOutcome::Kind::halted);
    CHECK(o.config.time == O("0"));
  }

  TEST_CASE("right sweep resolves the first limit") {
    const Program p = fixture_program("right_sweep");
    RunOptions opts;
    opts.budget = {2000, 2};
    const RunOutcome o = run(p, Tape{}, opts);
    REQUIRE(o.kind == RunOutcome::Kind::halted);
    CHECK(o.config.time == O("w+2"));
    CHECK(o.config.tapes[role(p, TapeRole::work)].to_string() == "{[0,w)}");
    CHECK(o.config.heads[role(p, TapeRole::work)] == O("w"));
    CHECK(o.limit_jumps == 1);
  }

  TEST_CASE("moving left from a limit cell returns to cell 0") {
    const Program p = fixture_program("move_left_at_limit");
    const RunOutcome o = run(p, Tape{});
    REQUIRE(o.kind == RunOutcome::Kind::halted);
    CHECK(o.config.time == O("w+1"));
    CHECK(o.config.heads[role(p, TapeRole::work)] == O("0"));
    CHECK(o.config.tapes[role(p, TapeRole::work)].to_string() == "{[0,w)}");
  }

  TEST_CASE("second and higher limits") {
    const RunOutcome twice = run(fixture_program("double_sweep"), Tape{});
    REQUIRE(twice.kind == RunOutcome::Kind::halted);
    CHECK(twice.config.time == O("w*2+1"));
    const RunOutcome nested = run(fixture_program("nested_limit"), Tape{});
    REQUIRE(nested.kind == RunOutcome::Kind::halted);
    CHECK(nested.config.time == O("w^2+1"));
  }

  TEST_CASE("a loop that repeats its limit diverges") {
    const Program p = fixture_program("busy_loop");
    const RunOutcome o = run(p, Tape{});
    REQUIRE(o.kind == RunOutcome::Kind::diverges);
    CHECK(o.config.time == O("w"));
    REQUIRE(o.certificate);
    CHECK(replay_certificate(p, *o.certificate));
    CHECK(resolve_limit(p, *o.certificate).time == O("w"));
  }

  TEST_CASE("a forged certificate is rejected") {
    const Program p = fixture_program("busy_loop");
    RunOutcome o = run(p, Tape{});
    REQUIRE(o.certificate);
    LoopCertificate bad = *o.certificate;
    bad.period += 1;
    CHECK_FALSE(replay_certificate(p, bad));
    CHECK_THROWS_AS(resolve_limit(p, bad), MalformedCertificate);
  }

  TEST_CASE("budgets") {
    const Program p = fixture_program("right_sweep");
    RunOptions opts;
    opts.detect_loops = false;
    opts.budget = {50, 2};
    const RunOutcome o = run(p, Tape{}, opts);
    CHECK(o.kind == RunOutcome::Kind::unresolved);
    CHECK(o.successor_steps == 50);
    opts.detect_loops = true;
    opts.budget = {2000, 0};
    CHECK(run(p, Tape{}, opts).kind == RunOutcome::Kind::unresolved);
  }

  TEST_CASE("trace events") {
    const Program p = fixture_program("right_sweep");
    std::vector<TraceKind> kinds;
    RunHooks hooks;
    hooks.on_event = [&](const TraceEvent& e) { kinds.push_back(e.kind); };
    run(p, Tape{}, {}, hooks);
    REQUIRE(!kinds.empty());
    CHECK(kinds.front() == TraceKind::start);
    CHECK(std::count(kinds.begin(), kinds.end(), TraceKind::limit) == 1);
  }

  TEST_CASE("the miracle hook fires on entry to the miracle state") {
    const Program p = parse_program(
        "tapes in work out miracle;\n"
        "state a start;\nstate m miracle;\nstate done halt;\n"
        "on a -> goto m;\n"
        "on m miracle=1 -> goto done;\n"
        "on m miracle=0 -> goto m;\n");
    int calls = 0;
    RunHooks hooks;
    hooks.on_miracle = [&](Configuration& c) {
      ++calls;
      c.tapes[*p.tape_index(TapeRole::miracle)] = Tape::from_cells(std::vector<Ordinal>{0});
    };
    const RunOutcome o = run(p, Tape{}, {}, hooks);
    CHECK(o.kind == RunOutcome::Kind::halted);
    CHECK(calls == 1);
  }
}
