#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "otmlab/ordinal.hpp"
#include "otmlab/tape.hpp"

namespace otmlab {

enum class TapeRole { input, work, output, miracle, oracle };
enum class Move { left, right, stay };

std::string to_string(TapeRole r);
std::optional<TapeRole> tape_role_from_string(std::string_view s);
char to_char(Move m);

using StateId = std::uint32_t;
/// Bit i holds the symbol read on tape i.
using ReadVector = std::uint32_t;

struct Action {
  /// Per tape: -1 keeps the symbol, 0/1 writes it.
  std::vector<std::int8_t> write;
  std::vector<Move> move;
  StateId next = 0;
  friend bool operator==(const Action&, const Action&) = default;
};

/// An OTM transition table. States are indexed by naturals in declaration
/// order; the index is what the liminf rule minimizes at limit times.
struct Program {
  std::vector<std::string> state_names;
  StateId start = 0;
  std::vector<bool> halting;  // per state
  std::optional<StateId> miracle_state;
  std::vector<TapeRole> tapes;
  std::map<std::pair<StateId, ReadVector>, Action> transitions;

  std::size_t tape_count() const { return tapes.size(); }
  std::size_t state_count() const { return state_names.size(); }
  bool is_halting(StateId s) const { return halting.at(s); }
  /// Index of the tape with the given role, if present.
  std::optional<std::size_t> tape_index(TapeRole r) const;
  const Action& action(StateId s, ReadVector r) const;

  /// Throws std::invalid_argument naming the first broken invariant.
  void validate() const;

  friend bool operator==(const Program&, const Program&) = default;
};

struct Configuration {
  StateId state = 0;
  std::vector<Ordinal> heads;
  std::vector<Tape> tapes;
  Ordinal time;

  /// Equality of everything except the time stamp.
  bool same_snapshot(const Configuration& other) const {
    return state == other.state && heads == other.heads && tapes == other.tapes;
  }
  std::size_t snapshot_hash() const;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

Configuration initial_configuration(const Program& p, const Tape& input);
ReadVector read_vector(const Configuration& c);

/// One successor step. Moving left from a limit cell resets the head to 0;
/// moving left from cell 0 stays at 0.
Configuration step(const Program& p, const Configuration& c);

/// Evidence that a run repeats forever from `first`.
///
/// Level 0: after `period` successor steps from `first` the machine reaches
/// `last`, which equals `first` with the heads listed in `shifts` moved right
/// by the given amounts (zero for heads that return to the same cell).
/// Level l >= 1: `first` and `last` are limit configurations of level l
/// whose snapshots coincide, `blocks` limits of level l apart.
struct LoopCertificate {
  unsigned level = 0;
  std::uint64_t period = 0;
  std::uint64_t blocks = 0;
  std::vector<std::uint64_t> shifts;
  Configuration first;
  Configuration last;
};

/// Configuration at the least limit time above a certified level-0 loop.
/// Replays the loop and throws MalformedCertificate if it does not match.
Configuration resolve_limit(const Program& p, const LoopCertificate& cert);

struct RunBudget {
  std::uint64_t max_successor_steps = 100000;
  std::uint64_t max_limit_jumps = 16;
};

struct RunOptions {
  RunBudget budget;
  bool detect_loops = true;
  /// Number of successor configurations kept for loop detection.
  std::size_t history_window = 4096;
  /// Translated-loop candidates examined per step (most recent first).
  std::size_t candidates_per_step = 64;
};

enum class TraceKind { start, step, limit, miracle };

struct TraceEvent {
  TraceKind kind;
  const Configuration& config;
  unsigned level = 0;  // for limit events
};

struct RunHooks {
  /// Called whenever the miracle state is assumed; may rewrite the configuration's tapes.
  std::function<void(Configuration&)> on_miracle;
  std::function<void(const TraceEvent&)> on_event;
};

struct RunOutcome {
  enum class Kind { halted, diverges, unresolved };
  Kind kind = Kind::unresolved;
  /// Halted: the final configuration. Diverges: the configuration at the
  /// next limit. Unresolved: the last configuration reached.
  Configuration config;
  std::optional<LoopCertificate> certificate;
  std::string reason;
  std::uint64_t successor_steps = 0;
  std::uint64_t limit_jumps = 0;
};

std::string to_string(RunOutcome::Kind k);

RunOutcome run(const Program& p, const Tape& input, const RunOptions& options = {}, const RunHooks& hooks = {});
/// Runs from an arbitrary configuration, treated as the start of every level.
RunOutcome run_from(const Program& p, Configuration start, const RunOptions& options = {},
                    const RunHooks& hooks = {});

/// Replays a certificate; true iff it reproduces `last` exactly.
bool replay_certificate(const Program& p, const LoopCertificate& cert, const RunOptions& options = {});

}  // namespace otmlab
