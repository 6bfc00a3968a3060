#include "otmlab/machine.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "otmlab/errors.hpp"

namespace otmlab {

std::string to_string(TapeRole r) {
  switch (r) {
    case TapeRole::input: return "in";
    case TapeRole::work: return "work";
    case TapeRole::output: return "out";
    case TapeRole::miracle: return "miracle";
    case TapeRole::oracle: return "oracle";
  }
  return "?";
}

std::optional<TapeRole> tape_role_from_string(std::string_view s) {
  if (s == "in") return TapeRole::input;
  if (s == "work") return TapeRole::work;
  if (s == "out") return TapeRole::output;
  if (s == "miracle") return TapeRole::miracle;
  if (s == "oracle") return TapeRole::oracle;
  return std::nullopt;
}

char to_char(Move m) {
  switch (m) {
    case Move::left: return 'L';
    case Move::right: return 'R';
    case Move::stay: return 'S';
  }
  return '?';
}

std::string to_string(RunOutcome::Kind k) {
  switch (k) {
    case RunOutcome::Kind::halted: return "HALTED";
    case RunOutcome::Kind::diverges: return "DIVERGES";
    case RunOutcome::Kind::unresolved: return "UNRESOLVED";
  }
  return "?";
}

std::optional<std::size_t> Program::tape_index(TapeRole r) const {
  for (std::size_t i = 0; i < tapes.size(); ++i)
    if (tapes[i] == r) return i;
  return std::nullopt;
}

const Action& Program::action(StateId s, ReadVector r) const {
  auto it = transitions.find({s, r});
  if (it == transitions.end())
    throw std::out_of_range("no transition for state " + state_names.at(s) + " read " + std::to_string(r));
  return it->second;
}

void Program::validate() const {
  if (state_names.empty()) throw std::invalid_argument("program has no states");
  if (halting.size() != state_names.size()) throw std::invalid_argument("halting flags do not match state count");
  if (start >= state_names.size()) throw std::invalid_argument("start state out of range");
  if (tapes.size() > 16) throw std::invalid_argument("too many tapes");
  for (TapeRole required : {TapeRole::input, TapeRole::work, TapeRole::output}) {
    if (std::count(tapes.begin(), tapes.end(), required) != 1)
      throw std::invalid_argument("tape role '" + to_string(required) + "' must appear exactly once");
  }
  for (TapeRole optional : {TapeRole::miracle, TapeRole::oracle}) {
    if (std::count(tapes.begin(), tapes.end(), optional) > 1)
      throw std::invalid_argument("tape role '" + to_string(optional) + "' appears more than once");
  }
  if (miracle_state) {
    if (*miracle_state >= state_names.size()) throw std::invalid_argument("miracle state out of range");
    if (halting[*miracle_state]) throw std::invalid_argument("miracle state must not be a halt state");
  }
  const ReadVector combos = ReadVector{1} << tapes.size();
  for (StateId s = 0; s < state_names.size(); ++s) {
    if (halting[s]) continue;
    for (ReadVector r = 0; r < combos; ++r) {
      auto it = transitions.find({s, r});
      if (it == transitions.end())
        throw std::invalid_argument("missing transition for state " + state_names[s]);
      const Action& a = it->second;
      if (a.write.size() != tapes.size() || a.move.size() != tapes.size() || a.next >= state_names.size())
        throw std::invalid_argument("malformed action for state " + state_names[s]);
    }
  }
}

std::size_t Configuration::snapshot_hash() const {
  std::size_t h = std::hash<StateId>{}(state);
  for (const auto& o : heads) h = h * 31 + o.hash();
  for (const auto& t : tapes) h = h * 131 + t.hash();
  return h;
}

Configuration initial_configuration(const Program& p, const Tape& input) {
  Configuration c;
  c.state = p.start;
  c.heads.assign(p.tape_count(), Ordinal{});
  c.tapes.assign(p.tape_count(), Tape{});
  if (auto in = p.tape_index(TapeRole::input)) c.tapes[*in] = input;
  return c;
}

ReadVector read_vector(const Configuration& c) {
  ReadVector r = 0;
  for (std::size_t t = 0; t < c.tapes.size(); ++t)
    if (c.tapes[t].read(c.heads[t])) r |= ReadVector{1} << t;
  return r;
}

namespace {

Ordinal moved(const Ordinal& head, Move m) {
  switch (m) {
    case Move::right: return head.successor();
    case Move::left: return head.is_successor() ? head.predecessor() : Ordinal{};
    case Move::stay: return head;
  }
  return head;
}

Configuration apply(const Action& a, const Configuration& c) {
  Configuration n;
  n.state = a.next;
  n.time = c.time.successor();
  n.heads.reserve(c.heads.size());
  n.tapes.reserve(c.tapes.size());
  for (std::size_t t = 0; t < c.tapes.size(); ++t) {
    n.tapes.push_back(a.write[t] < 0 ? c.tapes[t] : c.tapes[t].write(c.heads[t], a.write[t] == 1));
    n.heads.push_back(moved(c.heads[t], a.move[t]));
  }
  return n;
}

const Ordinal& omega() {
  static const Ordinal w = Ordinal::omega();
  return w;
}

// Cell-wise minimum over a stretch of the run.
struct Summary {
  StateId state_min = 0;
  std::vector<Ordinal> heads_min;
  std::vector<Tape> tapes_and;

  static Summary of(const Configuration& c) { return Summary{c.state, c.heads, c.tapes}; }
  void merge(const Configuration& c) {
    state_min = std::min(state_min, c.state);
    for (std::size_t t = 0; t < heads_min.size(); ++t) {
      if (c.heads[t] < heads_min[t]) heads_min[t] = c.heads[t];
      tapes_and[t] = intersect(tapes_and[t], c.tapes[t]);
    }
  }
  void merge(const Summary& s) {
    state_min = std::min(state_min, s.state_min);
    for (std::size_t t = 0; t < heads_min.size(); ++t) {
      if (s.heads_min[t] < heads_min[t]) heads_min[t] = s.heads_min[t];
      tapes_and[t] = intersect(tapes_and[t], s.tapes_and[t]);
    }
  }
};

struct HistEntry {
  Configuration cfg;
  // Per tape: the step taken from this configuration moved that head left
  // from the first cell of its block (cell 0 or a limit cell).
  std::vector<bool> left_at_base;
};

std::vector<bool> left_at_base(const Action& a, const Configuration& c) {
  std::vector<bool> out(c.heads.size());
  for (std::size_t t = 0; t < c.heads.size(); ++t)
    out[t] = a.move[t] == Move::left && !c.heads[t].is_successor();
  return out;
}

struct SweptTape {
  std::size_t tape;
  Ordinal base;
  std::uint64_t lo, hi, shift;
  bool bit;    // stabilized value behind the sweep
  bool ahead;  // constant value of the cells not yet reached
};

struct LoopAnalysis {
  std::vector<std::uint64_t> shifts;
  std::vector<SweptTape> swept;
  Configuration limit;
};

Ordinal at(const Ordinal& base, std::uint64_t offset) { return add(base, Ordinal{offset}); }

// Checks that seg[0] -> seg.back() is a loop that repeats forever, up to a
// uniform rightward translation of some heads, and computes the
// configuration at the next limit. seg.back() is the configuration reached
// after seg.size()-1 steps; its left_at_base flags are not consulted.
std::optional<LoopAnalysis> analyze_loop(std::span<const HistEntry> seg, std::string* why) {
  const Configuration& a = seg.front().cfg;
  const Configuration& b = seg.back().cfg;
  const std::size_t period = seg.size() - 1;
  auto reject = [&](const char* reason) -> std::optional<LoopAnalysis> {
    if (why) *why = reason;
    return std::nullopt;
  };
  if (period == 0 || a.state != b.state) return reject("state mismatch");
  const std::size_t n = a.tapes.size();
  LoopAnalysis out;
  out.shifts.resize(n);
  out.limit.time = add(a.time.limit_part(), omega());
  out.limit.state = a.state;
  for (std::size_t k = 0; k < period; ++k) out.limit.state = std::min(out.limit.state, seg[k].cfg.state);
  out.limit.heads.resize(n);
  out.limit.tapes.resize(n);

  for (std::size_t t = 0; t < n; ++t) {
    const Ordinal base = a.heads[t].limit_part();
    if (b.heads[t].limit_part() != base) return reject("head changed block");
    const std::uint64_t na = a.heads[t].finite_part();
    const std::uint64_t nb = b.heads[t].finite_part();
    if (nb < na) return reject("head moved left overall");
    const std::uint64_t d = nb - na;
    if (d == 0 && a.tapes[t] != b.tapes[t]) return reject("tape changed");
    out.shifts[t] = d;
    std::uint64_t lo = na, hi = na;
    for (std::size_t k = 0; k < period; ++k) {
      const Ordinal& h = seg[k].cfg.heads[t];
      if (h.limit_part() != base) return reject("head left its block");
      lo = std::min(lo, h.finite_part());
      hi = std::max(hi, h.finite_part());
      if (d > 0 && seg[k].left_at_base[t]) return reject("left move at block start inside a translated loop");
    }
    for (std::uint64_t c = lo; c <= hi; ++c)
      if (b.tapes[t].read(at(base, c + d)) != a.tapes[t].read(at(base, c))) return reject("window mismatch");

    if (d == 0) {
      Ordinal head = a.heads[t];
      Tape tape = a.tapes[t];
      for (std::size_t k = 1; k < period; ++k) {
        if (seg[k].cfg.heads[t] < head) head = seg[k].cfg.heads[t];
        tape = intersect(tape, seg[k].cfg.tapes[t]);
      }
      out.limit.heads[t] = head;
      out.limit.tapes[t] = std::move(tape);
      continue;
    }
    const Ordinal block_end = add(base, omega());
    // Cells ahead of the window must look alike, or the translate differs.
    bool ahead = false;
    if (!a.tapes[t].zero_on(at(base, hi + 1), block_end)) {
      if (a.tapes[t].fill(at(base, hi + 1), block_end, true) != a.tapes[t]) return reject("unswept region not constant");
      ahead = true;
    }
    std::vector<bool> pattern;
    for (std::uint64_t r = 0; r < d; ++r) pattern.push_back(b.tapes[t].read(at(base, lo + r)));
    try {
      const Tape cycle[] = {a.tapes[t]};
      out.limit.tapes[t] = liminf_tapes(cycle, SweepFill{at(base, lo), pattern, block_end});
    } catch (const std::domain_error&) {
      return reject("non-constant sweep pattern");
    }
    out.limit.heads[t] = block_end;
    out.swept.push_back(SweptTape{t, base, lo, hi, d, pattern.front(), ahead});
  }
  return out;
}

// Minimum of every cell over the whole level-0 block, given the running
// minimum `acc` over the configurations already visited and the loop.
// Nullopt when that minimum is not a finite union of intervals.
std::optional<Summary> close_block(Summary acc, std::span<const HistEntry> seg, const LoopAnalysis& loop) {
  for (const auto& s : loop.swept) {
    Tape& tape = acc.tapes_and[s.tape];
    const Ordinal block_end = add(s.base, omega());
    if (!s.bit) {
      tape = tape.fill(at(s.base, s.lo), block_end, false);
      continue;
    }
    // Cell c later replays the history of c - shift, c - 2*shift, ...
    const std::uint64_t width = s.hi - s.lo + 1 + s.shift;
    std::vector<bool> chain(width, true);
    for (std::uint64_t c = 0; c < width; ++c) {
      bool m = true;
      if (s.lo + c > s.hi)
        m = s.ahead;
      else
        for (const auto& e : seg) m = m && e.cfg.tapes[s.tape].read(at(s.base, s.lo + c));
      chain[c] = m && (c >= s.shift ? chain[c - s.shift] : true);
      if (!chain[c]) tape = tape.write(at(s.base, s.lo + c), false);
    }
    const bool tail = chain[width - 1];
    for (std::uint64_t c = width - s.shift; c < width; ++c)
      if (chain[c] != tail) return std::nullopt;
    if (!tail) tape = tape.fill(at(s.base, s.lo + width), block_end, false);
  }
  return acc;
}

struct LevelEntry {
  Configuration cfg;
  std::optional<Summary> block;
};

class Executor {
 public:
  Executor(const Program& p, const RunOptions& o, const RunHooks& h) : p_(p), opt_(o), hooks_(h) {}

  // Stop as soon as this many limits of the given level were produced.
  void stop_after(unsigned level, std::uint64_t count) {
    stop_level_ = level;
    stop_count_ = count;
  }

  RunOutcome run(Configuration start, bool fire_miracle) {
    if (fire_miracle) maybe_miracle(start);
    run_start_ = start;
    emit(TraceKind::start, start);
    reset_level0(start);
    while (true) {
      const Configuration& cur = hist_.back().cfg;
      if (p_.is_halting(cur.state)) return finish(RunOutcome::Kind::halted, cur, "halted");
      if (steps_ >= opt_.budget.max_successor_steps)
        return finish(RunOutcome::Kind::unresolved, cur,
                      last_rejection_.empty() ? "successor step budget exhausted"
                                              : "successor step budget exhausted (last rejected loop: " +
                                                    last_rejection_ + ")");
      const Action& a = p_.action(cur.state, read_vector(cur));
      hist_.back().left_at_base = left_at_base(a, cur);
      Configuration next = apply(a, cur);
      ++steps_;
      maybe_miracle(next);
      emit(TraceKind::step, next);
      push(std::move(next));
      if (p_.is_halting(hist_.back().cfg.state) || !opt_.detect_loops) continue;
      if (auto done = detect()) return *done;
    }
  }

 private:
  const Program& p_;
  const RunOptions& opt_;
  const RunHooks& hooks_;

  Configuration run_start_;
  std::vector<HistEntry> hist_;
  std::uint64_t first_abs_ = 0;  // absolute index of hist_.front()
  std::unordered_map<std::size_t, std::vector<std::uint64_t>> exact_;
  std::unordered_map<std::size_t, std::vector<std::uint64_t>> keyed_;
  std::optional<Summary> acc0_;
  std::vector<std::vector<LevelEntry>> levels_;  // index 0 unused
  std::uint64_t steps_ = 0;
  std::uint64_t limits_ = 0;
  std::string last_rejection_;
  std::optional<unsigned> stop_level_;
  std::uint64_t stop_count_ = 0;
  std::uint64_t stop_seen_ = 0;

  void emit(TraceKind k, const Configuration& c, unsigned level = 0) {
    if (hooks_.on_event) hooks_.on_event(TraceEvent{k, c, level});
  }

  void maybe_miracle(Configuration& c) {
    if (p_.miracle_state && c.state == *p_.miracle_state && hooks_.on_miracle) {
      hooks_.on_miracle(c);
      emit(TraceKind::miracle, c);
    }
  }

  RunOutcome finish(RunOutcome::Kind k, const Configuration& c, std::string reason,
                    std::optional<LoopCertificate> cert = std::nullopt) {
    RunOutcome o;
    o.kind = k;
    o.config = c;
    o.reason = std::move(reason);
    o.certificate = std::move(cert);
    o.successor_steps = steps_;
    o.limit_jumps = limits_;
    return o;
  }

  std::size_t key_of(const Configuration& c) const {
    return std::hash<std::uint64_t>{}((std::uint64_t{c.state} << 32) | read_vector(c));
  }

  void reset_level0(const Configuration& c) {
    hist_.clear();
    exact_.clear();
    keyed_.clear();
    first_abs_ = 0;
    acc0_.reset();
    push(c);
  }

  void push(Configuration c) {
    const std::uint64_t abs = first_abs_ + hist_.size();
    if (acc0_)
      acc0_->merge(c);
    else
      acc0_ = Summary::of(c);
    exact_[c.snapshot_hash()].push_back(abs);
    keyed_[key_of(c)].push_back(abs);
    hist_.push_back(HistEntry{std::move(c), {}});
    const std::size_t window = std::max<std::size_t>(opt_.history_window, 2);
    if (hist_.size() > 2 * window) {
      const std::size_t drop = hist_.size() - window;
      hist_.erase(hist_.begin(), hist_.begin() + static_cast<long>(drop));
      first_abs_ += drop;
    }
  }

  std::optional<RunOutcome> detect() {
    const std::uint64_t j = first_abs_ + hist_.size() - 1;
    const Configuration& cur = hist_.back().cfg;
    const std::uint64_t window = std::max<std::size_t>(opt_.history_window, 2);
    const std::uint64_t floor = std::max(first_abs_, j > window ? j - window : 0);
    std::set<std::uint64_t, std::greater<>> candidates;
    for (std::uint64_t i : exact_[cur.snapshot_hash()])
      if (i >= floor && i < j) candidates.insert(i);
    const auto& keyed = keyed_[key_of(cur)];
    std::size_t taken = 0;
    for (auto it = keyed.rbegin(); it != keyed.rend() && taken < opt_.candidates_per_step; ++it) {
      if (*it >= j) continue;
      if (*it < floor) break;
      candidates.insert(*it);
      ++taken;
    }
    for (std::uint64_t i : candidates) {
      std::span<const HistEntry> seg(hist_.data() + (i - first_abs_), hist_.size() - (i - first_abs_));
      std::string why;
      auto loop = analyze_loop(seg, &why);
      if (!loop) {
        if (why == "non-constant sweep pattern") last_rejection_ = why;
        continue;
      }
      LoopCertificate cert;
      cert.level = 0;
      cert.period = j - i;
      cert.shifts = loop->shifts;
      cert.first = seg.front().cfg;
      cert.last = seg.back().cfg;
      auto block = close_block(*acc0_, seg, *loop);
      if (!block) {
        last_rejection_ = "non-constant sweep pattern";
        continue;
      }
      if (loop->limit.same_snapshot(cert.first))
        return finish(RunOutcome::Kind::diverges, loop->limit, "limit configuration repeats the loop start", cert);
      return on_limit(1, std::move(loop->limit), std::move(*block), std::move(cert));
    }
    return std::nullopt;
  }

  std::optional<RunOutcome> on_limit(unsigned level, Configuration c, Summary closed, LoopCertificate cert) {
    if (limits_ >= opt_.budget.max_limit_jumps)
      return finish(RunOutcome::Kind::unresolved, hist_.back().cfg, "limit budget exhausted");
    ++limits_;
    maybe_miracle(c);
    emit(TraceKind::limit, c, level);
    if (stop_level_ && *stop_level_ == level && ++stop_seen_ >= stop_count_)
      return finish(RunOutcome::Kind::unresolved, c, "stopped", cert);

    if (levels_.size() <= level) levels_.resize(level + 1);
    auto& seq = levels_[level];
    if (seq.empty()) seq.push_back(LevelEntry{run_start_, std::nullopt});
    seq.back().block = std::move(closed);

    for (std::size_t m = 0; m < seq.size(); ++m) {
      if (!seq[m].cfg.same_snapshot(c)) continue;
      Summary cyc = *seq[m].block;
      for (std::size_t k = m + 1; k < seq.size(); ++k) cyc.merge(*seq[k].block);
      Summary whole = *seq[0].block;
      for (std::size_t k = 1; k < seq.size(); ++k) whole.merge(*seq[k].block);

      Configuration up;
      up.state = cyc.state_min;
      up.heads = cyc.heads_min;
      up.tapes = cyc.tapes_and;
      up.time = add(seq[m].cfg.time.truncate_below(Ordinal{level + 1}), Ordinal::omega_pow(Ordinal{level + 1}));

      LoopCertificate up_cert;
      up_cert.level = level;
      up_cert.blocks = seq.size() - m;
      up_cert.shifts.assign(c.tapes.size(), 0);
      up_cert.first = seq[m].cfg;
      up_cert.last = c;
      if (up.same_snapshot(up_cert.first))
        return finish(RunOutcome::Kind::diverges, up, "limit configuration repeats the loop start", up_cert);
      return on_limit(level + 1, std::move(up), std::move(whole), std::move(up_cert));
    }

    seq.push_back(LevelEntry{c, std::nullopt});
    for (unsigned k = 1; k < level && k < levels_.size(); ++k) levels_[k] = {LevelEntry{c, std::nullopt}};
    reset_level0(c);
    return std::nullopt;
  }
};

}  // namespace

Configuration step(const Program& p, const Configuration& c) { return apply(p.action(c.state, read_vector(c)), c); }

RunOutcome run(const Program& p, const Tape& input, const RunOptions& options, const RunHooks& hooks) {
  Executor ex(p, options, hooks);
  return ex.run(initial_configuration(p, input), true);
}

RunOutcome run_from(const Program& p, Configuration start, const RunOptions& options, const RunHooks& hooks) {
  Executor ex(p, options, hooks);
  return ex.run(std::move(start), false);
}

namespace {

std::vector<HistEntry> replay_segment(const Program& p, const Configuration& first, std::uint64_t period) {
  std::vector<HistEntry> seg;
  seg.push_back(HistEntry{first, {}});
  for (std::uint64_t k = 0; k < period; ++k) {
    const Configuration& cur = seg.back().cfg;
    if (p.is_halting(cur.state)) break;
    const Action& a = p.action(cur.state, read_vector(cur));
    seg.back().left_at_base = left_at_base(a, cur);
    Configuration next = apply(a, cur);
    seg.push_back(HistEntry{std::move(next), {}});
  }
  return seg;
}

}  // namespace

Configuration resolve_limit(const Program& p, const LoopCertificate& cert) {
  if (cert.level != 0) throw MalformedCertificate("resolve_limit takes level-0 certificates");
  auto seg = replay_segment(p, cert.first, cert.period);
  if (seg.size() != cert.period + 1 || seg.back().cfg != cert.last)
    throw MalformedCertificate("replaying the loop does not reach the certified configuration");
  std::string why;
  auto loop = analyze_loop(seg, &why);
  if (!loop) throw MalformedCertificate("certified loop does not repeat: " + why);
  if (loop->shifts != cert.shifts) throw MalformedCertificate("head shifts differ from the certificate");
  return loop->limit;
}

bool replay_certificate(const Program& p, const LoopCertificate& cert, const RunOptions& options) {
  if (cert.level == 0) {
    auto seg = replay_segment(p, cert.first, cert.period);
    return seg.size() == cert.period + 1 && seg.back().cfg == cert.last;
  }
  Executor ex(p, options, {});
  ex.stop_after(cert.level, cert.blocks);
  RunOutcome o = ex.run(cert.first, false);
  return o.reason == "stopped" && o.config == cert.last;
}

}  // namespace otmlab
