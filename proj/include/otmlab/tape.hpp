#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otmlab/ordinal.hpp"

namespace otmlab {

/// Half-open run of cells [lo, hi) holding 1.
struct Interval {
  Ordinal lo;
  Ordinal hi;
  friend bool operator==(const Interval&, const Interval&) = default;
  std::string to_string() const;  // "[lo,hi)"
  static Interval parse(std::string_view text);
};

/// Binary tape over ordinal-indexed cells. Stores the cells holding 1 as a
/// sorted list of disjoint, non-empty, non-adjacent intervals.
class Tape {
 public:
  Tape() = default;
  /// Accepts any interval list (overlapping, unsorted, empty runs) and normalizes it.
  static Tape from_intervals(std::vector<Interval> runs);
  /// Cells of a finite set of ordinals set to 1.
  static Tape from_cells(std::span<const Ordinal> cells);

  const std::vector<Interval>& intervals() const { return ones_; }
  bool empty() const { return ones_.empty(); }

  bool read(const Ordinal& cell) const;
  Tape write(const Ordinal& cell, bool bit) const;

  /// True iff every cell in [lo, hi) holds 0.
  bool zero_on(const Ordinal& lo, const Ordinal& hi) const;
  /// The cells holding 1 when there are finitely many; nullopt otherwise.
  std::optional<std::vector<Ordinal>> finite_cells() const;

  /// Overwrites [lo, hi) with a constant bit.
  Tape fill(const Ordinal& lo, const Ordinal& hi, bool bit) const;

  friend Tape intersect(const Tape& a, const Tape& b);
  friend bool operator==(const Tape&, const Tape&) = default;

  std::string to_string() const;  // "{[0,w),[w+1,w+2)}"
  std::size_t hash() const;

 private:
  std::vector<Interval> ones_;
};

Tape intersect(const Tape& a, const Tape& b);

/// Describes a monotone rightward fill: from `base` up to `limit`, the cells
/// take the bits of `pattern` repeated with period pattern.size().
struct SweepFill {
  Ordinal base;
  std::vector<bool> pattern;
  Ordinal limit;
};

/// Cell-wise liminf of a history. The cycle tapes recur forever, so each
/// cell takes the minimum over the cycle; a sweep fill then overwrites
/// [base, limit) with its stabilized pattern. A pattern that is not
/// constant has no finite interval representation and is rejected with
/// std::domain_error.
Tape liminf_tapes(std::span<const Tape> cycle, const std::optional<SweepFill>& sweep = std::nullopt);

}  // namespace otmlab
