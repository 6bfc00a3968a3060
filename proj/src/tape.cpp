#include "otmlab/tape.hpp"

#include <algorithm>
#include <stdexcept>

namespace otmlab {

std::string Interval::to_string() const { return "[" + lo.to_string() + "," + hi.to_string() + ")"; }

Interval Interval::parse(std::string_view text) {
  auto bad = [&] { return std::invalid_argument("bad interval '" + std::string(text) + "'"); };
  auto open = text.find('[');
  auto comma = text.find(',');
  auto close = text.rfind(')');
  if (open == std::string_view::npos || comma == std::string_view::npos || close == std::string_view::npos ||
      !(open < comma && comma < close))
    throw bad();
  return Interval{Ordinal::parse(text.substr(open + 1, comma - open - 1)),
                  Ordinal::parse(text.substr(comma + 1, close - comma - 1))};
}

Tape Tape::from_intervals(std::vector<Interval> runs) {
  std::erase_if(runs, [](const Interval& r) { return !(r.lo < r.hi); });
  std::sort(runs.begin(), runs.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  Tape t;
  for (auto& r : runs) {
    if (!t.ones_.empty() && r.lo <= t.ones_.back().hi) {
      if (t.ones_.back().hi < r.hi) t.ones_.back().hi = r.hi;
    } else {
      t.ones_.push_back(std::move(r));
    }
  }
  return t;
}

Tape Tape::from_cells(std::span<const Ordinal> cells) {
  std::vector<Interval> runs;
  runs.reserve(cells.size());
  for (const auto& c : cells) runs.push_back({c, c.successor()});
  return from_intervals(std::move(runs));
}

bool Tape::read(const Ordinal& cell) const {
  // first interval with hi > cell
  auto it = std::upper_bound(ones_.begin(), ones_.end(), cell,
                             [](const Ordinal& c, const Interval& r) { return c < r.hi; });
  return it != ones_.end() && it->lo <= cell;
}

Tape Tape::write(const Ordinal& cell, bool bit) const {
  if (read(cell) == bit) return *this;
  Ordinal next = cell.successor();
  if (bit) {
    std::vector<Interval> runs = ones_;
    runs.push_back({cell, next});
    return from_intervals(std::move(runs));
  }
  Tape t;
  for (const auto& r : ones_) {
    if (r.lo <= cell && cell < r.hi) {
      if (r.lo < cell) t.ones_.push_back({r.lo, cell});
      if (next < r.hi) t.ones_.push_back({next, r.hi});
    } else {
      t.ones_.push_back(r);
    }
  }
  return t;
}

bool Tape::zero_on(const Ordinal& lo, const Ordinal& hi) const {
  for (const auto& r : ones_)
    if (r.lo < hi && lo < r.hi) return false;
  return true;
}

std::optional<std::vector<Ordinal>> Tape::finite_cells() const {
  std::vector<Ordinal> out;
  for (const auto& r : ones_) {
    Ordinal len_check = r.lo;
    // [lo, hi) is finite iff hi - lo is a natural number.
    Ordinal width = subtract(r.hi, r.lo);
    auto n = width.to_natural();
    if (!n) return std::nullopt;
    for (std::uint64_t i = 0; i < *n; ++i) {
      out.push_back(len_check);
      len_check = len_check.successor();
    }
  }
  return out;
}

Tape Tape::fill(const Ordinal& lo, const Ordinal& hi, bool bit) const {
  if (!(lo < hi)) return *this;
  std::vector<Interval> runs;
  for (const auto& r : ones_) {
    if (r.hi <= lo || hi <= r.lo) {
      runs.push_back(r);
      continue;
    }
    if (r.lo < lo) runs.push_back({r.lo, lo});
    if (hi < r.hi) runs.push_back({hi, r.hi});
  }
  if (bit) runs.push_back({lo, hi});
  return from_intervals(std::move(runs));
}

Tape intersect(const Tape& a, const Tape& b) {
  Tape t;
  std::size_t i = 0, j = 0;
  while (i < a.ones_.size() && j < b.ones_.size()) {
    const auto& x = a.ones_[i];
    const auto& y = b.ones_[j];
    const Ordinal& lo = std::max(x.lo, y.lo);
    const Ordinal& hi = std::min(x.hi, y.hi);
    if (lo < hi) t.ones_.push_back({lo, hi});
    if (x.hi < y.hi)
      ++i;
    else
      ++j;
  }
  return t;
}

std::string Tape::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < ones_.size(); ++i) {
    if (i) s += ",";
    s += ones_[i].to_string();
  }
  return s + "}";
}

std::size_t Tape::hash() const {
  std::size_t h = ones_.size();
  for (const auto& r : ones_) {
    h = h * 1000003u ^ r.lo.hash();
    h = h * 1000003u ^ r.hi.hash();
  }
  return h;
}

Tape liminf_tapes(std::span<const Tape> cycle, const std::optional<SweepFill>& sweep) {
  if (cycle.empty()) throw std::invalid_argument("liminf_tapes needs a nonempty cycle");
  Tape t = cycle.front();
  for (std::size_t i = 1; i < cycle.size(); ++i) t = intersect(t, cycle[i]);
  if (sweep) {
    if (sweep->pattern.empty()) throw std::invalid_argument("sweep pattern is empty");
    const bool bit = sweep->pattern.front();
    if (std::any_of(sweep->pattern.begin(), sweep->pattern.end(), [&](bool b) { return b != bit; }))
      throw std::domain_error("non-constant sweep pattern has no finite interval representation");
    t = t.fill(sweep->base, sweep->limit, bit);
  }
  return t;
}

}  // namespace otmlab
