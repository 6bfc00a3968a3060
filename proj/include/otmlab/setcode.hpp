#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otmlab/errors.hpp"
#include "otmlab/ordinal.hpp"
#include "otmlab/tape.hpp"

namespace otmlab {

/// Hereditarily finite set. Elements are kept sorted by Ackermann order,
/// so equal sets share one representation and compare in O(size).
class HfSet {
 public:
  HfSet();  // empty set
  static HfSet of(std::vector<HfSet> elements);

  const std::vector<HfSet>& elements() const { return node_->elements; }
  std::size_t size() const { return node_->elements.size(); }
  bool empty() const { return node_->elements.empty(); }
  bool contains(const HfSet& y) const;
  /// rank(0) = 0, rank(x) = max(rank(y)+1 : y in x).
  unsigned rank() const { return node_->rank; }
  std::size_t hash() const { return node_->hash; }

  /// Set literal: {} , {{},{{}}}
  std::string to_string() const;
  static HfSet parse(std::string_view text);

  friend bool operator==(const HfSet& a, const HfSet& b);
  /// Ackermann order: the order of ack_index, computable without overflow.
  friend std::strong_ordering operator<=>(const HfSet& a, const HfSet& b);

 private:
  struct Node {
    std::vector<HfSet> elements;
    unsigned rank = 0;
    std::size_t hash = 0;
  };
  explicit HfSet(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

HfSet singleton(const HfSet& a);
HfSet unordered_pair(const HfSet& a, const HfSet& b);
HfSet set_union(const HfSet& a, const HfSet& b);
HfSet set_intersection(const HfSet& a, const HfSet& b);
HfSet set_difference(const HfSet& a, const HfSet& b);
/// Union of the members of x.
HfSet big_union(const HfSet& x);
bool is_subset(const HfSet& a, const HfSet& b);
/// x together with {x}: the von Neumann successor.
HfSet set_successor(const HfSet& x);
/// The von Neumann natural n.
HfSet von_neumann(unsigned n);

/// Kuratowski pair (a,b) = {{a},{a,b}}.
HfSet kpair(const HfSet& a, const HfSet& b);
std::optional<std::pair<HfSet, HfSet>> kunpair(const HfSet& p);

HfSet tc(const HfSet& x);
bool is_transitive(const HfSet& x);

/// Rank cap for decodable sets; OTMLAB_RANK_CAP overrides the default 6.
unsigned rank_cap();

/// ack_index(x) = sum of 2^ack_index(y) over y in x. Throws
/// RepresentationOverflow when the index does not fit in 64 bits or the
/// rank exceeds rank_cap().
std::uint64_t ack_index(const HfSet& x);
HfSet ack_enumerate(std::uint64_t n);

/// All sets of rank < n (V_n), in Ackermann order. Defined for n <= 4.
std::vector<HfSet> rank_below(unsigned n);
/// All sets of rank <= n, in Ackermann order. Defined for n <= 3.
std::vector<HfSet> rank_at_most(unsigned n);
/// All subsets of s, in Ackermann order.
std::vector<HfSet> subsets(const HfSet& s, std::size_t max_size = SIZE_MAX);

/// A bounded set of ordinals coding a set via pairs p(i,j) for i in j.
struct SetCode {
  Ordinal bound;
  std::vector<Ordinal> pairs;  // sorted, duplicate-free
  friend bool operator==(const SetCode&, const SetCode&) = default;
};

enum class InvalidReason { not_extensional, ill_founded, pair_out_of_bound, no_unique_top, transfinite_bound };
std::string to_string(InvalidReason r);

class InvalidCode : public Error {
 public:
  InvalidCode(InvalidReason r, const std::string& detail)
      : Error("invalid code (" + to_string(r) + "): " + detail), reason_(r) {}
  InvalidReason reason() const { return reason_; }

 private:
  InvalidReason reason_;
};

struct CodeCheck {
  bool valid = false;
  std::optional<InvalidReason> reason;
  std::string detail;
  explicit operator bool() const { return valid; }
};

/// Domain {x} u tc(x) in Ackermann order; index i of this list is f(i).
std::vector<HfSet> code_domain(const HfSet& x);
SetCode encode(const HfSet& x);
/// Encodes with f(i) = code_domain(x)[order[i]]; order must be a permutation.
SetCode encode_with(const HfSet& x, std::span<const std::size_t> order);
HfSet decode(const SetCode& c);
CodeCheck is_valid(const SetCode& c);

/// 1 on cell c iff c is in the code.
Tape code_to_tape(const SetCode& c);
/// Reads a code back from its cells. The bound is the least one that fits
/// every pair, which is exact for valid codes. Nullopt if the tape holds
/// infinitely many 1s.
std::optional<SetCode> tape_to_code(const Tape& t);

}  // namespace otmlab

template <>
struct std::hash<otmlab::HfSet> {
  std::size_t operator()(const otmlab::HfSet& s) const noexcept { return s.hash(); }
};
