#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "otmlab/formula.hpp"
#include "otmlab/setcode.hpp"

namespace otmlab {

/// The witnesses y of one instance x. Small spaces are listed in full;
/// large ones are sampled and report two extremal members.
struct WitnessSpace {
  std::vector<HfSet> all;  // Ackermann order, when complete
  bool complete = true;
  long double count = 0;
  std::function<HfSet(std::mt19937_64&)> draw;  // incomplete spaces only
  std::vector<HfSet> extremal;                  // incomplete spaces only

  static WitnessSpace listed(std::vector<HfSet> ys);
};

/// A binary relation in implication form: inputs outside `domain` accept
/// every y.
struct Relation {
  std::string name;
  std::function<bool(const HfSet&)> domain;
  std::function<bool(const HfSet&, const HfSet&)> holds;
  /// Set when the relation is {(x,y) : matrix(x,y)}.
  std::optional<Delta0Formula> matrix;
  std::string x_var = "x", y_var = "y";
  /// All y with holds(x, y), for x in the domain. MuC lists the
  /// witnesses that are subsets of the union of x.
  std::function<WitnessSpace(const HfSet&)> witnesses;
  /// Test instances built over the sets of rank below n.
  std::function<std::vector<HfSet>(unsigned n)> instances;

  bool accepts(const HfSet& x, const HfSet& y) const { return !domain(x) || holds(x, y); }
};

/// ZERO, PP, PP2, PP_fin, MPP, MuC, AC, AC_prime, WO, ZL, HMP.
const std::vector<std::string>& relation_names();
/// Throws std::invalid_argument for unknown names. Accepts AC' for AC_prime.
const Relation& relation(std::string_view name);
/// The relation {(x,y) : matrix} of a statement ALL x EX y (matrix).
Relation relation_from_statement(const PrenexStatement& s, std::string name);

// Instance universes. `n` bounds the rank of the building blocks.
std::vector<HfSet> plain_universe(unsigned n);
/// Families of nonempty subsets of V_n with at most `max_members` members.
std::vector<HfSet> family_universe(unsigned n, bool disjoint, std::size_t max_members = 3);
/// Partial orders (reflexive, as Kuratowski pair sets) on subsets of V_n.
std::vector<HfSet> poset_universe(unsigned n);

// Encoded structures.
HfSet field(const HfSet& pairs);
bool is_poset(const HfSet& p);
bool poset_leq(const HfSet& p, const HfSet& a, const HfSet& b);
HfSet maximal_elements(const HfSet& p);
bool is_chain(const HfSet& p, const HfSet& c);
bool is_maximal_chain(const HfSet& p, const HfSet& c);
/// Strict total (hence well-) order on x, as Kuratowski pairs a < b.
bool is_strict_order_on(const HfSet& y, const HfSet& x);
/// The strict order listing `order` from least to greatest.
HfSet strict_order_from(const std::vector<HfSet>& order);
/// Elements of x listed by a strict total order y on x, least first.
std::vector<HfSet> order_sequence(const HfSet& y, const HfSet& x);
bool is_disjoint_family(const HfSet& x);
bool is_nonempty_family(const HfSet& x);
bool is_choice_function(const HfSet& y, const HfSet& family);

}  // namespace otmlab
