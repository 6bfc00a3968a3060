#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace otmlab {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Syntax tree node. Atoms use `left`/`right`; quantifiers bind `var`
/// ranging over the members of `bound`; connectives use `a` and `b`.
struct Formula {
  enum class Kind { in, eq, neg, conj, disj, implies, all, ex };
  Kind kind = Kind::eq;
  std::string left, right;
  std::string var, bound;
  FormulaPtr a, b;

  static FormulaPtr atom(Kind k, std::string l, std::string r);
  static FormulaPtr unary(FormulaPtr f);
  static FormulaPtr binary(Kind k, FormulaPtr a, FormulaPtr b);
  static FormulaPtr quantifier(Kind k, std::string var, std::string bound, FormulaPtr body);
};

bool same_formula(const Formula& x, const Formula& y);
/// Number of atoms, connectives and quantifiers.
std::size_t formula_size(const Formula& f);

/// Formula whose quantifiers are all bounded.
struct Delta0Formula {
  FormulaPtr root;
  std::vector<std::string> free_vars;  // sorted
  friend bool operator==(const Delta0Formula& x, const Delta0Formula& y) {
    return x.free_vars == y.free_vars && same_formula(*x.root, *y.root);
  }
};

/// ALL x1 EX y1 ... ALL xn EX yn (matrix)
struct PrenexStatement {
  std::vector<std::pair<std::string, std::string>> blocks;
  Delta0Formula matrix;
  std::size_t n() const { return blocks.size(); }
  friend bool operator==(const PrenexStatement&, const PrenexStatement&) = default;
};

std::vector<std::string> free_variables(const Formula& f);
/// Builds a Delta0Formula, computing its free variables.
Delta0Formula make_delta0(FormulaPtr root);

}  // namespace otmlab
