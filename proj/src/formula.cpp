#include "otmlab/formula.hpp"

#include <algorithm>
#include <set>

namespace otmlab {

FormulaPtr Formula::atom(Kind k, std::string l, std::string r) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}

FormulaPtr Formula::unary(FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = Kind::neg;
  f->a = std::move(a);
  return f;
}

FormulaPtr Formula::binary(Kind k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->a = std::move(a);
  f->b = std::move(b);
  return f;
}

FormulaPtr Formula::quantifier(Kind k, std::string var, std::string bound, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->var = std::move(var);
  f->bound = std::move(bound);
  f->a = std::move(body);
  return f;
}

bool same_formula(const Formula& x, const Formula& y) {
  if (x.kind != y.kind || x.left != y.left || x.right != y.right || x.var != y.var || x.bound != y.bound)
    return false;
  if (bool(x.a) != bool(y.a) || bool(x.b) != bool(y.b)) return false;
  if (x.a && !same_formula(*x.a, *y.a)) return false;
  if (x.b && !same_formula(*x.b, *y.b)) return false;
  return true;
}

std::size_t formula_size(const Formula& f) {
  std::size_t n = 1;
  if (f.a) n += formula_size(*f.a);
  if (f.b) n += formula_size(*f.b);
  return n;
}

namespace {

void collect(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  auto use = [&](const std::string& v) {
    if (!bound.count(v)) out.insert(v);
  };
  switch (f.kind) {
    case Formula::Kind::in:
    case Formula::Kind::eq:
      use(f.left);
      use(f.right);
      return;
    case Formula::Kind::all:
    case Formula::Kind::ex: {
      use(f.bound);
      const bool fresh = bound.insert(f.var).second;
      collect(*f.a, bound, out);
      if (fresh) bound.erase(f.var);
      return;
    }
    default:
      if (f.a) collect(*f.a, bound, out);
      if (f.b) collect(*f.b, bound, out);
  }
}

}  // namespace

std::vector<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  collect(f, bound, out);
  return {out.begin(), out.end()};
}

Delta0Formula make_delta0(FormulaPtr root) {
  Delta0Formula d;
  d.free_vars = free_variables(*root);
  d.root = std::move(root);
  return d;
}

}  // namespace otmlab
