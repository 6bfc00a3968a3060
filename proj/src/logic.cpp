#include "otmlab/logic.hpp"

#include <algorithm>
#include <stdexcept>

namespace otmlab {

namespace {

using Scope = std::vector<std::pair<const std::string*, HfSet>>;

const HfSet& lookup(const Scope& s, const std::string& name) {
  for (auto it = s.rbegin(); it != s.rend(); ++it)
    if (*it->first == name) return it->second;
  throw UnboundVariable(name);
}

bool eval(const Formula& f, Scope& s) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::in: return lookup(s, f.right).contains(lookup(s, f.left));
    case K::eq: return lookup(s, f.left) == lookup(s, f.right);
    case K::neg: return !eval(*f.a, s);
    case K::conj: return eval(*f.a, s) && eval(*f.b, s);
    case K::disj: return eval(*f.a, s) || eval(*f.b, s);
    case K::implies: return !eval(*f.a, s) || eval(*f.b, s);
    case K::all:
    case K::ex: {
      const HfSet range = lookup(s, f.bound);
      const bool want = f.kind == K::ex;
      for (const auto& y : range.elements()) {
        s.emplace_back(&f.var, y);
        const bool v = eval(*f.a, s);
        s.pop_back();
        if (v == want) return want;
      }
      return !want;
    }
  }
  return false;
}

Scope scope_of(const Env& env) {
  Scope s;
  for (const auto& [k, v] : env) s.emplace_back(&k, v);
  return s;
}

}  // namespace

bool eval_formula(const Formula& f, const Env& env) {
  Scope s = scope_of(env);
  return eval(f, s);
}

bool eval_delta0(const Delta0Formula& f, const Env& env) {
  for (const auto& v : f.free_vars)
    if (!env.count(v)) throw UnboundVariable(v);
  return eval_formula(*f.root, env);
}

HfSet search_witness(const Delta0Formula& psi, const HfSet& a, std::uint64_t budget, const std::string& a_var,
                     const std::string& b_var) {
  Scope s{{&a_var, a}, {&b_var, HfSet{}}};
  for (std::uint64_t n = 0; n < budget; ++n) {
    s[1].second = ack_enumerate(n);
    if (eval(*psi.root, s)) return s[1].second;
  }
  throw Exhausted(budget);
}

HfSet search_witness_set(const Delta0Formula& psi, const HfSet& a, std::uint64_t budget, const std::string& a_var,
                         const std::string& b_var) {
  const HfSet first = search_witness(psi, a, budget, a_var, b_var);
  // Sets of rank <= r are exactly the indices below |V_(r+1)|.
  std::uint64_t end = 1;
  for (unsigned k = 0; k < first.rank(); ++k) {
    if (end >= 64) throw Exhausted(budget);
    end = std::uint64_t{1} << end;
  }
  if (end > budget) throw Exhausted(budget);
  std::vector<HfSet> ys;
  Scope s{{&a_var, a}, {&b_var, HfSet{}}};
  for (std::uint64_t n = ack_index(first); n < end; ++n) {
    s[1].second = ack_enumerate(n);
    if (s[1].second.rank() == first.rank() && eval(*psi.root, s)) ys.push_back(s[1].second);
  }
  return HfSet::of(std::move(ys));
}

RangeEscape::RangeEscape(std::vector<HfSet> args)
    : Error([&] {
        std::string s = "function value outside the carrier at (";
        for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + args[i].to_string();
        return s + ")";
      }()),
      args_(std::move(args)) {}

namespace {

struct Prenex {
  const PrenexStatement& st;
  const Carrier& u;
  Scope scope;

  // Truth of ALL x_i EX y_i ... (matrix) with earlier variables bound.
  // On failure, `fail` receives the universal value that refutes it.
  bool holds_from(std::size_t i, HfSet* fail = nullptr) {
    if (i == st.blocks.size()) return eval(*st.matrix.root, scope);
    for (const auto& x : u) {
      scope.emplace_back(&st.blocks[i].first, x);
      bool found = false;
      for (const auto& y : u) {
        scope.emplace_back(&st.blocks[i].second, y);
        found = holds_from(i + 1);
        scope.pop_back();
        if (found) break;
      }
      scope.pop_back();
      if (!found) {
        if (fail) *fail = x;
        return false;
      }
    }
    return true;
  }
};

bool in_carrier(const Carrier& u, const HfSet& y) { return std::find(u.begin(), u.end(), y) != u.end(); }

}  // namespace

bool eval_prenex(const PrenexStatement& s, const Carrier& u) {
  Prenex p{s, u, {}};
  return p.holds_from(0);
}

CheckResult check_s_canonification(const PrenexStatement& s, const UnaryFn& f, const Carrier& u) {
  if (u.empty()) throw std::invalid_argument("carrier must be nonempty");
  if (s.blocks.empty()) return {eval_delta0(s.matrix, {}), {}};
  Prenex p{s, u, {}};
  for (const auto& a : u) {
    HfSet y = f(a);
    if (!in_carrier(u, y)) throw RangeEscape({a});
    p.scope = {{&s.blocks[0].first, a}, {&s.blocks[0].second, y}};
    if (!p.holds_from(1)) return {false, {a}};
  }
  return {};
}

CheckResult check_t_canonification(const PrenexStatement& s, std::span<const TupleFn> fs, const Carrier& u) {
  const std::size_t n = s.blocks.size();
  if (u.empty()) throw std::invalid_argument("carrier must be nonempty");
  if (fs.size() != n) throw std::invalid_argument("t-canonification needs one function per quantifier block");
  Prenex p{s, u, {}};
  // Levels 2..n+1 constrain the functions; level 1 is the statement itself.
  for (std::size_t i = 2; i <= n + 1; ++i) {
    std::vector<std::size_t> idx(i - 1, 0);
    while (true) {
      std::vector<HfSet> as;
      for (auto k : idx) as.push_back(u[k]);
      p.scope.clear();
      for (std::size_t j = 0; j + 1 < i; ++j) {
        HfSet y = fs[j](std::span<const HfSet>(as.data(), j + 1));
        if (!in_carrier(u, y)) throw RangeEscape(std::vector<HfSet>(as.begin(), as.begin() + static_cast<long>(j + 1)));
        p.scope.emplace_back(&s.blocks[j].first, as[j]);
        p.scope.emplace_back(&s.blocks[j].second, std::move(y));
      }
      HfSet x;
      if (!p.holds_from(i - 1, &x)) {
        if (i <= n) as.push_back(x);
        return {false, as};
      }
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == u.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  p.scope.clear();
  HfSet x;
  if (!p.holds_from(0, &x)) return {false, {x}};
  return {};
}

}  // namespace otmlab
