#include "otmlab/relations.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "otmlab/logic.hpp"

namespace otmlab {

WitnessSpace WitnessSpace::listed(std::vector<HfSet> ys) {
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  WitnessSpace w;
  w.count = static_cast<long double>(ys.size());
  w.all = std::move(ys);
  return w;
}

// ---------------------------------------------------------------------------
// encoded structures

HfSet field(const HfSet& pairs) {
  std::vector<HfSet> f;
  for (const auto& p : pairs.elements()) {
    if (auto ab = kunpair(p)) {
      f.push_back(ab->first);
      f.push_back(ab->second);
    }
  }
  return HfSet::of(std::move(f));
}

bool poset_leq(const HfSet& p, const HfSet& a, const HfSet& b) { return p.contains(kpair(a, b)); }

bool is_poset(const HfSet& p) {
  for (const auto& e : p.elements())
    if (!kunpair(e)) return false;
  const HfSet f = field(p);
  for (const auto& a : f.elements()) {
    if (!poset_leq(p, a, a)) return false;
    for (const auto& b : f.elements()) {
      if (a == b || !poset_leq(p, a, b)) continue;
      if (poset_leq(p, b, a)) return false;
      for (const auto& c : f.elements())
        if (poset_leq(p, b, c) && !poset_leq(p, a, c)) return false;
    }
  }
  return true;
}

HfSet maximal_elements(const HfSet& p) {
  const HfSet f = field(p);
  std::vector<HfSet> m;
  for (const auto& a : f.elements()) {
    bool top = true;
    for (const auto& b : f.elements())
      if (a != b && poset_leq(p, a, b)) top = false;
    if (top) m.push_back(a);
  }
  return HfSet::of(std::move(m));
}

bool is_chain(const HfSet& p, const HfSet& c) {
  if (!is_subset(c, field(p))) return false;
  for (const auto& a : c.elements())
    for (const auto& b : c.elements())
      if (!poset_leq(p, a, b) && !poset_leq(p, b, a)) return false;
  return true;
}

bool is_maximal_chain(const HfSet& p, const HfSet& c) {
  if (!is_chain(p, c)) return false;
  const HfSet f = field(p);
  for (const auto& a : f.elements()) {
    if (c.contains(a)) continue;
    bool comparable = true;
    for (const auto& b : c.elements())
      if (!poset_leq(p, a, b) && !poset_leq(p, b, a)) comparable = false;
    if (comparable) return false;
  }
  return true;
}

bool is_strict_order_on(const HfSet& y, const HfSet& x) {
  for (const auto& e : y.elements()) {
    auto ab = kunpair(e);
    if (!ab || ab->first == ab->second || !x.contains(ab->first) || !x.contains(ab->second)) return false;
  }
  const auto& xs = x.elements();
  for (const auto& a : xs) {
    for (const auto& b : xs) {
      if (a == b) continue;
      const bool ab = y.contains(kpair(a, b));
      if (ab == y.contains(kpair(b, a))) return false;
      if (!ab) continue;
      for (const auto& c : xs)
        if (y.contains(kpair(b, c)) && !y.contains(kpair(a, c))) return false;
    }
  }
  return true;
}

HfSet strict_order_from(const std::vector<HfSet>& order) {
  std::vector<HfSet> pairs;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) pairs.push_back(kpair(order[i], order[j]));
  return HfSet::of(std::move(pairs));
}

std::vector<HfSet> order_sequence(const HfSet& y, const HfSet& x) {
  std::vector<std::pair<std::size_t, HfSet>> ranked;
  for (const auto& a : x.elements()) {
    std::size_t below = 0;
    for (const auto& b : x.elements())
      if (y.contains(kpair(b, a))) ++below;
    ranked.emplace_back(below, a);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<HfSet> out;
  for (auto& [k, a] : ranked) out.push_back(std::move(a));
  return out;
}

bool is_nonempty_family(const HfSet& x) {
  return std::none_of(x.elements().begin(), x.elements().end(), [](const HfSet& a) { return a.empty(); });
}

bool is_disjoint_family(const HfSet& x) {
  if (!is_nonempty_family(x)) return false;
  const auto& e = x.elements();
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j)
      if (!set_intersection(e[i], e[j]).empty()) return false;
  return true;
}

bool is_choice_function(const HfSet& y, const HfSet& family) {
  std::vector<HfSet> covered;
  for (const auto& e : y.elements()) {
    auto ab = kunpair(e);
    if (!ab || !family.contains(ab->first) || !ab->first.contains(ab->second)) return false;
    covered.push_back(ab->first);
  }
  std::sort(covered.begin(), covered.end());
  if (std::adjacent_find(covered.begin(), covered.end()) != covered.end()) return false;
  return covered.size() == family.size();
}

// ---------------------------------------------------------------------------
// universes

std::vector<HfSet> plain_universe(unsigned n) {
  if (n > 4) throw RepresentationOverflow("plain universe above rank 4 is too large");
  std::vector<HfSet> out;
  const std::uint64_t count = n == 4 ? 65536 : rank_below(n + 1).size();
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(ack_enumerate(i));
  return out;
}

std::vector<HfSet> family_universe(unsigned n, bool disjoint, std::size_t max_members) {
  if (n > 3) throw RepresentationOverflow("family universe above rank 3 is too large");
  std::vector<HfSet> blocks;
  for (const auto& s : subsets(HfSet::of(rank_below(n))))
    if (!s.empty()) blocks.push_back(s);
  std::vector<HfSet> out;
  std::vector<HfSet> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    out.push_back(HfSet::of(cur));
    if (cur.size() == max_members) return;
    for (std::size_t i = from; i < blocks.size(); ++i) {
      if (disjoint && std::any_of(cur.begin(), cur.end(), [&](const HfSet& a) {
            return !set_intersection(a, blocks[i]).empty();
          }))
        continue;
      cur.push_back(blocks[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<HfSet> poset_universe(unsigned n) {
  if (n > 3) throw RepresentationOverflow("poset universe above rank 3 is too large");
  std::vector<HfSet> out;
  for (const auto& s : subsets(HfSet::of(rank_below(n)))) {
    const auto& e = s.elements();
    std::vector<std::pair<std::size_t, std::size_t>> off;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::size_t j = 0; j < e.size(); ++j)
        if (i != j) off.emplace_back(i, j);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << off.size()); ++mask) {
      std::vector<HfSet> pairs;
      for (const auto& a : e) pairs.push_back(kpair(a, a));
      for (std::size_t k = 0; k < off.size(); ++k)
        if (mask >> k & 1) pairs.push_back(kpair(e[off[k].first], e[off[k].second]));
      HfSet p = HfSet::of(std::move(pairs));
      if (is_poset(p)) out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// catalog

namespace {

long double factorial(std::size_t n) {
  long double f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= static_cast<long double>(k);
  return f;
}

WitnessSpace orders_of(const HfSet& x) {
  const std::vector<HfSet> elems(x.elements());
  const std::size_t n = elems.size();
  // Orders built from one table of pairs share their nodes.
  auto table = std::make_shared<std::vector<HfSet>>();
  for (const auto& a : elems)
    for (const auto& b : elems) table->push_back(kpair(a, b));
  auto order = [table, n](const std::vector<std::size_t>& perm) {
    std::vector<HfSet> pairs;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.push_back((*table)[perm[i] * n + perm[j]]);
    return HfSet::of(std::move(pairs));
  };
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (n <= 7) {
    std::vector<HfSet> ys;
    do {
      ys.push_back(order(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return WitnessSpace::listed(std::move(ys));
  }
  WitnessSpace w;
  w.complete = false;
  w.count = factorial(n);
  w.draw = [order, perm](std::mt19937_64& rng) mutable {
    std::shuffle(perm.begin(), perm.end(), rng);
    return order(perm);
  };
  std::vector<std::size_t> rev(perm.rbegin(), perm.rend());
  w.extremal = {order(perm), order(rev)};
  return w;
}

// Every way of picking one element from each member, as chosen tuples.
void choices(const HfSet& family, const std::function<void(const std::vector<HfSet>&)>& emit) {
  const auto& members = family.elements();
  std::vector<HfSet> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == members.size()) {
      emit(pick);
      return;
    }
    for (const auto& a : members[i].elements()) {
      pick.push_back(a);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
}

Relation make(std::string name, std::function<bool(const HfSet&)> dom,
              std::function<bool(const HfSet&, const HfSet&)> holds,
              std::function<WitnessSpace(const HfSet&)> wit, std::function<std::vector<HfSet>(unsigned)> inst) {
  Relation r;
  r.name = std::move(name);
  r.domain = std::move(dom);
  r.holds = std::move(holds);
  r.witnesses = std::move(wit);
  r.instances = std::move(inst);
  return r;
}

std::vector<Relation> build_catalog() {
  std::vector<Relation> c;
  auto any = [](const HfSet&) { return true; };
  auto nonempty = [](const HfSet& x) { return !x.empty(); };
  auto member = [](const HfSet& x, const HfSet& y) { return x.contains(y); };
  auto elements = [](const HfSet& x) { return WitnessSpace::listed(x.elements()); };
  auto plain = [](unsigned n) { return plain_universe(n); };
  auto disjoint_families = [](unsigned n) { return family_universe(n, true); };
  auto posets = [](unsigned n) { return poset_universe(n); };

  c.push_back(make(
      "ZERO", any, [](const HfSet&, const HfSet& y) { return y.empty(); },
      [](const HfSet&) { return WitnessSpace::listed({HfSet{}}); }, plain));
  c.push_back(make("PP", nonempty, member, elements, plain));
  c.push_back(make(
      "PP2", [](const HfSet& x) { return x.size() == 2; }, member, elements, plain));
  c.push_back(make("PP_fin", nonempty, member, elements, plain));
  c.push_back(make(
      "MPP", nonempty, [](const HfSet& x, const HfSet& y) { return !y.empty() && is_subset(y, x); },
      [](const HfSet& x) {
        std::vector<HfSet> ys;
        for (auto& s : subsets(x))
          if (!s.empty()) ys.push_back(std::move(s));
        return WitnessSpace::listed(std::move(ys));
      },
      plain));
  auto muc_holds = [](const HfSet& x, const HfSet& y) {
    return std::all_of(x.elements().begin(), x.elements().end(),
                       [&](const HfSet& a) { return !set_intersection(y, a).empty(); });
  };
  c.push_back(make(
      "MuC", is_disjoint_family, muc_holds,
      [muc_holds](const HfSet& x) {
        std::vector<HfSet> ys;
        for (auto& s : subsets(big_union(x)))
          if (muc_holds(x, s)) ys.push_back(std::move(s));
        return WitnessSpace::listed(std::move(ys));
      },
      disjoint_families));
  c.push_back(make(
      "AC", is_disjoint_family,
      [](const HfSet& x, const HfSet& y) {
        if (!is_subset(y, big_union(x))) return false;
        return std::all_of(x.elements().begin(), x.elements().end(),
                           [&](const HfSet& a) { return set_intersection(y, a).size() == 1; });
      },
      [](const HfSet& x) {
        std::vector<HfSet> ys;
        choices(x, [&](const std::vector<HfSet>& pick) { ys.push_back(HfSet::of(pick)); });
        return WitnessSpace::listed(std::move(ys));
      },
      disjoint_families));
  c.push_back(make(
      "AC_prime", is_nonempty_family, [](const HfSet& x, const HfSet& y) { return is_choice_function(y, x); },
      [](const HfSet& x) {
        std::vector<HfSet> ys;
        choices(x, [&](const std::vector<HfSet>& pick) {
          std::vector<HfSet> pairs;
          for (std::size_t i = 0; i < pick.size(); ++i) pairs.push_back(kpair(x.elements()[i], pick[i]));
          ys.push_back(HfSet::of(std::move(pairs)));
        });
        return WitnessSpace::listed(std::move(ys));
      },
      [](unsigned n) { return family_universe(n, false); }));
  c.push_back(make("WO", any, [](const HfSet& x, const HfSet& y) { return is_strict_order_on(y, x); }, orders_of,
                   plain));
  c.push_back(make(
      "ZL", [](const HfSet& p) { return !p.empty() && is_poset(p); },
      [](const HfSet& p, const HfSet& y) { return maximal_elements(p).contains(y); },
      [](const HfSet& p) { return WitnessSpace::listed(maximal_elements(p).elements()); }, posets));
  c.push_back(make(
      "HMP", is_poset, [](const HfSet& p, const HfSet& y) { return is_maximal_chain(p, y); },
      [](const HfSet& p) {
        std::vector<HfSet> ys;
        for (auto& s : subsets(field(p)))
          if (is_maximal_chain(p, s)) ys.push_back(std::move(s));
        return WitnessSpace::listed(std::move(ys));
      },
      posets));
  return c;
}

const std::vector<Relation>& catalog() {
  static const std::vector<Relation> c = build_catalog();
  return c;
}

}  // namespace

const std::vector<std::string>& relation_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& r : catalog()) v.push_back(r.name);
    return v;
  }();
  return names;
}

const Relation& relation(std::string_view name) {
  if (name == "AC'") name = "AC_prime";
  for (const auto& r : catalog())
    if (r.name == name) return r;
  throw std::invalid_argument("unknown relation '" + std::string(name) + "'");
}

Relation relation_from_statement(const PrenexStatement& s, std::string name) {
  if (s.blocks.size() != 1) throw std::invalid_argument("relation needs a statement ALL x EX y (matrix)");
  Relation r;
  r.name = std::move(name);
  r.matrix = s.matrix;
  r.x_var = s.blocks[0].first;
  r.y_var = s.blocks[0].second;
  r.domain = [](const HfSet&) { return true; };
  r.holds = [m = s.matrix, xv = r.x_var, yv = r.y_var](const HfSet& x, const HfSet& y) {
    return eval_delta0(m, Env{{xv, x}, {yv, y}});
  };
  r.instances = [](unsigned n) { return plain_universe(n); };
  return r;
}

}  // namespace otmlab
