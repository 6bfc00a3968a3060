#include "otmlab/setcode.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace otmlab {

HfSet::HfSet() {
  static const auto empty = std::make_shared<const Node>();
  node_ = empty;
}

HfSet HfSet::of(std::vector<HfSet> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (elements.empty()) return HfSet();
  auto n = std::make_shared<Node>();
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (const auto& y : elements) {
    n->rank = std::max(n->rank, y.rank() + 1);
    h = (h ^ y.hash()) * 1099511628211ull + 17;
  }
  n->hash = h;
  n->elements = std::move(elements);
  return HfSet(std::move(n));
}

bool HfSet::contains(const HfSet& y) const { return std::binary_search(elements().begin(), elements().end(), y); }

bool operator==(const HfSet& a, const HfSet& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return a.elements() == b.elements();
}

std::strong_ordering operator<=>(const HfSet& a, const HfSet& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& x = a.elements();
  const auto& y = b.elements();
  auto i = x.rbegin();
  auto j = y.rbegin();
  for (; i != x.rend() && j != y.rend(); ++i, ++j) {
    auto c = *i <=> *j;
    if (c != 0) return c;
  }
  if (i != x.rend()) return std::strong_ordering::greater;
  if (j != y.rend()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

std::string HfSet::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) s += ",";
    s += elements()[i].to_string();
  }
  return s + "}";
}

namespace {

struct LiteralParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("set literal: " + what + " at offset " + std::to_string(pos));
  }
  HfSet set() {
    skip();
    if (pos >= text.size() || text[pos] != '{') fail("expected '{'");
    ++pos;
    std::vector<HfSet> elems;
    skip();
    if (pos < text.size() && text[pos] == '}') {
      ++pos;
      return HfSet{};
    }
    while (true) {
      elems.push_back(set());
      skip();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == '}') {
        ++pos;
        return HfSet::of(std::move(elems));
      }
      fail("expected ',' or '}'");
    }
  }
};

}  // namespace

HfSet HfSet::parse(std::string_view text) {
  LiteralParser p{text};
  HfSet s = p.set();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return s;
}

HfSet singleton(const HfSet& a) { return HfSet::of({a}); }

HfSet unordered_pair(const HfSet& a, const HfSet& b) { return HfSet::of({a, b}); }

HfSet set_union(const HfSet& a, const HfSet& b) {
  std::vector<HfSet> v(a.elements());
  v.insert(v.end(), b.elements().begin(), b.elements().end());
  return HfSet::of(std::move(v));
}

HfSet set_intersection(const HfSet& a, const HfSet& b) {
  std::vector<HfSet> v;
  std::set_intersection(a.elements().begin(), a.elements().end(), b.elements().begin(), b.elements().end(),
                        std::back_inserter(v));
  return HfSet::of(std::move(v));
}

HfSet set_difference(const HfSet& a, const HfSet& b) {
  std::vector<HfSet> v;
  std::set_difference(a.elements().begin(), a.elements().end(), b.elements().begin(), b.elements().end(),
                      std::back_inserter(v));
  return HfSet::of(std::move(v));
}

HfSet big_union(const HfSet& x) {
  std::vector<HfSet> v;
  for (const auto& y : x.elements()) v.insert(v.end(), y.elements().begin(), y.elements().end());
  return HfSet::of(std::move(v));
}

bool is_subset(const HfSet& a, const HfSet& b) {
  return std::includes(b.elements().begin(), b.elements().end(), a.elements().begin(), a.elements().end());
}

HfSet set_successor(const HfSet& x) { return set_union(x, singleton(x)); }

HfSet von_neumann(unsigned n) {
  HfSet s;
  for (unsigned i = 0; i < n; ++i) s = set_successor(s);
  return s;
}

HfSet kpair(const HfSet& a, const HfSet& b) { return unordered_pair(singleton(a), unordered_pair(a, b)); }

std::optional<std::pair<HfSet, HfSet>> kunpair(const HfSet& p) {
  if (p.size() == 1) {
    const HfSet& s = p.elements()[0];
    if (s.size() != 1) return std::nullopt;
    return std::pair{s.elements()[0], s.elements()[0]};
  }
  if (p.size() != 2) return std::nullopt;
  const HfSet* one = nullptr;
  const HfSet* two = nullptr;
  for (const auto& e : p.elements()) {
    if (e.size() == 1)
      one = &e;
    else if (e.size() == 2)
      two = &e;
  }
  if (!one || !two) return std::nullopt;
  const HfSet& a = one->elements()[0];
  if (!two->contains(a)) return std::nullopt;
  const HfSet& b = two->elements()[0] == a ? two->elements()[1] : two->elements()[0];
  return std::pair{a, b};
}

HfSet tc(const HfSet& x) {
  std::vector<HfSet> out;
  std::vector<HfSet> todo(x.elements());
  while (!todo.empty()) {
    HfSet y = todo.back();
    todo.pop_back();
    out.push_back(y);
    for (const auto& z : y.elements()) todo.push_back(z);
  }
  return HfSet::of(std::move(out));
}

bool is_transitive(const HfSet& x) {
  for (const auto& y : x.elements())
    if (!is_subset(y, x)) return false;
  return true;
}

unsigned rank_cap() {
  if (const char* env = std::getenv("OTMLAB_RANK_CAP")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0 && v <= 64) return static_cast<unsigned>(v);
  }
  return 6;
}

std::uint64_t ack_index(const HfSet& x) {
  if (x.rank() > rank_cap())
    throw RepresentationOverflow("rank " + std::to_string(x.rank()) + " exceeds the rank cap");
  std::uint64_t n = 0;
  for (const auto& y : x.elements()) {
    std::uint64_t i = ack_index(y);
    if (i >= 64) throw RepresentationOverflow("Ackermann index of " + x.to_string() + " exceeds 64 bits");
    n |= std::uint64_t{1} << i;
  }
  return n;
}

namespace {

HfSet build_ack(std::uint64_t n, const std::vector<HfSet>& small) {
  std::vector<HfSet> elems;
  for (unsigned i = 0; i < 64; ++i)
    if (n >> i & 1) elems.push_back(i < small.size() ? small[i] : build_ack(i, small));
  return HfSet::of(std::move(elems));
}

// V_4 with shared nodes, so that enumerated sets compare by pointer.
const std::vector<HfSet>& small_sets() {
  static const std::vector<HfSet> v = [] {
    std::vector<HfSet> t;
    for (std::uint64_t i = 0; i < 16; ++i) t.push_back(build_ack(i, t));
    return t;
  }();
  return v;
}

}  // namespace

HfSet ack_enumerate(std::uint64_t n) {
  const auto& small = small_sets();
  return n < small.size() ? small[n] : build_ack(n, small);
}

std::vector<HfSet> rank_below(unsigned n) {
  if (n > 4) throw RepresentationOverflow("V_" + std::to_string(n) + " is too large to list");
  std::vector<HfSet> v;
  if (n == 0) return v;
  const std::uint64_t count = n == 1 ? 1 : n == 2 ? 2 : n == 3 ? 4 : 16;
  for (std::uint64_t i = 0; i < count; ++i) v.push_back(ack_enumerate(i));
  return v;
}

std::vector<HfSet> rank_at_most(unsigned n) {
  if (n > 3) throw RepresentationOverflow("rank <= " + std::to_string(n) + " is too large to list");
  return rank_below(n + 1);
}

std::vector<HfSet> subsets(const HfSet& s, std::size_t max_size) {
  if (s.size() >= 24) throw RepresentationOverflow("too many subsets");
  std::vector<HfSet> out;
  const auto& e = s.elements();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << e.size()); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) > max_size) continue;
    std::vector<HfSet> v;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (mask >> i & 1) v.push_back(e[i]);
    out.push_back(HfSet::of(std::move(v)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(InvalidReason r) {
  switch (r) {
    case InvalidReason::not_extensional: return "not-extensional";
    case InvalidReason::ill_founded: return "ill-founded";
    case InvalidReason::pair_out_of_bound: return "pair-out-of-bound";
    case InvalidReason::no_unique_top: return "no-unique-top";
    case InvalidReason::transfinite_bound: return "transfinite-bound";
  }
  return "?";
}

std::vector<HfSet> code_domain(const HfSet& x) {
  std::vector<HfSet> d(tc(x).elements());
  d.push_back(x);
  std::sort(d.begin(), d.end());
  return d;
}

SetCode encode_with(const HfSet& x, std::span<const std::size_t> order) {
  const auto dom = code_domain(x);
  std::vector<HfSet> f(dom.size());
  if (order.empty()) {
    f = dom;
  } else {
    if (order.size() != dom.size()) throw std::invalid_argument("encode_with: order has the wrong length");
    std::vector<bool> seen(dom.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (order[i] >= dom.size() || seen[order[i]]) throw std::invalid_argument("encode_with: order is not a permutation");
      seen[order[i]] = true;
      f[i] = dom[order[i]];
    }
  }
  SetCode c;
  c.bound = Ordinal{f.size()};
  for (std::size_t z = 0; z < f.size(); ++z)
    for (std::size_t i = 0; i < f.size(); ++i)
      if (f[z].contains(f[i])) c.pairs.push_back(godel_pair(Ordinal{i}, Ordinal{z}));
  std::sort(c.pairs.begin(), c.pairs.end());
  return c;
}

SetCode encode(const HfSet& x) { return encode_with(x, {}); }

namespace {

struct Collapse {
  std::optional<HfSet> top;
  CodeCheck check;
};

Collapse collapse(const SetCode& c) {
  Collapse out;
  auto fail = [&](InvalidReason r, std::string detail) {
    out.check = CodeCheck{false, r, std::move(detail)};
    return out;
  };
  auto n_opt = c.bound.to_natural();
  if (!n_opt) return fail(InvalidReason::transfinite_bound, "bound " + c.bound.to_string() + " is not finite");
  const std::size_t n = *n_opt;
  if (n > (std::size_t{1} << 20)) return fail(InvalidReason::transfinite_bound, "bound too large");
  std::vector<std::vector<std::size_t>> members(n);
  std::vector<bool> is_member(n);
  for (const auto& p : c.pairs) {
    auto [i, z] = godel_unpair(p);
    auto in = i.to_natural();
    auto zn = z.to_natural();
    if (!in || !zn || *in >= n || *zn >= n)
      return fail(InvalidReason::pair_out_of_bound,
                  "pair " + p.to_string() + " = p(" + i.to_string() + "," + z.to_string() + ") exceeds the bound");
    members[*zn].push_back(*in);
    is_member[*in] = true;
  }
  // Kahn-style collapse: a node gets its value once all members have one.
  std::vector<std::optional<HfSet>> value(n);
  std::vector<std::size_t> pending(n);
  std::vector<std::vector<std::size_t>> parents(n);
  std::vector<std::size_t> ready;
  for (std::size_t z = 0; z < n; ++z) {
    std::sort(members[z].begin(), members[z].end());
    members[z].erase(std::unique(members[z].begin(), members[z].end()), members[z].end());
    pending[z] = members[z].size();
    for (std::size_t i : members[z]) parents[i].push_back(z);
    if (pending[z] == 0) ready.push_back(z);
  }
  std::size_t done = 0;
  while (!ready.empty()) {
    std::size_t z = ready.back();
    ready.pop_back();
    std::vector<HfSet> elems;
    for (std::size_t i : members[z]) elems.push_back(*value[i]);
    value[z] = HfSet::of(std::move(elems));
    ++done;
    for (std::size_t parent : parents[z])
      if (--pending[parent] == 0) ready.push_back(parent);
  }
  if (done != n) return fail(InvalidReason::ill_founded, "membership graph has a cycle");
  std::map<HfSet, std::size_t> seen;
  for (std::size_t z = 0; z < n; ++z) {
    auto [it, fresh] = seen.emplace(*value[z], z);
    if (!fresh)
      return fail(InvalidReason::not_extensional,
                  "nodes " + std::to_string(it->second) + " and " + std::to_string(z) + " have the same members");
  }
  std::optional<std::size_t> top;
  for (std::size_t z = 0; z < n; ++z) {
    if (is_member[z]) continue;
    if (top) return fail(InvalidReason::no_unique_top, "several nodes are members of no node");
    top = z;
  }
  if (!top) return fail(InvalidReason::no_unique_top, "no node outside every other node");
  out.top = value[*top];
  out.check = CodeCheck{true, std::nullopt, ""};
  return out;
}

}  // namespace

HfSet decode(const SetCode& c) {
  Collapse r = collapse(c);
  if (!r.check.valid) throw InvalidCode(*r.check.reason, r.check.detail);
  if (r.top->rank() > rank_cap())
    throw RepresentationOverflow("decoded set has rank " + std::to_string(r.top->rank()) + " above the rank cap");
  return *r.top;
}

CodeCheck is_valid(const SetCode& c) { return collapse(c).check; }

Tape code_to_tape(const SetCode& c) { return Tape::from_cells(c.pairs); }

std::optional<SetCode> tape_to_code(const Tape& t) {
  auto cells = t.finite_cells();
  if (!cells) return std::nullopt;
  SetCode c;
  c.bound = Ordinal{1};
  for (const auto& cell : *cells) {
    auto [i, z] = godel_unpair(cell);
    Ordinal m = std::max(i, z).successor();
    if (c.bound < m) c.bound = m;
  }
  c.pairs = std::move(*cells);
  return c;
}

}  // namespace otmlab
