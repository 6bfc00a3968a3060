#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "otmlab/asmparse.hpp"
#include "otmlab/logic.hpp"
#include "otmlab/reducibility.hpp"

namespace otmlab {

namespace {

using Native = Procedure::Native;

HfSet discrete_poset(const HfSet& x) {
  std::vector<HfSet> pairs;
  for (const auto& a : x.elements()) pairs.push_back(kpair(a, a));
  return HfSet::of(std::move(pairs));
}

HfSet unique_element(const HfSet& y) {
  if (y.size() != 1) throw WitnessExecutionError("expected a singleton, got " + y.to_string());
  return y.elements().front();
}

HfSet second_components(const HfSet& pairs) {
  std::vector<HfSet> out;
  for (const auto& p : pairs.elements())
    if (auto ab = kunpair(p)) out.push_back(ab->second);
  return HfSet::of(std::move(out));
}

// Padding for the well-ordering reductions. The instance handed to WO is
// S u {S} with S = {x} u parts(x), so the order's field determines x.
enum class Parts { plain, family, poset };

HfSet parts(Parts k, const HfSet& x) {
  switch (k) {
    case Parts::plain: return x;
    case Parts::family: return set_union(x, big_union(x));
    case Parts::poset: return set_union(x, field(x));
  }
  return x;
}

Parts parts_for(const std::string& rel) {
  if (rel == "AC" || rel == "MuC" || rel == "AC_prime") return Parts::family;
  if (rel == "ZL" || rel == "HMP") return Parts::poset;
  return Parts::plain;
}

HfSet wo_pad(Parts k, const HfSet& x) { return set_successor(set_union(singleton(x), parts(k, x))); }

struct Ranked {
  std::map<HfSet, std::size_t> below;
  std::size_t pos(const HfSet& a) const {
    auto it = below.find(a);
    return it == below.end() ? 0 : it->second;
  }
  HfSet least(const HfSet& s) const {
    if (s.empty()) throw WitnessExecutionError("no least element of the empty set");
    return *std::min_element(s.elements().begin(), s.elements().end(),
                             [&](const HfSet& a, const HfSet& b) { return pos(a) < pos(b); });
  }
};

Ranked rank_by(const HfSet& order) {
  Ranked r;
  for (const auto& p : order.elements())
    if (auto ab = kunpair(p)) ++r.below[ab->second];
  return r;
}

// The padding S u {S} has S as its unique element of greatest rank, and
// S has x as its unique element of greatest rank.
HfSet top_match(const HfSet& s, const std::function<bool(const HfSet&)>& pred, const char* what) {
  if (s.empty()) throw WitnessExecutionError(std::string("cannot recover ") + what + " from the order");
  const auto& e = s.elements();
  auto top = std::max_element(e.begin(), e.end(), [](const HfSet& a, const HfSet& b) { return a.rank() < b.rank(); });
  const bool unique = std::count_if(e.begin(), e.end(), [&](const HfSet& a) { return a.rank() == top->rank(); }) == 1;
  if (!unique || !pred(*top)) throw WitnessExecutionError(std::string("cannot recover ") + what + " from the order");
  return *top;
}

HfSet wo_pick(const std::string& rel, const HfSet& order) {
  const Parts k = parts_for(rel);
  const HfSet padded = field(order);
  const HfSet s = top_match(padded, [&](const HfSet& e) { return set_successor(e) == padded; }, "the padding");
  const HfSet x = top_match(s, [&](const HfSet& e) { return set_union(singleton(e), parts(k, e)) == s; }, "x");
  const Ranked r = rank_by(order);

  if (rel == "ZERO") return HfSet{};
  if (rel == "PP" || rel == "PP2" || rel == "PP_fin") return r.least(x);
  if (rel == "MPP") return singleton(r.least(x));
  if (rel == "WO") {
    std::vector<HfSet> pairs;
    for (const auto& p : order.elements()) {
      auto ab = kunpair(p);
      if (ab && x.contains(ab->first) && x.contains(ab->second)) pairs.push_back(p);
    }
    return HfSet::of(std::move(pairs));
  }
  if (rel == "AC" || rel == "MuC") {
    std::vector<HfSet> picks;
    for (const auto& a : x.elements()) picks.push_back(r.least(a));
    return HfSet::of(std::move(picks));
  }
  if (rel == "AC_prime") {
    std::vector<HfSet> picks;
    for (const auto& a : x.elements()) picks.push_back(kpair(a, r.least(a)));
    return HfSet::of(std::move(picks));
  }
  if (rel == "ZL") return r.least(maximal_elements(x));
  if (rel == "HMP") {
    std::vector<HfSet> f(field(x).elements());
    std::sort(f.begin(), f.end(), [&](const HfSet& a, const HfSet& b) { return r.pos(a) < r.pos(b); });
    std::vector<HfSet> chain;
    for (const auto& a : f) {
      if (std::all_of(chain.begin(), chain.end(),
                      [&](const HfSet& c) { return poset_leq(x, a, c) || poset_leq(x, c, a); }))
        chain.push_back(a);
    }
    return HfSet::of(std::move(chain));
  }
  throw std::invalid_argument("no well-order pick for relation '" + rel + "'");
}

const std::vector<std::string> kWoRelations = {"PP", "PP2", "PP_fin", "MPP", "MuC", "AC", "AC_prime", "WO", "ZL", "HMP"};

std::map<std::string, Native> plain_natives() {
  std::map<std::string, Native> m;
  m["id"] = [](const HfSet& x, const HfSet*) { return x; };
  m["const_empty"] = [](const HfSet&, const HfSet*) { return HfSet{}; };
  m["discrete_poset"] = [](const HfSet& x, const HfSet*) { return discrete_poset(x); };
  m["maximal_elements"] = [](const HfSet& p, const HfSet*) { return maximal_elements(p); };
  m["singleton_maximal"] = [](const HfSet& p, const HfSet*) { return singleton(maximal_elements(p)); };
  m["field"] = [](const HfSet& p, const HfSet*) { return field(p); };
  m["singleton"] = [](const HfSet& x, const HfSet*) { return singleton(x); };
  m["unique_element"] = [](const HfSet& y, const HfSet*) { return unique_element(y); };
  m["choice_range"] = [](const HfSet& y, const HfSet*) { return second_components(y); };
  m["tag_family"] = [](const HfSet& x, const HfSet*) {
    std::vector<HfSet> tagged;
    for (const auto& a : x.elements()) {
      std::vector<HfSet> members;
      for (const auto& e : a.elements()) members.push_back(kpair(a, e));
      tagged.push_back(HfSet::of(std::move(members)));
    }
    return HfSet::of(std::move(tagged));
  };
  m["intersect_side"] = [](const HfSet& y, const HfSet* x) {
    if (!x) throw WitnessExecutionError("intersect_side needs the side value");
    return set_intersection(y, *x);
  };
  m["tc_singleton"] = [](const HfSet& x, const HfSet*) { return tc(singleton(x)); };
  m["wo_pad_plain"] = [](const HfSet& x, const HfSet*) { return wo_pad(Parts::plain, x); };
  m["wo_pad_family"] = [](const HfSet& x, const HfSet*) { return wo_pad(Parts::family, x); };
  m["wo_pad_poset"] = [](const HfSet& x, const HfSet*) { return wo_pad(Parts::poset, x); };
  for (const auto& r : kWoRelations)
    m["wo_pick_" + r] = [r](const HfSet& w, const HfSet*) { return wo_pick(r, w); };
  return m;
}

const PrenexStatement& need_formula(const std::optional<PrenexStatement>& f, const std::string& who) {
  if (!f || f->blocks.size() != 1) throw std::invalid_argument(who + " needs a statement ALL x EX y (matrix)");
  return *f;
}

}  // namespace

Procedure native_procedure(const std::string& name, const std::optional<PrenexStatement>& formula) {
  static const std::map<std::string, Native> natives = plain_natives();
  if (auto it = natives.find(name); it != natives.end()) return Procedure::native(name, it->second);
  if (name == "search_witness_set") {
    const PrenexStatement phi = need_formula(formula, name);
    return Procedure::native(name, [phi](const HfSet& x, const HfSet*) {
      return search_witness_set(phi.matrix, x, 1 << 17, phi.blocks[0].first, phi.blocks[0].second);
    });
  }
  if (name == "zfc_analog_search") {
    const PrenexStatement phi = need_formula(formula, name);
    return Procedure::native(name, [phi](const HfSet& order, const HfSet* x) {
      if (!x) throw WitnessExecutionError("zfc_analog_search needs the side value");
      Canonification f;
      f.map.emplace(tc(singleton(*x)), order);
      return search_reduction_zfc_analog(phi, *x, f);
    });
  }
  throw std::invalid_argument("unknown native procedure '" + name + "'");
}

std::vector<std::string> native_procedure_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : plain_natives()) names.push_back(k);
  names.push_back("search_witness_set");
  names.push_back("zfc_analog_search");
  std::sort(names.begin(), names.end());
  return names;
}

std::function<HfSet(const HfSet&, const OracleCall&)> native_oracle_witness(const std::string& name) {
  // Picks the elements of x one at a time with the PP oracle.
  auto by_pp = [](bool reflexive) {
    return [reflexive](const HfSet& x, const OracleCall& pick) {
      std::vector<HfSet> order;
      HfSet rest = x;
      while (!rest.empty()) {
        HfSet a = pick(rest);
        if (!rest.contains(a)) throw WitnessExecutionError("oracle answer " + a.to_string() + " is not a member");
        order.push_back(a);
        rest = set_difference(rest, singleton(a));
      }
      HfSet w = strict_order_from(order);
      if (!reflexive) return w;
      std::vector<HfSet> diag;
      for (const auto& a : order) diag.push_back(kpair(a, a));
      return set_union(w, HfSet::of(std::move(diag)));
    };
  };
  if (name == "wo_by_pp") return by_pp(false);
  if (name == "wo_by_pp_reflexive") return by_pp(true);
  throw std::invalid_argument("unknown oracle witness '" + name + "'");
}

std::function<std::vector<HfSet>(const HfSet&)> native_queries(const std::string& name) {
  if (name == "nonempty_subsets") {
    return [](const HfSet& x) {
      std::vector<HfSet> out;
      for (auto& s : subsets(x))
        if (!s.empty()) out.push_back(std::move(s));
      return out;
    };
  }
  if (name == "self") return [](const HfSet& x) { return std::vector<HfSet>{x}; };
  throw std::invalid_argument("unknown query universe '" + name + "'");
}

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::invalid_argument("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

constexpr std::string_view kNative = "native:";
constexpr std::string_view kFormula = "formula:";

bool is_native(const std::string& ref) { return ref.starts_with(kNative); }
std::string native_name(const std::string& ref) { return ref.substr(kNative.size()); }

std::shared_ptr<const Program> load_program(const std::filesystem::path& p) {
  return std::make_shared<const Program>(parse_program(read_file(p)));
}

RunOptions options_from(const nlohmann::json& j) {
  RunOptions o;
  if (j.contains("budget")) {
    o.budget.max_successor_steps = j["budget"].at(0).get<std::uint64_t>();
    o.budget.max_limit_jumps = j["budget"].at(1).get<std::uint64_t>();
  }
  return o;
}

}  // namespace

ReductionWitness load_witness(const std::filesystem::path& manifest) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(manifest.string() + ": " + e.what());
  }
  const auto dir = manifest.parent_path();
  ReductionWitness w;
  w.name = j.value("name", manifest.stem().string());
  w.kind = witness_kind_from_string(j.at("kind").get<std::string>());
  w.target = std::string(relation(j.at("target_relation").get<std::string>()).name);

  std::optional<PrenexStatement> formula;
  const std::string src = j.at("source_relation").get<std::string>();
  if (src.starts_with(kFormula)) {
    const auto path = dir / src.substr(kFormula.size());
    formula = parse_prenex(read_file(path));
    w.source = path.stem().string();
    w.source_relation = relation_from_statement(*formula, w.source);
  } else {
    w.source = relation(src).name;
  }

  const RunOptions opts = options_from(j);
  auto stage = [&](const std::string& ref) {
    if (is_native(ref)) return native_procedure(native_name(ref), formula);
    return Procedure::program(std::filesystem::path(ref).stem().string(), load_program(dir / ref), opts);
  };

  if (w.kind == ReductionWitness::Kind::OTM) {
    const std::string body = j.at("program").get<std::string>();
    if (is_native(body))
      w.oracle_native = native_oracle_witness(native_name(body));
    else
      w.oracle_program = load_program(dir / body);
    w.oracle_options = opts;
    w.queries = native_queries(native_name(j.value("queries", std::string("native:self"))));
  } else {
    w.pre = stage(j.at("pre").get<std::string>());
    w.post = stage(j.at("post").get<std::string>());
  }
  return w;
}

const std::vector<InvalidCanonification>& invalid_canonifications() {
  static const std::vector<InvalidCanonification> list = {
      {"PP", "always the empty set", [](const HfSet&) { return HfSet{}; }},
      {"WO", "cyclic on the first three elements",
       [](const HfSet& x) {
         const auto& e = x.elements();
         if (e.size() < 3) return strict_order_from(e);
         std::vector<HfSet> rest(e.begin() + 3, e.end());
         HfSet w = strict_order_from(rest);
         return set_union(w, HfSet::of({kpair(e[0], e[1]), kpair(e[1], e[2]), kpair(e[2], e[0])}));
       }},
      {"AC", "a second representative from every member with two or more",
       [](const HfSet& x) {
         std::vector<HfSet> picks;
         for (const auto& a : x.elements()) picks.push_back(a.elements().front());
         for (const auto& a : x.elements())
           if (a.size() >= 2) picks.push_back(a.elements()[1]);
         return HfSet::of(std::move(picks));
       }},
      {"ZL", "a minimal element",
       [](const HfSet& p) {
         const HfSet f = field(p);
         for (const auto& a : f.elements()) {
           bool minimal = true;
           for (const auto& b : f.elements())
             if (a != b && poset_leq(p, b, a)) minimal = false;
           if (minimal) return a;
         }
         return HfSet{};
       }},
      {"MPP", "the empty subset", [](const HfSet&) { return HfSet{}; }},
  };
  return list;
}

}  // namespace otmlab
