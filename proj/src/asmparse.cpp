#include "otmlab/asmparse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace otmlab {

ParseError::ParseError(SourceSpan span, std::string expected, std::string found)
    : Error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": expected " + expected + ", found " +
            (found.empty() ? std::string("end of input") : "'" + found + "'")),
      span_(span),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

std::string describe_gaps(const std::vector<TotalityError::Gap>& gaps) {
  std::string s = "transitions missing for";
  for (std::size_t i = 0; i < gaps.size() && i < 8; ++i) s += (i ? "; " : " ") + gaps[i].state + " (" + gaps[i].reads + ")";
  if (gaps.size() > 8) s += "; and " + std::to_string(gaps.size() - 8) + " more";
  return s;
}

}  // namespace

TotalityError::TotalityError(std::vector<Gap> gaps) : Error(describe_gaps(gaps)), gaps_(std::move(gaps)) {}

NotDelta0::NotDelta0(SourceSpan span)
    : Error(std::to_string(span.line) + ":" + std::to_string(span.column) +
            ": unbounded quantifier in a bounded formula"),
      span_(span) {}

namespace {

enum class Tok { ident, number, symbol, end };

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  SourceSpan last{1, 1, 0};
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    SourceSpan sp{line, col, 1};
    std::size_t len = 1;
    Tok kind = Tok::symbol;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i + len < s.size() && (std::isalnum(static_cast<unsigned char>(s[i + len])) || s[i + len] == '_')) ++len;
      kind = Tok::ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i + len < s.size() && std::isdigit(static_cast<unsigned char>(s[i + len]))) ++len;
      kind = Tok::number;
    } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      len = 2;
    } else if (std::string_view("();,=!&|").find(c) == std::string_view::npos) {
      throw ParseError(sp, "a token", std::string(1, c));
    }
    sp.length = len;
    out.push_back(Token{kind, std::string(s.substr(i, len)), sp});
    last = sp;
    advance(len);
  }
  // End-of-input errors point at the last character of the input.
  SourceSpan end = last;
  if (!out.empty()) {
    end.column += end.length > 0 ? end.length - 1 : 0;
    end.length = 0;
  }
  out.push_back(Token{Tok::end, "", end});
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() {
    Token t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::end; }
  bool is(std::string_view text) const { return peek().kind != Tok::end && peek().text == text; }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    next();
    return true;
  }
  Token expect(std::string_view text) {
    if (!is(text)) fail("'" + std::string(text) + "'");
    return next();
  }
  Token ident(const std::string& what) {
    if (peek().kind != Tok::ident) fail(what);
    return next();
  }
  [[noreturn]] void fail(const std::string& expected) const { throw ParseError(peek().span, expected, peek().text); }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// programs

struct Rule {
  Token state;
  std::vector<std::pair<std::size_t, bool>> guard;
  std::vector<std::pair<std::size_t, bool>> writes;
  std::vector<std::pair<std::size_t, Move>> moves;
  std::optional<Token> target;
};

bool parse_bit(Cursor& c) {
  Token t = c.next();
  if (t.kind != Tok::number || (t.text != "0" && t.text != "1")) throw ParseError(t.span, "0 or 1", t.text);
  return t.text == "1";
}

std::string reads_text(const Program& p, ReadVector r) {
  std::string s;
  for (std::size_t t = 0; t < p.tapes.size(); ++t) {
    if (t) s += ",";
    s += to_string(p.tapes[t]) + "=" + ((r >> t & 1) ? "1" : "0");
  }
  return s;
}

}  // namespace

Program parse_program(std::string_view text) {
  Cursor c(lex(text));
  Program p;
  std::map<std::string, StateId> ids;
  std::optional<Token> tapes_decl;
  std::optional<StateId> explicit_start;
  std::vector<Rule> rules;

  auto tape_of = [&](const Token& t) -> std::size_t {
    auto role = tape_role_from_string(t.text);
    if (!role || !p.tape_index(*role)) throw ParseError(t.span, "a declared tape role", t.text);
    return *p.tape_index(*role);
  };

  while (!c.at_end()) {
    if (c.is("tapes")) {
      Token kw = c.next();
      if (tapes_decl) throw ParseError(kw.span, "a single tapes declaration", kw.text);
      tapes_decl = kw;
      while (!c.is(";")) {
        Token r = c.ident("tape role");
        auto role = tape_role_from_string(r.text);
        if (!role) throw ParseError(r.span, "one of in, work, out, miracle, oracle", r.text);
        if (p.tape_index(*role)) throw ParseError(r.span, "a tape role not yet declared", r.text);
        p.tapes.push_back(*role);
      }
      c.expect(";");
      for (TapeRole required : {TapeRole::input, TapeRole::work, TapeRole::output})
        if (!p.tape_index(required)) throw ParseError(kw.span, "tapes in, work and out", kw.text);
      if (p.tapes.size() > 16) throw ParseError(kw.span, "at most 16 tapes", kw.text);
    } else if (c.is("state")) {
      c.next();
      Token name = c.ident("state name");
      if (ids.count(name.text)) throw ParseError(name.span, "a new state name", name.text);
      const auto id = static_cast<StateId>(p.state_names.size());
      ids[name.text] = id;
      p.state_names.push_back(name.text);
      p.halting.push_back(false);
      while (!c.is(";")) {
        Token m = c.ident("state modifier");
        if (m.text == "halt") {
          if (p.miracle_state == id) throw ParseError(m.span, "a non-miracle modifier", m.text);
          p.halting[id] = true;
        } else if (m.text == "start") {
          if (explicit_start) throw ParseError(m.span, "a single start state", m.text);
          explicit_start = id;
        } else if (m.text == "miracle") {
          if (p.miracle_state || p.halting[id]) throw ParseError(m.span, "a single non-halting miracle state", m.text);
          p.miracle_state = id;
        } else {
          throw ParseError(m.span, "start, halt or miracle", m.text);
        }
      }
      c.expect(";");
    } else if (c.is("on")) {
      Token kw = c.next();
      if (!tapes_decl) throw ParseError(kw.span, "a tapes declaration before rules", kw.text);
      Rule r{c.ident("state name"), {}, {}, {}, std::nullopt};
      while (!c.is("->")) {
        Token t = c.ident("tape role or '->'");
        c.expect("=");
        r.guard.emplace_back(tape_of(t), parse_bit(c));
      }
      c.expect("->");
      do {
        Token item = c.ident("write, move or goto");
        if (item.text == "write") {
          Token t = c.ident("tape role");
          c.expect("=");
          r.writes.emplace_back(tape_of(t), parse_bit(c));
        } else if (item.text == "move") {
          Token t = c.ident("tape role");
          const std::size_t idx = tape_of(t);
          Token d = c.ident("L, R or S");
          if (d.text == "L")
            r.moves.emplace_back(idx, Move::left);
          else if (d.text == "R")
            r.moves.emplace_back(idx, Move::right);
          else if (d.text == "S")
            r.moves.emplace_back(idx, Move::stay);
          else
            throw ParseError(d.span, "L, R or S", d.text);
        } else if (item.text == "goto") {
          r.target = c.ident("state name");
        } else {
          throw ParseError(item.span, "write, move or goto", item.text);
        }
      } while (c.accept(","));
      c.expect(";");
      rules.push_back(std::move(r));
    } else {
      c.fail("tapes, state or on");
    }
  }
  if (!tapes_decl) c.fail("a tapes declaration");
  if (p.state_names.empty()) c.fail("a state declaration");
  p.start = explicit_start.value_or(0);

  auto state_of = [&](const Token& t) {
    auto it = ids.find(t.text);
    if (it == ids.end()) throw ParseError(t.span, "a declared state", t.text);
    return it->second;
  };
  struct Resolved {
    StateId state;
    ReadVector mask = 0, value = 0;
    Action action;
  };
  std::vector<Resolved> resolved;
  for (const auto& r : rules) {
    Resolved x;
    x.state = state_of(r.state);
    if (p.halting[x.state]) throw ParseError(r.state.span, "a non-halting state", r.state.text);
    for (auto [t, bit] : r.guard) {
      x.mask |= ReadVector{1} << t;
      if (bit) x.value |= ReadVector{1} << t;
    }
    x.action.write.assign(p.tapes.size(), -1);
    x.action.move.assign(p.tapes.size(), Move::stay);
    for (auto [t, bit] : r.writes) x.action.write[t] = bit ? 1 : 0;
    for (auto [t, m] : r.moves) x.action.move[t] = m;
    x.action.next = r.target ? state_of(*r.target) : x.state;
    resolved.push_back(std::move(x));
  }

  std::vector<TotalityError::Gap> gaps;
  const ReadVector combos = ReadVector{1} << p.tapes.size();
  for (StateId s = 0; s < p.state_names.size(); ++s) {
    if (p.halting[s]) continue;
    for (ReadVector rv = 0; rv < combos; ++rv) {
      auto it = std::find_if(resolved.begin(), resolved.end(), [&](const Resolved& x) {
        return x.state == s && (rv & x.mask) == x.value;
      });
      if (it == resolved.end())
        gaps.push_back({p.state_names[s], reads_text(p, rv)});
      else
        p.transitions[{s, rv}] = it->action;
    }
  }
  if (!gaps.empty()) throw TotalityError(std::move(gaps));
  return p;
}

std::string print_program(const Program& p) {
  std::string s = "tapes";
  for (auto r : p.tapes) s += " " + to_string(r);
  s += ";\n";
  for (StateId id = 0; id < p.state_names.size(); ++id) {
    s += "state " + p.state_names[id];
    if (id == p.start) s += " start";
    if (p.halting[id]) s += " halt";
    if (p.miracle_state == id) s += " miracle";
    s += ";\n";
  }
  for (const auto& [key, a] : p.transitions) {
    const auto [state, rv] = key;
    s += "on " + p.state_names[state];
    for (std::size_t t = 0; t < p.tapes.size(); ++t) s += " " + to_string(p.tapes[t]) + "=" + ((rv >> t & 1) ? "1" : "0");
    s += " ->";
    std::string items;
    for (std::size_t t = 0; t < p.tapes.size(); ++t)
      if (a.write[t] >= 0) items += ", write " + to_string(p.tapes[t]) + "=" + (a.write[t] ? "1" : "0");
    for (std::size_t t = 0; t < p.tapes.size(); ++t)
      if (a.move[t] != Move::stay) items += ", move " + to_string(p.tapes[t]) + " " + to_char(a.move[t]);
    items += ", goto " + p.state_names[a.next];
    s += " " + items.substr(2) + ";\n";
  }
  return s;
}

// ---------------------------------------------------------------------------
// formulas

namespace {

const std::set<std::string>& reserved() {
  static const std::set<std::string> r{"in", "all", "ex", "ALL", "EX"};
  return r;
}

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : c_(lex(text)) {}

  ParsedFormula top() {
    if (c_.is("ALL")) return prenex();
    if (c_.at_end()) c_.fail("a formula");
    FormulaPtr f = implication();
    if (!c_.at_end()) c_.fail("end of input");
    return make_delta0(std::move(f));
  }

 private:
  Cursor c_;

  std::string variable() {
    Token t = c_.ident("variable");
    if (reserved().count(t.text)) throw ParseError(t.span, "variable", t.text);
    return t.text;
  }

  PrenexStatement prenex() {
    PrenexStatement s;
    std::set<std::string> bound;
    while (c_.accept("ALL")) {
      std::string x = variable();
      c_.expect("EX");
      std::string y = variable();
      bound.insert(x);
      bound.insert(y);
      s.blocks.emplace_back(std::move(x), std::move(y));
    }
    c_.expect("(");
    FormulaPtr m = implication();
    c_.expect(")");
    if (!c_.at_end()) c_.fail("end of input");
    s.matrix = make_delta0(std::move(m));
    for (const auto& v : s.matrix.free_vars)
      if (!bound.count(v)) throw UnboundVariable(v);
    return s;
  }

  FormulaPtr implication() {
    FormulaPtr a = disjunction();
    if (c_.accept("->")) return Formula::binary(Formula::Kind::implies, a, implication());
    return a;
  }
  FormulaPtr disjunction() {
    FormulaPtr a = conjunction();
    while (c_.accept("|")) a = Formula::binary(Formula::Kind::disj, a, conjunction());
    return a;
  }
  FormulaPtr conjunction() {
    FormulaPtr a = unary();
    while (c_.accept("&")) a = Formula::binary(Formula::Kind::conj, a, unary());
    return a;
  }
  FormulaPtr unary() {
    if (c_.accept("!")) return Formula::unary(unary());
    return primary();
  }
  FormulaPtr primary() {
    if (c_.accept("(")) {
      FormulaPtr f = implication();
      c_.expect(")");
      return f;
    }
    if (c_.is("ALL") || c_.is("EX")) throw NotDelta0(c_.peek().span);
    if (c_.is("all") || c_.is("ex")) {
      Token q = c_.next();
      const auto kind = q.text == "all" ? Formula::Kind::all : Formula::Kind::ex;
      std::string v = variable();
      if (c_.is("(")) throw NotDelta0(q.span);
      c_.expect("in");
      std::string b = variable();
      c_.expect("(");
      FormulaPtr body = implication();
      c_.expect(")");
      return Formula::quantifier(kind, std::move(v), std::move(b), std::move(body));
    }
    std::string l = variable();
    Formula::Kind k;
    if (c_.accept("in"))
      k = Formula::Kind::in;
    else if (c_.accept("="))
      k = Formula::Kind::eq;
    else
      c_.fail("'in' or '='");
    return Formula::atom(k, std::move(l), variable());
  }
};

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::implies: return 1;
    case Formula::Kind::disj: return 2;
    case Formula::Kind::conj: return 3;
    default: return 4;
  }
}

std::string print(const Formula& f, int ctx) {
  std::string s;
  switch (f.kind) {
    case Formula::Kind::in: return f.left + " in " + f.right;
    case Formula::Kind::eq: return f.left + " = " + f.right;
    case Formula::Kind::neg: return "!" + print(*f.a, 4);
    case Formula::Kind::all:
    case Formula::Kind::ex:
      return std::string(f.kind == Formula::Kind::all ? "all " : "ex ") + f.var + " in " + f.bound + " (" +
             print(*f.a, 0) + ")";
    case Formula::Kind::conj: s = print(*f.a, 3) + " & " + print(*f.b, 4); break;
    case Formula::Kind::disj: s = print(*f.a, 2) + " | " + print(*f.b, 3); break;
    case Formula::Kind::implies: s = print(*f.a, 2) + " -> " + print(*f.b, 1); break;
  }
  return ctx > precedence(f.kind) ? "(" + s + ")" : s;
}

}  // namespace

ParsedFormula parse_formula(std::string_view text) { return FormulaParser(text).top(); }

Delta0Formula parse_delta0(std::string_view text) {
  auto f = parse_formula(text);
  if (auto* d = std::get_if<Delta0Formula>(&f)) return std::move(*d);
  throw NotDelta0(lex(text).front().span);
}

PrenexStatement parse_prenex(std::string_view text) {
  auto f = parse_formula(text);
  if (auto* s = std::get_if<PrenexStatement>(&f)) return std::move(*s);
  const Token first = lex(text).front();
  throw ParseError(first.span, "'ALL'", first.text);
}

std::string print_formula(const Formula& f) { return print(f, 0); }
std::string print_formula(const Delta0Formula& f) { return print(*f.root, 0); }

std::string print_formula(const PrenexStatement& s) {
  std::string out;
  for (const auto& [x, y] : s.blocks) out += "ALL " + x + " EX " + y + " ";
  return out + "(" + print(*s.matrix.root, 0) + ")";
}

}  // namespace otmlab
