#include "otmlab/ordinal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "otmlab/errors.hpp"

namespace otmlab {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw RepresentationOverflow("ordinal coefficient overflow");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw RepresentationOverflow("ordinal coefficient overflow");
  return r;
}

Ordinal term(const Ordinal& e, std::uint64_t c) { return Ordinal::from_terms({Ordinal::Term{e, c}}); }

}  // namespace

Ordinal::Ordinal(std::uint64_t n) {
  if (n != 0) terms_.push_back(Term{Ordinal{}, n});
}

Ordinal Ordinal::omega() { return omega_pow(Ordinal{1}); }

Ordinal Ordinal::omega_pow(const Ordinal& e) { return term(e, 1); }

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coefficient == 0) throw std::invalid_argument("zero coefficient in Cantor normal form");
    if (i > 0 && !(terms[i].exponent < terms[i - 1].exponent))
      throw std::invalid_argument("exponents not strictly decreasing");
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

bool Ordinal::is_finite() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero()); }

bool Ordinal::is_successor() const { return !terms_.empty() && terms_.back().exponent.is_zero(); }

bool Ordinal::is_limit() const { return !terms_.empty() && !terms_.back().exponent.is_zero(); }

std::optional<std::uint64_t> Ordinal::to_natural() const {
  if (terms_.empty()) return 0;
  if (!is_finite()) return std::nullopt;
  return terms_[0].coefficient;
}

std::uint64_t Ordinal::finite_part() const { return is_successor() ? terms_.back().coefficient : 0; }

Ordinal Ordinal::limit_part() const {
  if (!is_successor()) return *this;
  Ordinal o = *this;
  o.terms_.pop_back();
  return o;
}

Ordinal Ordinal::truncate_below(const Ordinal& e) const {
  Ordinal o;
  for (const auto& t : terms_) {
    if (t.exponent < e) break;
    o.terms_.push_back(t);
  }
  return o;
}

Ordinal Ordinal::leading_exponent() const { return terms_.empty() ? Ordinal{} : terms_.front().exponent; }

Ordinal Ordinal::trailing_exponent() const { return terms_.empty() ? Ordinal{} : terms_.back().exponent; }

Ordinal Ordinal::successor() const { return add(*this, Ordinal{1}); }

Ordinal Ordinal::predecessor() const {
  if (!is_successor()) throw std::domain_error("predecessor of a non-successor ordinal");
  Ordinal o = *this;
  if (--o.terms_.back().coefficient == 0) o.terms_.pop_back();
  return o;
}

std::size_t Ordinal::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& t : terms_) {
    h ^= t.exponent.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::uint64_t>{}(t.coefficient) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

bool operator==(const Ordinal& a, const Ordinal& b) { return a.terms_ == b.terms_; }

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.terms_[i].exponent <=> b.terms_[i].exponent; c != 0) return c;
    if (auto c = a.terms_[i].coefficient <=> b.terms_[i].coefficient; c != 0) return c;
  }
  return a.terms_.size() <=> b.terms_.size();
}

std::strong_ordering compare(const Ordinal& a, const Ordinal& b) { return a <=> b; }

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const Ordinal& lead = b.terms().front().exponent;
  std::vector<Ordinal::Term> out;
  for (const auto& t : a.terms()) {
    if (t.exponent < lead) break;
    out.push_back(t);
  }
  auto rest = b.terms().begin();
  if (!out.empty() && out.back().exponent == lead) {
    out.back().coefficient = checked_add(out.back().coefficient, rest->coefficient);
    ++rest;
  }
  out.insert(out.end(), rest, b.terms().end());
  return Ordinal::from_terms(std::move(out));
}

Ordinal mul(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal{};
  const auto& at = a.terms();
  Ordinal result;
  for (const auto& t : b.terms()) {
    Ordinal piece;
    if (t.exponent.is_zero()) {
      // a * n: only the leading coefficient scales.
      std::vector<Ordinal::Term> terms = at;
      terms.front().coefficient = checked_mul(terms.front().coefficient, t.coefficient);
      piece = Ordinal::from_terms(std::move(terms));
    } else {
      piece = term(add(at.front().exponent, t.exponent), t.coefficient);
    }
    result = add(result, piece);
  }
  return result;
}

Ordinal subtract(const Ordinal& a, const Ordinal& b) {
  if (b > a) throw std::domain_error("left subtraction requires b <= a");
  const auto& at = a.terms();
  const auto& bt = b.terms();
  std::size_t i = 0;
  while (i < bt.size() && i < at.size() && at[i] == bt[i]) ++i;
  if (i == bt.size()) return Ordinal::from_terms({at.begin() + static_cast<long>(i), at.end()});
  // bt[i] < at[i]; b's remaining terms are absorbed.
  std::vector<Ordinal::Term> out(at.begin() + static_cast<long>(i), at.end());
  if (bt[i].exponent == at[i].exponent) {
    out.front().coefficient -= bt[i].coefficient;
    if (out.front().coefficient == 0) out.erase(out.begin());
  }
  return Ordinal::from_terms(std::move(out));
}

// ---------------------------------------------------------------------------
// Goedel pairing

namespace {

// Exponent h with pairs_below(w^e) == w^h, for e >= 1.
Ordinal shell_exponent(const Ordinal& e) {
  if (e.is_successor()) {
    Ordinal p = e.predecessor();
    if (p.is_zero()) return Ordinal{1};
    return add(add(p, p), Ordinal{1});
  }
  // e = z + w^f with f >= 1
  Ordinal z = subtract(e, Ordinal::omega_pow(e.trailing_exponent()));
  if (z.is_zero()) return e;
  return add(add(z, z), Ordinal::omega_pow(e.trailing_exponent()));
}

}  // namespace

Ordinal pairs_below(const Ordinal& k) {
  if (auto n = k.to_natural()) return Ordinal{checked_mul(*n, *n)};
  const auto& t = k.terms();
  const Ordinal& e1 = t.front().exponent;
  Ordinal s = Ordinal::omega_pow(shell_exponent(e1));
  if (t.front().coefficient > 1) s = add(s, term(add(e1, e1), t.front().coefficient - 1));
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i].exponent.is_zero()) break;
    s = add(s, term(add(e1, t[i].exponent), t[i].coefficient));
  }
  if (std::uint64_t n = k.finite_part(); n > 0) {
    Ordinal delta = k.limit_part();
    s = add(s, add(mul(delta, Ordinal{checked_mul(2, n)}), Ordinal{n}));
  }
  return s;
}

Ordinal godel_pair(const Ordinal& a, const Ordinal& b) {
  if (a < b) return add(pairs_below(b), a);
  return add(add(pairs_below(a), a), b);
}

Ordinal largest_satisfying(const std::function<bool(const Ordinal&)>& pred) {
  Ordinal x;
  std::optional<Ordinal> prev;
  while (true) {
    if (prev && prev->is_zero()) return x;
    if (!pred(add(x, Ordinal{1}))) return x;
    Ordinal e = largest_satisfying([&](const Ordinal& cand) {
      return (!prev || cand < *prev) && pred(add(x, Ordinal::omega_pow(cand)));
    });
    auto ok = [&](std::uint64_t m) {
      try {
        return pred(add(x, term(e, m)));
      } catch (const RepresentationOverflow&) {
        return false;
      }
    };
    std::uint64_t lo = 1;
    std::uint64_t hi = 2;
    while (ok(hi)) {
      lo = hi;
      if (hi > std::numeric_limits<std::uint64_t>::max() / 2) {
        hi = std::numeric_limits<std::uint64_t>::max();
        if (ok(hi)) lo = hi;
        break;
      }
      hi *= 2;
    }
    while (hi - lo > 1) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      (ok(mid) ? lo : hi) = mid;
    }
    x = add(x, term(e, lo));
    prev = e;
  }
}

std::pair<Ordinal, Ordinal> godel_unpair(const Ordinal& c) {
  Ordinal k;
  if (auto n = c.to_natural()) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(*n)));
    while (r > 0 && r * r > *n) --r;
    while ((r + 1) * (r + 1) <= *n) ++r;
    k = Ordinal{r};
  } else {
    k = largest_satisfying([&](const Ordinal& x) { return pairs_below(x) <= c; });
  }
  Ordinal r = subtract(c, pairs_below(k));
  if (r < k) return {r, k};
  return {k, subtract(r, k)};
}

// ---------------------------------------------------------------------------
// liminf

Ordinal DescribedSequence::at(std::uint64_t n) const {
  if (const auto* p = std::get_if<Periodic>(&shape)) {
    if (n < p->prefix.size()) return p->prefix[n];
    return p->cycle[(n - p->prefix.size()) % p->cycle.size()];
  }
  const auto& s = std::get<Sweep>(shape);
  return add(s.start, Ordinal{checked_mul(s.stride, n)});
}

Ordinal liminf(const DescribedSequence& s) {
  if (const auto* p = std::get_if<DescribedSequence::Periodic>(&s.shape)) {
    if (p->cycle.empty()) throw std::invalid_argument("periodic sequence needs a nonempty cycle");
    return *std::min_element(p->cycle.begin(), p->cycle.end());
  }
  return std::get<DescribedSequence::Sweep>(s.shape).limit;
}

// ---------------------------------------------------------------------------
// text syntax

namespace {

std::string exponent_text(const Ordinal& e) {
  if (e.is_finite()) return std::to_string(*e.to_natural());
  if (e == Ordinal::omega()) return "w";
  return "(" + e.to_string() + ")";
}

class OrdinalParser {
 public:
  explicit OrdinalParser(std::string_view s) : s_(s) {}

  Ordinal parse_all() {
    Ordinal o = sum();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character");
    return o;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("bad ordinal '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + what);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::uint64_t natural() {
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a number");
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = checked_add(checked_mul(v, 10), static_cast<std::uint64_t>(s_[pos_] - '0'));
      ++pos_;
    }
    return v;
  }
  Ordinal sum() {
    Ordinal o = term_();
    while (eat('+')) o = add(o, term_());
    return o;
  }
  Ordinal exponent() {
    if (eat('(')) {
      Ordinal e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (eat('w')) return Ordinal::omega();
    return Ordinal{natural()};
  }
  Ordinal term_() {
    if (eat('w')) {
      Ordinal e{1};
      if (eat('^')) e = exponent();
      std::uint64_t c = 1;
      if (eat('*')) c = natural();
      return c == 0 ? Ordinal{} : term(e, c);
    }
    return Ordinal{natural()};
  }
};

}  // namespace

std::string Ordinal::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += "+";
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += "w";
    if (t.exponent != Ordinal{1}) out += "^" + exponent_text(t.exponent);
    if (t.coefficient != 1) out += "*" + std::to_string(t.coefficient);
  }
  return out;
}

Ordinal Ordinal::parse(std::string_view text) { return OrdinalParser(text).parse_all(); }

}  // namespace otmlab
