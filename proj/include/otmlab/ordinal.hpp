#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace otmlab {

/// An ordinal below epsilon_0 in Cantor normal form:
///   w^e1*c1 + w^e2*c2 + ... + w^ek*ck   with e1 > e2 > ... > ek, ci >= 1.
///
/// The term list is the unique representation, so structural equality is
/// ordinal equality. Values are immutable; every operation returns a new value.
class Ordinal {
 public:
  struct Term;

  Ordinal() = default;  // zero
  Ordinal(std::uint64_t n);  // NOLINT(google-explicit-constructor): naturals embed

  static Ordinal omega();
  /// w^e
  static Ordinal omega_pow(const Ordinal& e);
  /// Builds from an arbitrary term list; throws std::invalid_argument if the
  /// list is not in normal form.
  static Ordinal from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  bool is_successor() const;
  /// Limit ordinal: nonzero and not a successor.
  bool is_limit() const;

  /// The natural number value; nullopt when infinite.
  std::optional<std::uint64_t> to_natural() const;
  /// Trailing finite part n with *this = limit_part() + n.
  std::uint64_t finite_part() const;
  /// *this with the finite tail removed (0 or a limit).
  Ordinal limit_part() const;
  /// Keeps the terms whose exponent is >= e.
  Ordinal truncate_below(const Ordinal& e) const;
  /// Exponent of the leading term (0 for zero and finite ordinals).
  Ordinal leading_exponent() const;
  /// Exponent of the last term; zero when *this is zero.
  Ordinal trailing_exponent() const;

  Ordinal successor() const;
  /// Throws std::domain_error unless *this is a successor.
  Ordinal predecessor() const;

  std::string to_string() const;
  /// Parses the text syntax `0`, `5`, `w`, `w^2*3+w*2+7`, `w^(w+1)`.
  static Ordinal parse(std::string_view text);

  std::size_t hash() const;

  friend bool operator==(const Ordinal& a, const Ordinal& b);
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);

 private:
  std::vector<Term> terms_;
};

struct Ordinal::Term {
  Ordinal exponent;
  std::uint64_t coefficient = 1;
  friend bool operator==(const Term&, const Term&) = default;
};

std::strong_ordering compare(const Ordinal& a, const Ordinal& b);

Ordinal add(const Ordinal& a, const Ordinal& b);
Ordinal mul(const Ordinal& a, const Ordinal& b);
/// Left subtraction: the unique r with b + r == a. Requires b <= a.
Ordinal subtract(const Ordinal& a, const Ordinal& b);

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }
inline Ordinal operator*(const Ordinal& a, const Ordinal& b) { return mul(a, b); }

/// Goedel pairing: the order isomorphism between pairs ordered by
/// (max(a,b), a, b) and the ordinals.
Ordinal godel_pair(const Ordinal& a, const Ordinal& b);
std::pair<Ordinal, Ordinal> godel_unpair(const Ordinal& c);
/// Order type of the pairs whose maximum is below k.
Ordinal pairs_below(const Ordinal& k);

/// Largest x satisfying a predicate that holds on a closed initial segment
/// [0, k] of the ordinals. The predicate must hold at 0.
Ordinal largest_satisfying(const std::function<bool(const Ordinal&)>& pred);

/// An ordinal sequence given by a finite description.
struct DescribedSequence {
  struct Periodic {
    std::vector<Ordinal> prefix;
    std::vector<Ordinal> cycle;  // nonempty
  };
  /// start, start+stride, start+2*stride, ... with supremum `limit`.
  struct Sweep {
    Ordinal start;
    std::uint64_t stride = 1;
    Ordinal limit;
  };
  std::variant<Periodic, Sweep> shape;

  /// n-th term, for finite n.
  Ordinal at(std::uint64_t n) const;
};

/// Least value occurring cofinally (the supremum for sweeps).
Ordinal liminf(const DescribedSequence& s);

}  // namespace otmlab

template <>
struct std::hash<otmlab::Ordinal> {
  std::size_t operator()(const otmlab::Ordinal& o) const noexcept { return o.hash(); }
};
