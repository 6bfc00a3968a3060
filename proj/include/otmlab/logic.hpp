#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "otmlab/errors.hpp"
#include "otmlab/formula.hpp"
#include "otmlab/setcode.hpp"

namespace otmlab {

using Env = std::map<std::string, HfSet>;

/// Tarskian truth; bounded quantifiers range over the members of the bound.
bool eval_delta0(const Delta0Formula& f, const Env& env);
bool eval_formula(const Formula& f, const Env& env);

/// Least b in Ackermann order among the first `budget` sets with
/// psi(a, b). Throws Exhausted when none is found.
HfSet search_witness(const Delta0Formula& psi, const HfSet& a, std::uint64_t budget,
                     const std::string& a_var = "a", const std::string& b_var = "b");
/// All witnesses of the least rank that has one.
HfSet search_witness_set(const Delta0Formula& psi, const HfSet& a, std::uint64_t budget,
                         const std::string& a_var = "a", const std::string& b_var = "b");

/// Finite set over which unbounded quantifiers range.
using Carrier = std::vector<HfSet>;

/// A function value left the carrier.
class RangeEscape : public Error {
 public:
  explicit RangeEscape(std::vector<HfSet> args);
  const std::vector<HfSet>& args() const { return args_; }

 private:
  std::vector<HfSet> args_;
};

struct CheckResult {
  bool ok = true;
  /// The instantiated universal values at which the check fails.
  std::vector<HfSet> counterexample;
  explicit operator bool() const { return ok; }
};

using UnaryFn = std::function<HfSet(const HfSet&)>;
using TupleFn = std::function<HfSet(std::span<const HfSet>)>;

bool eval_prenex(const PrenexStatement& s, const Carrier& u);

/// For all a in U: the statement with x1 := a, y1 := F(a) holds over U.
CheckResult check_s_canonification(const PrenexStatement& s, const UnaryFn& f, const Carrier& u);

/// Checks (F1..Fn): for every i and a1..a(i-1) in U, the statement with
/// x_j := a_j, y_j := F_j(a1..aj) for j < i holds over U. Here i runs up
/// to n+1, where the instantiation is complete.
CheckResult check_t_canonification(const PrenexStatement& s, std::span<const TupleFn> fs, const Carrier& u);

}  // namespace otmlab
