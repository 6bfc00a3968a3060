#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "otmlab/errors.hpp"
#include "otmlab/formula.hpp"
#include "otmlab/machine.hpp"

namespace otmlab {

struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, std::string expected, std::string found);
  const SourceSpan& span() const { return span_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  SourceSpan span_;
  std::string expected_;
  std::string found_;
};

/// Transitions missing for some (state, read vector) pairs.
class TotalityError : public Error {
 public:
  struct Gap {
    std::string state;
    std::string reads;  // "in=0,work=1,out=0"
  };
  explicit TotalityError(std::vector<Gap> gaps);
  const std::vector<Gap>& gaps() const { return gaps_; }

 private:
  std::vector<Gap> gaps_;
};

/// An unbounded quantifier where only bounded ones are allowed.
class NotDelta0 : public Error {
 public:
  explicit NotDelta0(SourceSpan span);
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

/// Assembly syntax:
///
///   tapes in work out;
///   state q0;            # modifiers: start, halt, miracle
///   state done halt;
///   on q0 work=0 -> write work=1, move work R, goto q0;
///
/// Tapes missing from a guard match either symbol; the first matching rule
/// wins. Writes default to keeping the symbol, moves to S, goto to the same
/// state. The first declared state is the start unless another is marked.
Program parse_program(std::string_view text);
std::string print_program(const Program& p);

/// Either a bounded formula or a prenex statement `ALL x EX y ... (matrix)`.
using ParsedFormula = std::variant<Delta0Formula, PrenexStatement>;

ParsedFormula parse_formula(std::string_view text);
Delta0Formula parse_delta0(std::string_view text);
PrenexStatement parse_prenex(std::string_view text);

std::string print_formula(const Formula& f);
std::string print_formula(const Delta0Formula& f);
std::string print_formula(const PrenexStatement& s);

}  // namespace otmlab
