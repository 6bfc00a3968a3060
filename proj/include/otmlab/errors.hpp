#pragma once

#include <stdexcept>
#include <string>

namespace otmlab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value would leave the representable range (ordinals below epsilon_0,
/// 64-bit coefficients, Ackermann indices that fit in 64 bits, the rank cap).
class RepresentationOverflow : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(std::string name)
      : Error("unbound variable '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class MalformedCertificate : public Error {
 public:
  using Error::Error;
};

class Exhausted : public Error {
 public:
  explicit Exhausted(unsigned long long budget)
      : Error("search exhausted after " + std::to_string(budget) + " candidates"), budget_(budget) {}
  unsigned long long budget() const { return budget_; }

 private:
  unsigned long long budget_;
};

}  // namespace otmlab
