#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "otmlab/errors.hpp"
#include "otmlab/machine.hpp"
#include "otmlab/relations.hpp"

namespace otmlab {

class OracleDomainError : public Error {
 public:
  explicit OracleDomainError(const HfSet& x) : Error("oracle undefined at " + x.to_string()), x_(x) {}
  const HfSet& x() const { return x_; }

 private:
  HfSet x_;
};

class EmptyWitnessSet : public Error {
 public:
  explicit EmptyWitnessSet(const HfSet& x) : Error("no witness for " + x.to_string()), x_(x) {}
  const HfSet& x() const { return x_; }

 private:
  HfSet x_;
};

class WitnessExecutionError : public Error {
 public:
  using Error::Error;
};

class MiracleRangeEscape : public Error {
 public:
  explicit MiracleRangeEscape(const HfSet& answer)
      : Error("oracle answer " + answer.to_string() + " exceeds the rank cap") {}
};

class SamplingNeedsSeed : public Error {
 public:
  SamplingNeedsSeed() : Error("canonification space exceeds the cap; a sampling seed is required") {}
};

/// A finite function on a stated instance set.
struct Canonification {
  std::map<HfSet, HfSet> map;
  /// Throws OracleDomainError outside the stated instances.
  const HfSet& at(const HfSet& x) const;
};

/// Counterexample-or-success for a single canonification.
struct CanonificationCheck {
  bool ok = true;
  std::optional<HfSet> counterexample;
  explicit operator bool() const { return ok; }
};

/// Every x in U inside the domain of R satisfies R(x, F(x)). Values
/// missing from F count as failures.
CanonificationCheck check_canonification(const Canonification& f, const Relation& r, const std::vector<HfSet>& u);

struct CanonificationSet {
  std::vector<Canonification> items;
  bool exhaustive = true;
  long double product = 1;  // size of the full space
};

/// All canonifications of R on D when there are at most `cap`; otherwise
/// `sample` seeded random ones plus the Ackermann-least and -greatest
/// choices. Off-domain instances map to the empty set.
CanonificationSet enumerate_canonifications(const Relation& r, const std::vector<HfSet>& d, std::size_t cap = 10000,
                                            std::size_t sample = 100, std::optional<std::uint64_t> seed = {});

/// A pre- or post-stage: a native procedure or an OTM program on codes.
/// Program stages read the code of their input (or of the Kuratowski
/// pair (main, side) when a side value is passed) on the input tape and
/// leave the code of their answer on the output tape.
class Procedure {
 public:
  using Native = std::function<HfSet(const HfSet& main, const HfSet* side)>;

  static Procedure native(std::string name, Native f);
  static Procedure program(std::string name, std::shared_ptr<const Program> p, RunOptions options = {});

  const std::string& name() const { return name_; }
  bool is_program() const { return program_ != nullptr; }
  /// Throws WitnessExecutionError when a program does not halt with a
  /// valid code.
  HfSet operator()(const HfSet& main, const HfSet* side = nullptr) const;

 private:
  std::string name_;
  Native native_;
  std::shared_ptr<const Program> program_;
  RunOptions options_;
  std::shared_ptr<std::map<std::pair<HfSet, std::optional<HfSet>>, HfSet>> memo_;
};

/// Oracle access given to native OTM-kind witnesses.
using OracleCall = std::function<HfSet(const HfSet&)>;

struct ReductionWitness {
  enum class Kind { oW, soW, OTM };
  std::string name;
  Kind kind = Kind::soW;
  std::string source;  // the reduced relation R
  std::string target;  // the oracle relation R'
  /// Relation used for `source` when it is given by a formula.
  std::optional<Relation> source_relation;

  // oW and soW
  std::optional<Procedure> pre;   // Q
  std::optional<Procedure> post;  // P

  // OTM
  std::function<HfSet(const HfSet& x, const OracleCall& call)> oracle_native;
  std::shared_ptr<const Program> oracle_program;
  RunOptions oracle_options;
  /// The instances of R' the witness may query on input x.
  std::function<std::vector<HfSet>(const HfSet& x)> queries;

  const Relation& source_rel() const;
  const Relation& target_rel() const;
};

std::string to_string(ReductionWitness::Kind k);
ReductionWitness::Kind witness_kind_from_string(std::string_view s);

/// oW: P(F'(Q(x)), x). soW: P(F'(Q(x))).
HfSet apply_oW(const ReductionWitness& w, const Canonification& f, const HfSet& x);

struct MiracleRun {
  HfSet result;
  std::uint64_t miracle_calls = 0;
};

/// Runs an OTM-kind witness. Program witnesses see their miracle tape
/// replaced by the code of F'(s) whenever they enter the miracle state
/// holding a valid code of s; other contents are left as they are.
MiracleRun run_with_miracle(const ReductionWitness& w, const Canonification& f, const HfSet& x);

struct VerifyOptions {
  std::size_t cap = 10000;
  std::size_t sample = 100;
  std::optional<std::uint64_t> seed;
  std::size_t max_counterexamples = 10;
  /// Run oW/soW witnesses as oW, passing x to the post-stage.
  bool as_weak = false;
};

struct Counterexample {
  HfSet x;
  /// The oracle canonification on the queried instances.
  std::vector<std::pair<HfSet, HfSet>> oracle;
  std::optional<HfSet> result;
  std::string error;
};

struct VerifyReport {
  bool ok = true;
  bool exhaustive = true;
  std::size_t instances = 0;
  std::size_t in_domain = 0;
  std::size_t min_canonifications = 0;
  std::size_t max_canonifications = 0;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::vector<Counterexample> counterexamples;
  /// Distinct oracle call counts per instance (OTM kind).
  std::map<HfSet, std::set<std::uint64_t>> miracle_calls;
};

/// Checks the witness on every x in U inside the domain of R, against
/// every canonification of R' on the instances x gives rise to (sampled
/// beyond the cap). Execution errors count as failures.
VerifyReport verify_reduction(const ReductionWitness& w, const std::vector<HfSet>& u, const VerifyOptions& options = {});

/// Least y in Ackermann order with matrix(x, y), found after obtaining a
/// well-order of tc({x}) from F_WO. Throws Exhausted.
HfSet search_reduction_zfc_analog(const PrenexStatement& phi, const HfSet& x, const Canonification& f_wo,
                                  std::uint64_t budget = 1 << 20);

// Witness library ------------------------------------------------------------

/// Named native procedures. `formula` feeds the search procedures.
Procedure native_procedure(const std::string& name, const std::optional<PrenexStatement>& formula = {});
std::vector<std::string> native_procedure_names();

/// Native OTM-kind witness bodies and query universes.
std::function<HfSet(const HfSet&, const OracleCall&)> native_oracle_witness(const std::string& name);
std::function<std::vector<HfSet>(const HfSet&)> native_queries(const std::string& name);

/// Reads a JSON manifest {kind, pre, post, source_relation, target_relation}.
/// Stages are "native:NAME" or a program path relative to the manifest.
ReductionWitness load_witness(const std::filesystem::path& manifest);

/// Deliberately wrong canonifications used as negative controls.
struct InvalidCanonification {
  std::string relation;
  std::string description;
  std::function<HfSet(const HfSet&)> f;
};
const std::vector<InvalidCanonification>& invalid_canonifications();

}  // namespace otmlab
