// otmlab: run ordinal Turing machines, convert set codes, evaluate
// formulas and verify reduction witnesses.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "otmlab/asmparse.hpp"
#include "otmlab/logic.hpp"
#include "otmlab/reducibility.hpp"

using namespace otmlab;
using nlohmann::json;

namespace {

std::string count(std::size_t n, const std::string& noun) {
  return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

enum Exit { ok = 0, counterexample = 1, usage = 2, execution = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json code_json(const SetCode& c) {
  json pairs = json::array();
  for (const auto& p : c.pairs) pairs.push_back(p.to_string());
  return {{"bound", c.bound.to_string()}, {"pairs", pairs}};
}

Ordinal ordinal_json(const json& j) {
  if (j.is_number_unsigned()) return Ordinal(j.get<std::uint64_t>());
  if (j.is_string()) return Ordinal::parse(j.get<std::string>());
  throw UsageError("ordinal must be a string or a natural number");
}

SetCode code_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad code JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("bound") || !j.contains("pairs")) throw UsageError("code needs bound and pairs");
  SetCode c;
  c.bound = ordinal_json(j["bound"]);
  for (const auto& p : j["pairs"]) c.pairs.push_back(ordinal_json(p));
  std::sort(c.pairs.begin(), c.pairs.end());
  c.pairs.erase(std::unique(c.pairs.begin(), c.pairs.end()), c.pairs.end());
  return c;
}

/// A set literal such as {{}} or a code object.
Tape input_tape(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first == std::string::npos) return Tape{};
  if (text.find('"') != std::string::npos) {
    SetCode c = code_from_json(text);
    return code_to_tape(c);
  }
  return code_to_tape(encode(HfSet::parse(text)));
}

std::vector<HfSet> universe_for(const Relation& r, const std::string& spec) {
  if (!spec.starts_with("rank:")) throw UsageError("universe must be rank:N");
  unsigned n = 0;
  try {
    n = static_cast<unsigned>(std::stoul(spec.substr(5)));
  } catch (const std::exception&) {
    throw UsageError("universe must be rank:N");
  }
  return r.instances(n);
}

json config_json(const Program& p, const Configuration& c) {
  json tapes = json::object();
  for (std::size_t t = 0; t < p.tape_count(); ++t)
    tapes[to_string(p.tapes[t])] = {{"head", c.heads[t].to_string()}, {"cells", c.tapes[t].to_string()}};
  return {{"time", c.time.to_string()}, {"state", p.state_names[c.state]}, {"tapes", tapes}};
}

int cmd_run(const std::string& path, const std::string& input, const std::vector<std::uint64_t>& budget,
            const std::string& trace_path, bool as_json) {
  const Program p = parse_program(read_file(path));
  RunOptions opts;
  if (!budget.empty()) {
    if (budget.size() != 2 || budget[0] == 0) throw UsageError("--budget takes steps,jumps with steps > 0");
    opts.budget = {budget[0], budget[1]};
  }
  std::ofstream trace;
  RunHooks hooks;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) throw UsageError("cannot write " + trace_path);
    hooks.on_event = [&](const TraceEvent& e) {
      static const char* names[] = {"start", "step", "limit", "miracle"};
      json rec = config_json(p, e.config);
      rec["event"] = names[static_cast<int>(e.kind)];
      if (e.kind == TraceKind::limit) rec["level"] = e.level;
      trace << rec.dump() << '\n';
    };
  }
  const RunOutcome o = run(p, input_tape(input), opts, hooks);
  if (as_json) {
    json j = config_json(p, o.config);
    j["outcome"] = to_string(o.kind);
    j["steps"] = o.successor_steps;
    j["limits"] = o.limit_jumps;
    if (!o.reason.empty()) j["reason"] = o.reason;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << to_string(o.kind) << " time=" << o.config.time.to_string() << " state="
              << p.state_names[o.config.state] << '\n';
    for (std::size_t t = 0; t < p.tape_count(); ++t)
      std::cout << "  " << to_string(p.tapes[t]) << " head=" << o.config.heads[t].to_string() << ' '
                << o.config.tapes[t].to_string() << '\n';
    std::cout << "  steps=" << o.successor_steps << " limits=" << o.limit_jumps << '\n';
    if (!o.reason.empty()) std::cout << "  " << o.reason << '\n';
  }
  return o.kind == RunOutcome::Kind::unresolved ? execution : ok;
}

json counterexample_json(const Counterexample& c) {
  json oracle = json::array();
  for (const auto& [q, a] : c.oracle) oracle.push_back({q.to_string(), a.to_string()});
  json j = {{"x", c.x.to_string()}, {"oracle", oracle}, {"error", c.error}};
  if (c.result) j["result"] = c.result->to_string();
  return j;
}

int cmd_check(const std::string& manifest, const std::string& universe, std::size_t cap, std::size_t sample,
              std::optional<std::uint64_t> seed, const std::string& report_path, bool weak) {
  ReductionWitness w;
  try {
    w = load_witness(manifest);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto u = universe_for(w.source_rel(), universe);
  VerifyOptions opts;
  opts.cap = cap;
  opts.sample = sample;
  opts.seed = seed;
  opts.as_weak = weak;
  const VerifyReport rep = verify_reduction(w, u, opts);

  json calls = json::object();
  for (const auto& [x, ns] : rep.miracle_calls) calls[x.to_string()] = std::vector<std::uint64_t>(ns.begin(), ns.end());
  json cex = json::array();
  for (const auto& c : rep.counterexamples) cex.push_back(counterexample_json(c));
  json j = {{"witness", w.name},
            {"kind", to_string(w.kind)},
            {"source", w.source},
            {"target", w.target},
            {"ok", rep.ok},
            {"exhaustive", rep.exhaustive},
            {"instances", rep.instances},
            {"in_domain", rep.in_domain},
            {"canonifications", {rep.min_canonifications, rep.max_canonifications}},
            {"cases", rep.cases},
            {"failures", rep.failures},
            {"counterexamples", cex}};
  if (!calls.empty()) j["miracle_calls"] = calls;

  if (rep.ok) {
    std::cout << "OK " << (rep.exhaustive ? "exhaustive" : "sampled") << " (" << count(rep.instances, "instance") << " × "
              << rep.min_canonifications << ".." << rep.max_canonifications << " canonifications)\n";
  } else {
    std::cout << "FAIL " << rep.failures << " of " << rep.cases << " cases\n";
    for (const auto& c : rep.counterexamples) {
      std::cout << "  x=" << c.x.to_string();
      if (c.result) std::cout << " result=" << c.result->to_string();
      std::cout << " : " << c.error << '\n';
    }
  }
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw UsageError("cannot write " + report_path);
    out << j.dump(2) << '\n';
  }
  return rep.ok ? ok : counterexample;
}

int cmd_eval(const std::string& text, const std::vector<std::string>& env_args, const std::string& carrier) {
  ParsedFormula f = parse_formula(text);
  bool value = false;
  if (auto* d = std::get_if<Delta0Formula>(&f)) {
    Env env;
    for (const auto& a : env_args) {
      auto eq = a.find('=');
      if (eq == std::string::npos) throw UsageError("--env takes name=set");
      env[a.substr(0, eq)] = HfSet::parse(a.substr(eq + 1));
    }
    value = eval_delta0(*d, env);
  } else {
    if (carrier.empty()) throw UsageError("a statement needs --carrier rank:N");
    value = eval_prenex(std::get<PrenexStatement>(f), universe_for(relation("ZERO"), carrier));
  }
  std::cout << (value ? "true" : "false") << '\n';
  return ok;
}

int cmd_canon(const std::string& rel_name, const std::string& universe, const std::string& choice, int invalid) {
  const Relation& r = relation(rel_name);
  const auto u = universe_for(r, universe);
  std::function<HfSet(const HfSet&)> f;
  if (invalid >= 0) {
    const auto& list = invalid_canonifications();
    if (static_cast<std::size_t>(invalid) >= list.size()) throw UsageError("no such invalid canonification");
    if (list[invalid].relation != r.name) throw UsageError("invalid canonification is for " + list[invalid].relation);
    f = list[invalid].f;
  } else {
    if (choice != "least" && choice != "greatest") throw UsageError("--choice is least or greatest");
    f = [&](const HfSet& x) {
      WitnessSpace w = r.witnesses(x);
      const auto& ys = w.complete ? w.all : w.extremal;
      if (ys.empty()) throw EmptyWitnessSet(x);
      return choice == "least" ? ys.front() : ys.back();
    };
  }
  Canonification c;
  for (const auto& x : u) c.map.emplace(x, r.domain(x) ? f(x) : HfSet{});
  const CanonificationCheck res = check_canonification(c, r, u);
  if (res) {
    std::cout << "OK (" << count(u.size(), "instance") << ")\n";
    return ok;
  }
  std::cout << "FAIL x=" << res.counterexample->to_string() << " F(x)=" << c.at(*res.counterexample).to_string()
            << '\n';
  return counterexample;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ordinal Turing machines and ordinal Weihrauch reductions"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run a program");
  std::string program, input, trace;
  std::vector<std::uint64_t> budget;
  bool run_json = false;
  run_cmd->add_option("program", program, "Program file")->required();
  run_cmd->add_option("--input", input, "Set literal or code JSON for the input tape");
  run_cmd->add_option("--budget", budget, "steps,jumps")->delimiter(',')->expected(2);
  run_cmd->add_option("--trace", trace, "Write a JSONL event trace");
  run_cmd->add_flag("--json", run_json, "JSON output");

  auto* check_cmd = app.add_subcommand("check", "Verify a reduction witness");
  std::string manifest, universe = "rank:3", report;
  std::size_t cap = 10000, sample = 100;
  std::optional<std::uint64_t> seed;
  bool weak = false;
  check_cmd->add_option("manifest", manifest, "Witness manifest")->required();
  check_cmd->add_option("--universe", universe, "rank:N");
  check_cmd->add_option("--cap", cap, "Largest canonification space enumerated in full");
  check_cmd->add_option("--sample", sample, "Sampled canonifications beyond the cap");
  check_cmd->add_option("--seed", seed, "Sampling seed");
  check_cmd->add_option("--report", report, "Write the JSON report");
  check_cmd->add_flag("--weak", weak, "Pass x to the post-stage");

  auto* encode_cmd = app.add_subcommand("encode", "Code of a set literal");
  std::string literal;
  encode_cmd->add_option("set", literal, "Set literal")->required();

  auto* decode_cmd = app.add_subcommand("decode", "Set coded by a code JSON");
  std::string code_text;
  decode_cmd->add_option("code", code_text, "Code JSON")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula");
  std::string formula, carrier;
  std::vector<std::string> env;
  eval_cmd->add_option("formula", formula, "Formula")->required();
  eval_cmd->add_option("--env", env, "name=set assignments");
  eval_cmd->add_option("--carrier", carrier, "rank:N, for statements");

  auto* canon_cmd = app.add_subcommand("canon", "Check a canonification");
  std::string rel_name, choice = "least";
  int invalid = -1;
  canon_cmd->add_option("relation", rel_name, "Relation")->required();
  canon_cmd->add_option("--universe", universe, "rank:N");
  canon_cmd->add_option("--choice", choice, "least or greatest witness");
  canon_cmd->add_option("--invalid", invalid, "Index of a built-in invalid canonification");

  auto* list_cmd = app.add_subcommand("list-universe", "List the instances of a relation");
  std::string list_rel;
  list_cmd->add_option("relation", list_rel, "Relation")->required();
  list_cmd->add_option("--universe", universe, "rank:N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return usage;
  }

  try {
    if (*run_cmd) return cmd_run(program, input, budget, trace, run_json);
    if (*check_cmd) return cmd_check(manifest, universe, cap, sample, seed, report, weak);
    if (*encode_cmd) {
      std::cout << code_json(encode(HfSet::parse(literal))).dump() << '\n';
      return ok;
    }
    if (*decode_cmd) {
      std::cout << decode(code_from_json(code_text)).to_string() << '\n';
      return ok;
    }
    if (*eval_cmd) return cmd_eval(formula, env, carrier);
    if (*canon_cmd) return cmd_canon(rel_name, universe, choice, invalid);
    if (*list_cmd) {
      for (const auto& x : universe_for(relation(list_rel), universe)) std::cout << x.to_string() << '\n';
      return ok;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return usage;
  } catch (const NotDelta0& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const InvalidCode& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const TotalityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const SamplingNeedsSeed& e) {
    std::cerr << "error: " << e.what() << " (pass --seed)\n";
    return usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return execution;
  }
  return usage;
}
