#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"  // vendored CLI11

#include "bilocal/correlations.hpp"
#include "bilocal/error.hpp"
#include "bilocal/io/format.hpp"
#include "bilocal/io/state_file.hpp"
#include "bilocal/monogamy.hpp"
#include "bilocal/optimize.hpp"
#include "bilocal/verify.hpp"

namespace bilocal::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,
  kExitInvariant = 3,
  kExitBound = 4,
  kExitIo = 5,
};

enum class Format { Text, Json, Csv };

using io::json;

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse:
    case ErrorCode::InvalidArgument:
      return kExitParse;
    case ErrorCode::Io:
      return kExitIo;
    default:
      return kExitInvariant;
  }
}

namespace detail {

inline json num(double v) { return json(io::round15(v)); }

// Physical quantities are O(1); anything below the floor is rounding residue
// and is reported as 0 so reports do not depend on the last ulp of the eigensolver.
inline constexpr double kNoiseFloor = 1e-14;

inline double snap(double v) { return std::abs(v) < kNoiseFloor ? 0.0 : v; }

inline json quantity(double v) { return num(snap(v)); }

inline json quantity_array(std::span<const double> values) {
  json a = json::array();
  for (double v : values) a.push_back(quantity(v));
  return a;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string scalar_text(const json& v) {
  if (v.is_number_float()) return io::format15(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

// depth-first leaves as ("a.b[2]", value)
inline void flatten(const json& v, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(prefix, v);
  }
}

struct Context {
  Format format = Format::Text;
  double tolerance = 1e-9;
  std::string command;
  std::uint64_t seed = 0;
  std::ostream& out;
};

inline json report_header(const Context& ctx) {
  json doc;
  doc["tool"] = "bilocal";
  doc["version"] = kVersion;
  doc["command"] = ctx.command;
  doc["timestamp"] = utc_timestamp();
  doc["seed"] = ctx.seed;
  doc["tolerance"] = ctx.tolerance;
  return doc;
}

inline json input_entry(const io::LoadedState& s) {
  json e;
  e["source"] = s.source;
  e["label"] = s.state.label;
  e["qubits"] = s.state.qubits;
  e["digest"] = s.digest;
  return e;
}

inline void emit(const Context& ctx, const json& doc, const json* csv_rows = nullptr) {
  switch (ctx.format) {
    case Format::Json:
      ctx.out << doc.dump(2) << "\n";
      return;
    case Format::Csv: {
      if (csv_rows) {
        // list of flat objects sharing keys
        std::vector<std::pair<std::string, json>> head;
        flatten(csv_rows->front(), "", head);
        for (std::size_t i = 0; i < head.size(); ++i) ctx.out << (i ? "," : "") << csv_field(head[i].first);
        ctx.out << "\n";
        for (const json& row : *csv_rows) {
          std::vector<std::pair<std::string, json>> cells;
          flatten(row, "", cells);
          for (std::size_t i = 0; i < cells.size(); ++i)
            ctx.out << (i ? "," : "") << csv_field(scalar_text(cells[i].second));
          ctx.out << "\n";
        }
        return;
      }
      std::vector<std::pair<std::string, json>> cells;
      flatten(doc["results"], "", cells);
      for (std::size_t i = 0; i < cells.size(); ++i) ctx.out << (i ? "," : "") << csv_field(cells[i].first);
      ctx.out << "\n";
      for (std::size_t i = 0; i < cells.size(); ++i)
        ctx.out << (i ? "," : "") << csv_field(scalar_text(cells[i].second));
      ctx.out << "\n";
      return;
    }
    case Format::Text: {
      std::vector<std::pair<std::string, json>> cells;
      flatten(doc, "", cells);
      for (const auto& [key, value] : cells) ctx.out << key << ": " << scalar_text(value) << "\n";
      return;
    }
  }
}

inline std::vector<io::LoadedState> load_inputs(const std::vector<std::string>& files,
                                                const std::vector<std::string>& generators, std::size_t expected,
                                                int qubits) {
  if (files.size() + generators.size() != expected) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(expected) + " state input(s), got " +
                                                std::to_string(files.size() + generators.size()));
  }
  std::vector<io::LoadedState> states;
  for (const auto& f : files) states.push_back(io::load_state_file(f));
  for (const auto& g : generators) states.push_back(io::load_generated(g, qubits));
  for (const auto& s : states) {
    if (s.state.qubits != qubits) {
      throw Error(ErrorCode::WrongDimension, "'" + s.source + "' holds " + std::to_string(s.state.qubits) +
                                                 " qubits; this command needs " + std::to_string(qubits));
    }
  }
  return states;
}

inline json tensor_json(const CorrelationTensor& t) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(json::array({quantity(t(i, 0)), quantity(t(i, 1)), quantity(t(i, 2))}));
  return rows;
}

}  // namespace detail

struct TensorArgs {
  std::vector<std::string> files;
  std::vector<std::string> generators;
};

inline int cmd_tensor(const detail::Context& ctx, const TensorArgs& args) {
  const auto inputs = detail::load_inputs(args.files, args.generators, 1, 2);
  const CorrelationTensor t = correlation_tensor(inputs[0].state.rho);
  const GramEigs w = gram_eigs(t);
  const double m = horodecki_m(w);

  json doc = detail::report_header(ctx);
  doc["inputs"] = json::array({detail::input_entry(inputs[0])});
  json& r = doc["results"];
  r["T"] = detail::tensor_json(t);
  r["gram_eigs"] = detail::quantity_array(w.values);
  r["M"] = detail::quantity(m);
  r["chsh_max"] = detail::quantity(2.0 * std::sqrt(m));
  r["chsh_violation"] = m > 1.0;
  detail::emit(ctx, doc);
  return kExitOk;
}

struct MonogamyArgs {
  std::vector<std::string> files;
  std::vector<std::string> generators;
  std::string assign_1 = "abc";
  std::string assign_2 = "bcd";
  bool optimize = false;
  int restarts = 32;
  int max_iterations = 2000;
};

inline int cmd_monogamy(const detail::Context& ctx, const MonogamyArgs& args) {
  const auto inputs = detail::load_inputs(args.files, args.generators, 2, 3);
  const FourPartyNetwork net(inputs[0].state.rho, inputs[1].state.rho, parse_assignment(args.assign_1),
                             parse_assignment(args.assign_2));
  const MonogamyReport rep = monogamy_report(net, ctx.tolerance);

  json doc = detail::report_header(ctx);
  doc["inputs"] = json::array({detail::input_entry(inputs[0]), detail::input_entry(inputs[1])});
  json& r = doc["results"];
  r["assignment_1"] = to_string(net.assignment_1());
  r["assignment_2"] = to_string(net.assignment_2());
  r["Lambda_B"] = detail::quantity_array(rep.lambda_b);
  r["Lambda_C"] = detail::quantity_array(rep.lambda_c);
  r["iota_B"] = detail::quantity_array(rep.iota_b);
  r["iota_C"] = detail::quantity_array(rep.iota_c);
  r["bmaxsq_B"] = detail::quantity(rep.bmaxsq_b);
  r["bmaxsq_C"] = detail::quantity(rep.bmaxsq_c);
  r["tradeoff_lhs"] = detail::quantity(rep.tradeoff_lhs);
  r["amgm_bound"] = detail::quantity(rep.amgm_bound);
  r["cauchy_schwarz_bound"] = detail::quantity(rep.cauchy_schwarz_bound);
  r["satisfied"] = rep.satisfied;
  r["nonbilocal_B"] = rep.nonbilocal_b();
  r["nonbilocal_C"] = rep.nonbilocal_c();

  std::vector<std::string> violations;
  const double tol = ctx.tolerance;
  if (rep.tradeoff_lhs > 2.0 + tol) violations.push_back("tradeoff_lhs > 2");
  if (rep.tradeoff_lhs > rep.amgm_bound + tol) violations.push_back("tradeoff_lhs > amgm_bound");
  if (rep.amgm_bound > 2.0 + tol) violations.push_back("amgm_bound > 2");

  if (args.optimize) {
    OptimizerConfig cfg;
    cfg.restarts = args.restarts;
    cfg.max_iterations = args.max_iterations;
    cfg.seed = ctx.seed;
    const OptimizationResult shared = maximize_shared(net, cfg);
    const FreeResult free = maximize_free(net, cfg);
    constexpr double kOptSlack = 1e-6;
    json& o = r["optimizer"];
    o["restarts"] = cfg.restarts;
    o["max_iterations"] = cfg.max_iterations;
    o["maximize_shared"] = detail::quantity(shared.value);
    o["maximize_free"] = detail::quantity(free.lhs);
    o["B_free_NB"] = detail::quantity(free.per_network[0]);
    o["B_free_NC"] = detail::quantity(free.per_network[1]);
    o["iterations_exhausted"] = shared.iterations_exhausted || free.runs[0].iterations_exhausted ||
                                free.runs[1].iterations_exhausted;
    json& chain = o["chain_residuals"];
    chain["shared_minus_free"] = detail::num(shared.value - free.lhs);
    chain["free_minus_tradeoff_lhs"] = detail::num(free.lhs - rep.tradeoff_lhs);
    chain["free_minus_cauchy_schwarz"] = detail::num(free.lhs - rep.cauchy_schwarz_bound);
    chain["tradeoff_lhs_minus_amgm"] = detail::num(rep.tradeoff_lhs - rep.amgm_bound);
    chain["amgm_minus_2"] = detail::num(rep.amgm_bound - 2.0);
    if (shared.value > free.lhs + kOptSlack) violations.push_back("maximize_shared > maximize_free");
    if (free.lhs > rep.tradeoff_lhs + kOptSlack) violations.push_back("maximize_free > tradeoff_lhs");
    if (free.lhs > rep.cauchy_schwarz_bound + kOptSlack) violations.push_back("maximize_free > cauchy_schwarz_bound");
  }
  r["violations"] = violations;
  detail::emit(ctx, doc);
  return violations.empty() ? kExitOk : kExitBound;
}

struct SweepArgs {
  std::string param = "mu1";
  std::string from = "0";
  std::string to = "pi/2";
  int steps = 0;
  std::string out;
  std::string assign_2 = "bdc";
  bool optimize = false;
  int restarts = 32;
  int max_iterations = 2000;
};

inline int cmd_sweep(const detail::Context& ctx, const SweepArgs& args) {
  if (args.param != "mu1") throw Error(ErrorCode::InvalidArgument, "only --param mu1 can be swept");
  if (args.steps < 2) throw Error(ErrorCode::InvalidArgument, "--steps must be at least 2");
  const double lo = io::parse_angle(args.from);
  const double hi = io::parse_angle(args.to);
  const Assignment assign_2 = parse_assignment(args.assign_2);

  std::ostringstream csv;
  csv << "mu1,bmaxsq_B,bmaxsq_C,tradeoff_lhs" << (args.optimize ? ",shared_opt" : "") << "\n";
  double worst = 0.0;
  bool violated = false;
  for (int k = 0; k < args.steps; ++k) {
    const double mu1 = k + 1 == args.steps ? hi : lo + (hi - lo) * k / (args.steps - 1);
    const FourPartyNetwork net = tightness_network(mu1, assign_2);
    const MonogamyReport rep = monogamy_report(net, ctx.tolerance);
    worst = std::max(worst, std::abs(rep.tradeoff_lhs - 2.0));
    violated = violated || !rep.satisfied;
    csv << io::format15(mu1) << "," << io::format15(detail::snap(rep.bmaxsq_b)) << ","
        << io::format15(detail::snap(rep.bmaxsq_c)) << "," << io::format15(detail::snap(rep.tradeoff_lhs));
    if (args.optimize) {
      OptimizerConfig cfg;
      cfg.restarts = args.restarts;
      cfg.max_iterations = args.max_iterations;
      cfg.seed = derive_seed(ctx.seed, static_cast<std::uint64_t>(k));
      csv << "," << io::format15(detail::snap(maximize_shared(net, cfg).value));
    }
    csv << "\n";
  }
  const std::string text = csv.str();
  io::write_file_atomic(args.out, text);

  json doc = detail::report_header(ctx);
  json& r = doc["results"];
  r["param"] = args.param;
  r["from"] = detail::num(lo);
  r["to"] = detail::num(hi);
  r["steps"] = args.steps;
  r["assignment_2"] = to_string(assign_2);
  r["out"] = args.out;
  r["out_digest"] = io::digest(text);
  r["max_abs_tradeoff_minus_2"] = detail::num(worst);
  detail::emit(ctx, doc);
  return violated ? kExitBound : kExitOk;
}

struct VerifyArgs {
  std::string suite;
  int count = 100;
  int optimize_count = 0;
  int restarts = 32;
  int max_iterations = 2000;
  bool tolerance_given = false;
};

inline int cmd_verify(const detail::Context& ctx, const VerifyArgs& args) {
  verify::SuiteOptions opt;
  opt.count = args.count;
  opt.seed = ctx.seed;
  if (args.tolerance_given) opt.tolerance = ctx.tolerance;
  opt.optimize_count = args.optimize_count;
  opt.optimizer.restarts = args.restarts;
  opt.optimizer.max_iterations = args.max_iterations;
  const verify::SuiteReport rep = verify::run_suite(args.suite, opt);

  json doc = detail::report_header(ctx);
  json& r = doc["results"];
  r["suite"] = rep.suite;
  r["count"] = rep.count;
  json checks = json::array();
  double worst = -INFINITY;
  for (const verify::Check& c : rep.checks) {
    json e;
    e["check"] = c.name;
    e["tolerance"] = detail::num(c.tolerance);
    e["evaluated"] = c.evaluated;
    e["worst_residual"] = detail::num(c.worst_residual);
    e["worst_seed"] = c.worst_seed;
    e["failures"] = c.failures;
    e["failing_seed"] = c.first_failing_seed ? json(*c.first_failing_seed) : json(nullptr);
    e["passed"] = c.passed();
    checks.push_back(std::move(e));
    worst = std::max(worst, c.worst_residual - c.tolerance);
  }
  r["checks"] = checks;
  r["worst_margin"] = detail::num(worst);  // max over checks of residual - tolerance
  r["failing_seed"] = rep.failing_seed() ? json(*rep.failing_seed()) : json(nullptr);
  r["passed"] = rep.passed();
  detail::emit(ctx, doc, &r["checks"]);
  return rep.passed() ? kExitOk : kExitBound;
}

struct GenerateArgs {
  std::string spec;
  int qubits = 2;
  std::string out;
};

inline int cmd_generate(const detail::Context& ctx, const GenerateArgs& args) {
  const io::StateFile st = io::generate_state(args.spec, args.qubits);
  const std::string text = io::serialize_state(st);
  if (args.out.empty()) {
    ctx.out << text;
  } else {
    io::write_file_atomic(args.out, text);
  }
  return kExitOk;
}

/// Runs the tool on argv-style arguments (program name excluded).
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bilocal network nonlocality: correlation tensors, bilocality bounds and monogamy checks", "bilocal"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  bool as_json = false;
  bool as_csv = false;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  auto* json_flag = app.add_flag("--json", as_json, "Emit a JSON report");
  app.add_flag("--csv", as_csv, "Emit CSV")->excludes(json_flag);
  app.add_option("--tol", tolerance, "Tolerance for bound checks (default 1e-9)")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Random seed (default: $BILOCAL_SEED, else 0)");

  TensorArgs tensor;
  auto* tensor_cmd = app.add_subcommand("tensor", "Correlation tensor, Gram spectrum and CHSH bound of a two-qubit state");
  tensor_cmd->add_option("file", tensor.files, "State file");
  tensor_cmd->add_option("--state", tensor.generators, "Built-in state instead of a file");

  MonogamyArgs mono;
  auto* mono_cmd = app.add_subcommand("monogamy", "Monogamy report for two three-qubit sources");
  mono_cmd->add_option("files", mono.files, "State files for rho_ABC and rho_BCD");
  mono_cmd->add_option("--state", mono.generators, "Built-in state(s) used after any files");
  mono_cmd->add_option("--assign-1", mono.assign_1, "Parties of the first source's qubits (permutation of abc)");
  mono_cmd->add_option("--assign-2", mono.assign_2, "Parties of the second source's qubits (bcd or bdc, ...)");
  mono_cmd->add_flag("--optimize", mono.optimize, "Also run the shared and free settings optimizers");
  mono_cmd->add_option("--restarts", mono.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
  mono_cmd->add_option("--max-iter", mono.max_iterations, "Nelder-Mead iterations per restart")
      ->check(CLI::PositiveNumber);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Tightness sweep over the W-state angle mu1, written as CSV");
  sweep_cmd->add_option("--param", sweep.param, "Swept parameter (mu1)");
  sweep_cmd->add_option("--from", sweep.from, "First value (number or pi expression)");
  sweep_cmd->add_option("--to", sweep.to, "Last value (number or pi expression)");
  sweep_cmd->add_option("--steps", sweep.steps, "Number of rows")->required();
  sweep_cmd->add_option("--out", sweep.out, "CSV output path")->required();
  sweep_cmd->add_option("--assign-2", sweep.assign_2, "Second-copy qubit assignment");
  sweep_cmd->add_flag("--optimize", sweep.optimize, "Add a shared-settings optimizer column");
  sweep_cmd->add_option("--restarts", sweep.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--max-iter", sweep.max_iterations, "Nelder-Mead iterations per restart")
      ->check(CLI::PositiveNumber);

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "Seeded randomized property suite");
  verify_cmd->add_option("suite", ver.suite, "lemma | marginal | monogamy | equivalence | horodecki")
      ->required()
      ->check(CLI::IsMember({"lemma", "marginal", "monogamy", "equivalence", "horodecki"}));
  verify_cmd->add_option("--count", ver.count, "Number of random instances")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--optimize-count", ver.optimize_count,
                         "monogamy: run the optimizers on this many instances");
  verify_cmd->add_option("--restarts", ver.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--max-iter", ver.max_iterations, "Nelder-Mead iterations per restart")
      ->check(CLI::PositiveNumber);

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a built-in state as a state file");
  gen_cmd->add_option("spec", gen.spec, "bell | ghz | product | classical | mixed | w:MU0,MU1 | random:SEED[:RANK]")
      ->required();
  gen_cmd->add_option("--qubits", gen.qubits, "Register size")->check(CLI::Range(1, 4));
  gen_cmd->add_option("--out", gen.out, "Output path (stdout when omitted)");

  GenerateArgs rnd;
  std::uint64_t rnd_seed = 0;
  int rnd_rank = 4;
  auto* random_cmd = app.add_subcommand("random", "Write a seeded random mixed state file");
  random_cmd->add_option("--qubits", rnd.qubits, "Register size")->check(CLI::Range(1, 4));
  random_cmd->add_option("--rank", rnd_rank, "Rank of the Ginibre factor")->check(CLI::PositiveNumber);
  random_cmd->add_option("--out", rnd.out, "Output path (stdout when omitted)");

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitParse;
  }

  std::string command = "bilocal";
  for (const auto& a : argv) command += " " + a;
  detail::Context ctx{as_json ? Format::Json : as_csv ? Format::Csv : Format::Text, tolerance.value_or(1e-9),
                      command, 0, out};

  try {
    if (seed) {
      ctx.seed = *seed;
    } else if (const char* env = std::getenv("BILOCAL_SEED"); env && *env) {
      try {
        std::size_t used = 0;
        ctx.seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, std::string("BILOCAL_SEED is not an unsigned integer: ") + env);
      }
    }

    if (*tensor_cmd) return cmd_tensor(ctx, tensor);
    if (*mono_cmd) return cmd_monogamy(ctx, mono);
    if (*sweep_cmd) return cmd_sweep(ctx, sweep);
    if (*verify_cmd) {
      ver.tolerance_given = tolerance.has_value();
      return cmd_verify(ctx, ver);
    }
    if (*gen_cmd) return cmd_generate(ctx, gen);
    if (*random_cmd) {
      rnd_seed = ctx.seed;
      rnd.spec = "random:" + std::to_string(rnd_seed) + ":" + std::to_string(rnd_rank);
      return cmd_generate(ctx, rnd);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kExitParse;
}

}  // namespace bilocal::cli
