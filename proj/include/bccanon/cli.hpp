#pragma once

// Command dispatch for the bccanon executable.
//
//   check    A.json B.json   self-adjointness test
//   canon    A.json B.json   canonical factors, one file per factor in --out
//   classify A.json B.json   Separated / Mixed / Coupled with r and ranks
//   generate --order m --seed s [--unit-cosines k]   writes A.json, B.json
//   selftest --orders 3,5,7,9 --trials N
//
// Exit codes: 0 success, 1 criterion failure, 2 input error, 3 numerical failure.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bccanon/bvpforms.hpp"
#include "bccanon/io.hpp"
#include "bccanon/selftest.hpp"

namespace bccanon {

enum ExitCode : int { kExitOk = 0, kExitCriterion = 1, kExitInput = 2, kExitNumerical = 3 };

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::InvalidTarget:
    case ErrorCode::UnsupportedOrder:
    case ErrorCode::PartitionMismatch:
    case ErrorCode::OddSize:
      return kExitInput;
    default:
      return kExitNumerical;
  }
}

struct CommandOutcome {
  Report report;
  int exit_code = kExitOk;
  std::string message;  // error text or help, empty on success
  ReportFormat format = ReportFormat::Text;
};

namespace detail {

inline Tolerances tolerances_from(const std::optional<double>& flag) {
  Tolerances tol;
  const char* env = std::getenv("BC_CANON_TOL");
  if (flag) {
    tol.residual_abs = *flag;
  } else if (env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0') throw Error(ErrorCode::ParseError, "BC_CANON_TOL is not a number");
    tol.residual_abs = v;
  }
  if (!tol.valid()) throw Error(ErrorCode::ParseError, "tolerance must lie in (0, 1)");
  return tol;
}

inline BoundaryPair load_pair(const std::string& a_path, const std::string& b_path) {
  ComplexMatrix a = parse_matrix_file(a_path);
  ComplexMatrix b = parse_matrix_file(b_path);
  return BoundaryPair::from(std::move(a), std::move(b));
}

inline ComplexMatrix column_matrix(const RealVector& v) { return v.cast<ComplexScalar>(); }

inline void run_check(Report& rep, int& code, const BoundaryPair& pair, const Tolerances& tol) {
  const SelfAdjointReport r = check_self_adjoint(pair, tol);
  rep.verdict = r.self_adjoint() ? "self-adjoint" : "not self-adjoint";
  rep.metrics["m"] = r.m;
  rep.metrics["rank(A:B)"] = r.rank_ab;
  rep.metrics["rank(A)"] = r.rank_a;
  rep.metrics["rank(B)"] = r.rank_b;
  rep.metrics["rank_ok"] = r.rank_ok ? 1 : 0;
  rep.metrics["gram_residual"] = r.gram_residual;
  rep.metrics["gram_ok"] = r.gram_ok ? 1 : 0;
  code = r.self_adjoint() ? kExitOk : kExitCriterion;
}

inline void write_factors(const std::string& dir, Report& rep) {
  std::filesystem::create_directories(dir);
  Json manifest;
  manifest["command"] = rep.command;
  manifest["inputs"] = rep.inputs;
  manifest["verdict"] = rep.verdict;
  manifest["files"] = Json::object();
  for (const auto& [name, m] : rep.factors) {
    const std::string file = name + ".json";
    write_matrix_file((std::filesystem::path(dir) / file).string(), m);
    manifest["files"][name] = file;
  }
  manifest["metrics"] = Json::object();
  for (const auto& [k, v] : rep.metrics) manifest["metrics"][k] = v;
  write_text_file((std::filesystem::path(dir) / "manifest.json").string(), dump_json(manifest));
}

inline void run_canon(Report& rep, const BoundaryPair& pair, const Tolerances& tol, const std::string& out) {
  const int m = pair.spec.m();
  const int n = pair.spec.n();
  rep.metrics["m"] = m;
  rep.metrics["n"] = n;
  if (pair.spec.is_odd_order()) {
    const CanonicalForm f = canonical_decompose(pair, tol);
    const ComplexMatrix assembled = f.assembled();
    rep.verdict = to_string(f.classification);
    rep.metrics["r"] = f.r;
    rep.metrics["null_count"] = f.null_count;
    rep.metrics["predicted_rank_A"] = f.predicted_rank_a;
    rep.metrics["predicted_rank_B"] = f.predicted_rank_b;
    rep.metrics["reconstruction_residual"] = (assembled - construct_from_W(f.w, f.spec, tol).ab()).norm();
    rep.metrics["row_space_angle"] = max_principal_angle_sine(assembled, pair.ab());
    rep.metrics["w_unitarity_residual"] = unitarity_residual(f.w);
    rep.factors = {{"Q1", f.q1}, {"Q2", f.q2}, {"Q3", f.q3}, {"Q4", f.q4}, {"core", f.core}, {"K", f.k},
                   {"W", f.w}, {"C_diag", column_matrix(f.cs.cos)}, {"S_diag", column_matrix(f.cs.sin)}};
  } else {
    const EvenCanonicalForm f = even_canonical_decompose(pair, tol);
    rep.verdict = to_string(f.classification);
    rep.metrics["r"] = f.rank_s;
    rep.metrics["rank_S"] = f.rank_s;
    rep.metrics["reconstruction_residual"] = (f.assembled() - pair.ab()).norm();
    rep.metrics["w_unitarity_residual"] = unitarity_residual(f.w);
    rep.factors = {{"U", f.u},   {"V1", f.v1}, {"U1", f.u1}, {"U2", f.u2},
                   {"V2", f.v2}, {"Z", f.z},   {"W", f.w},   {"core", f.core()},
                   {"C_diag", column_matrix(f.cos)}, {"S_diag", column_matrix(f.sin)}};
  }
  write_factors(out, rep);
}

inline void run_classify(Report& rep, const BoundaryPair& pair, const Tolerances& tol) {
  const Classification c = classify(pair, tol);
  rep.verdict = to_string(c.type);
  rep.metrics["m"] = pair.spec.m();
  rep.metrics["n"] = pair.spec.n();
  rep.metrics["r"] = c.r;
  rep.metrics["rank_A"] = c.rank_a;
  rep.metrics["rank_B"] = c.rank_b;
  rep.metrics["numerical_rank_A"] = numerical_rank(pair.a, tol);
  rep.metrics["numerical_rank_B"] = numerical_rank(pair.b, tol);
}

inline std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> orders;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      orders.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad order list entry '" + item + "'");
    }
  }
  if (orders.empty()) throw Error(ErrorCode::ParseError, "empty order list");
  return orders;
}

}  // namespace detail

/// Parses and runs one command. Never throws; failures map to exit codes.
/// `args` excludes the program name.
inline CommandOutcome run_command(const std::vector<std::string>& args) {
  CommandOutcome outcome;
  Report& rep = outcome.report;

  CLI::App app{"Canonical forms of self-adjoint boundary conditions", "bccanon"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  std::optional<double> tol_flag;
  std::string out_dir;
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--tol", tol_flag, "Residual tolerance (residual_abs)");
  app.add_option("--out", out_dir, "Output directory");

  std::vector<std::string> pair_files;
  auto* check = app.add_subcommand("check", "Test the self-adjointness criterion");
  auto* canon = app.add_subcommand("canon", "Write the canonical factors");
  auto* cls = app.add_subcommand("classify", "Classify the boundary conditions");
  for (auto* sub : {check, canon, cls}) {
    sub->add_option("files", pair_files, "A.json B.json")->required()->expected(2);
  }

  int order = 0;
  std::uint64_t seed = 0;
  std::optional<int> unit_cosines;
  auto* gen = app.add_subcommand("generate", "Write a random self-adjoint pair");
  gen->add_option("--order", order, "Matrix size m")->required();
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--unit-cosines", unit_cosines, "Number of unit cosines k in [0, n]");

  std::string orders_text = "3,5,7,9";
  int trials = 20;
  auto* self = app.add_subcommand("selftest", "Run the invariant suite");
  self->add_option("--orders", orders_text, "Comma-separated sizes");
  self->add_option("--trials", trials, "Trials per size");
  self->add_option("--seed", seed, "Base seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    outcome.message = app.help();
    return outcome;
  } catch (const CLI::ParseError& e) {
    rep.command = app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
    rep.verdict = "error";
    outcome.message = std::string(e.what()) + "\n" + app.help();
    outcome.exit_code = kExitInput;
    return outcome;
  }

  outcome.format = format == "json" ? ReportFormat::Json : ReportFormat::Text;
  const CLI::App* sub = app.get_subcommands().front();
  rep.command = sub->get_name();
  rep.inputs = pair_files;

  try {
    const Tolerances tol = detail::tolerances_from(tol_flag);
    if (sub == check) {
      detail::run_check(rep, outcome.exit_code, detail::load_pair(pair_files[0], pair_files[1]), tol);
    } else if (sub == canon) {
      detail::run_canon(rep, detail::load_pair(pair_files[0], pair_files[1]), tol,
                        out_dir.empty() ? "canon_out" : out_dir);
    } else if (sub == cls) {
      detail::run_classify(rep, detail::load_pair(pair_files[0], pair_files[1]), tol);
    } else if (sub == gen) {
      const OrderSpec spec = OrderSpec::from_size(order);
      const BoundaryPair pair = generate_random_pair(spec, seed, unit_cosines, tol);
      const std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
      std::filesystem::create_directories(dir);
      write_matrix_file((dir / "A.json").string(), pair.a);
      write_matrix_file((dir / "B.json").string(), pair.b);
      rep.verdict = "generated";
      rep.metrics["m"] = spec.m();
      rep.metrics["n"] = spec.n();
      rep.metrics["seed"] = seed;
      if (unit_cosines) rep.metrics["unit_cosines"] = *unit_cosines;
      rep.metrics["gram_residual"] = check_self_adjoint(pair, tol).gram_residual;
      rep.inputs = {(dir / "A.json").string(), (dir / "B.json").string()};
    } else {
      const SelftestSummary s = run_selftest(detail::parse_orders(orders_text), trials, seed, tol);
      rep.verdict = s.passed() ? "pass" : "fail";
      rep.metrics["trials"] = trials;
      rep.metrics["checks"] = s.checks();
      rep.metrics["failures"] = s.failures();
      for (const auto& [name, t] : s.tallies) {
        rep.metrics[name + ".failures"] = t.failures;
        if (t.worst > 0.0) rep.metrics[name + ".worst"] = t.worst;
      }
      outcome.exit_code = s.passed() ? kExitOk : kExitCriterion;
    }
  } catch (const Error& e) {
    rep.verdict = "error";
    outcome.message = std::string(to_string(e.code())) + ": " + e.what();
    outcome.exit_code = exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    rep.verdict = "error";
    outcome.message = e.what();
    outcome.exit_code = kExitInput;
  }
  return outcome;
}

}  // namespace bccanon
