// jsrec: joint-sparse recovery toolbox.
//
// Subcommands cover the single solvers (solve, l12), the sequential
// pipelines (boost, rembo), the combinatorial table (cnd), exhaustive face
// counting (facecount), and the experiment harness (experiment).
//
// Exit codes: 0 success/recovered, 1 failure to recover, 2 usage or config
// error, 3 numeric failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jsrec/analysis.hpp"
#include "jsrec/bp.hpp"
#include "jsrec/combinatorics.hpp"
#include "jsrec/errors.hpp"
#include "jsrec/experiment.hpp"
#include "jsrec/matrix.hpp"
#include "jsrec/mmv.hpp"
#include "jsrec/recover.hpp"
#include "jsrec/rng.hpp"

namespace {

constexpr int kExitRecovered = 0;
constexpr int kExitNotRecovered = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

jsrec::SupportSet parse_support(const std::string& csv, int ambient) {
  std::vector<int> idx;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t next = csv.find(',', pos);
    if (next == std::string::npos) next = csv.size();
    idx.push_back(std::stoi(csv.substr(pos, next - pos)));
    pos = next + 1;
  }
  return jsrec::SupportSet::make(std::move(idx), ambient);
}

void print_report(const jsrec::SolveReport& rep) {
  std::printf("status: %s\n", jsrec::to_string(rep.status).c_str());
  std::printf("objective: %.17g\n", rep.objective);
  std::printf("primal_residual: %.17g\n", rep.primal_residual);
  std::printf("duality_gap: %.17g\n", rep.duality_gap);
  std::printf("iterations: %d\n", rep.iterations);
}

int status_exit(jsrec::SolveStatus s) {
  switch (s) {
    case jsrec::SolveStatus::Optimal: return kExitRecovered;
    case jsrec::SolveStatus::Infeasible:
    case jsrec::SolveStatus::Unbounded:
    case jsrec::SolveStatus::MaxIter: return kExitNotRecovered;
    case jsrec::SolveStatus::NumericFailure: return kExitNumeric;
  }
  return kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint-sparse recovery toolbox"};
  app.require_subcommand(1);

  std::string matrix_path, rhs_path, out_path, support_csv, config_path;
  int max_iter = 1000;
  std::uint64_t seed = 1;
  std::optional<int> support_override;

  auto* solve = app.add_subcommand("solve", "basis pursuit: min ||x||_1 s.t. Ax=b");
  solve->add_option("--matrix", matrix_path, "matrix CSV file")->required();
  solve->add_option("--rhs", rhs_path, "right-hand side CSV (m x 1)")->required();
  solve->add_option("--out", out_path, "write the solution as CSV");

  auto* l12 = app.add_subcommand("l12", "row-norm sum: min ||X||_{1,2} s.t. AX=B");
  l12->add_option("--matrix", matrix_path, "matrix CSV file")->required();
  l12->add_option("--rhs", rhs_path, "observation CSV (m x r)")->required();
  l12->add_option("--out", out_path, "write the solution as CSV");

  auto* boost = app.add_subcommand("boost", "boosted column-wise recovery");
  boost->add_option("--matrix", matrix_path)->required();
  boost->add_option("--rhs", rhs_path)->required();
  boost->add_option("--out", out_path);
  boost->add_option("--threshold", support_override, "support size threshold override");

  auto* rembo = app.add_subcommand("rembo", "random-weight reduction to single vectors");
  rembo->add_option("--matrix", matrix_path)->required();
  rembo->add_option("--rhs", rhs_path)->required();
  rembo->add_option("--max-iter", max_iter, "weight draws before giving up");
  rembo->add_option("--seed", seed, "weight generator seed");
  rembo->add_option("--out", out_path);
  rembo->add_option("--threshold", support_override);

  int cnd_n = 1, cnd_d = 1;
  auto* cnd_cmd = app.add_subcommand("cnd", "orthant intersection count C(n,d)");
  cnd_cmd->add_option("n", cnd_n)->required();
  cnd_cmd->add_option("d", cnd_d)->required();

  auto* facecount = app.add_subcommand("facecount", "exhaustive per-pattern recovery census");
  facecount->add_option("--matrix", matrix_path)->required();
  facecount->add_option("--support", support_csv, "comma-separated 0-based indices")
      ->required();

  auto* experiment = app.add_subcommand("experiment", "run a JSON-configured experiment");
  experiment->add_option("config", config_path, "config JSON path")->required();

  auto* coherence = app.add_subcommand("coherence", "extremal column coherence of a matrix");
  coherence->add_option("--matrix", matrix_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (solve->parsed()) {
      const auto A = jsrec::read_matrix_csv(matrix_path);
      const auto b = jsrec::read_matrix_csv(rhs_path);
      const auto rep = jsrec::solve_bp(A, b.column(0));
      print_report(rep);
      if (!out_path.empty() && !rep.x.empty())
        jsrec::write_matrix_csv(jsrec::DenseMatrix::from_column(rep.x), out_path);
      return status_exit(rep.status);
    }
    if (l12->parsed()) {
      const auto A = jsrec::read_matrix_csv(matrix_path);
      const auto B = jsrec::read_matrix_csv(rhs_path);
      const auto rep = jsrec::solve_l12(A, B);
      std::printf("status: %s\n", jsrec::to_string(rep.status).c_str());
      std::printf("objective: %.17g\n", rep.objective);
      std::printf("primal_residual: %.17g\n", rep.primal_residual);
      std::printf("gap: %.17g\n", rep.gap);
      std::printf("iterations: %d\n", rep.iterations);
      if (!out_path.empty() && !rep.X.empty()) jsrec::write_matrix_csv(rep.X, out_path);
      return status_exit(rep.status);
    }
    if (boost->parsed() || rembo->parsed()) {
      const auto A = jsrec::read_matrix_csv(matrix_path);
      const auto B = jsrec::read_matrix_csv(rhs_path);
      jsrec::PipelineSettings settings;
      settings.support_override = support_override;
      jsrec::PipelineReport rep;
      if (boost->parsed()) {
        rep = jsrec::boosted_l1(A, B, settings);
      } else {
        jsrec::Rng rng(seed, 0);
        rep = jsrec::rembo_l1(A, B, max_iter, rng, settings);
      }
      std::printf("recovered: %s\n", rep.recovered ? "yes" : "no");
      std::printf("iterations_used: %d\n", rep.iterations_used);
      if (rep.recovered) {
        std::printf("support_size: %d\n", rep.support.size());
        if (!out_path.empty()) jsrec::write_matrix_csv(rep.X, out_path);
      }
      return rep.recovered ? kExitRecovered : kExitNotRecovered;
    }
    if (cnd_cmd->parsed()) {
      std::printf("%s\n", jsrec::cnd(cnd_n, cnd_d).to_string().c_str());
      return kExitRecovered;
    }
    if (facecount->parsed()) {
      const auto A = jsrec::read_matrix_csv(matrix_path);
      const auto I = parse_support(support_csv, A.cols());
      const auto fc = jsrec::face_count(A, I);
      jsrec::write_face_count_csv(fc, std::cout);
      std::printf("# surviving %s of %s, P_l1 = %.17g\n", fc.surviving.to_string().c_str(),
                  fc.total.to_string().c_str(), jsrec::prob_l1(fc));
      return fc.solver_failures == 0 ? kExitRecovered : kExitNumeric;
    }
    if (experiment->parsed()) {
      const auto cfg = jsrec::ExperimentConfig::from_json_file(config_path);
      const auto outcome = jsrec::run_experiment(cfg);
      std::printf("rows: %zu\n", outcome.rows.size());
      std::printf("solver_calls: %lld\n", outcome.solver_calls);
      std::printf("solver_failures: %lld\n", outcome.solver_failures);
      std::printf("output_dir: %s\n", cfg.output_dir.c_str());
      return outcome.failure_rate_exceeded ? kExitNumeric : kExitRecovered;
    }
    if (coherence->parsed()) {
      const auto X = jsrec::read_matrix_csv(matrix_path);
      const auto c = jsrec::mutual_coherence(X);
      std::printf("min_pairwise: %.17g\n", c.min_pairwise);
      std::printf("max_pairwise: %.17g\n", c.max_pairwise);
      return kExitRecovered;
    }
  } catch (const jsrec::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == jsrec::ErrorCode::InvalidArgument ||
                   e.code() == jsrec::ErrorCode::IoError ||
                   e.code() == jsrec::ErrorCode::DimensionMismatch
               ? kExitUsage
               : kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitUsage;
}
