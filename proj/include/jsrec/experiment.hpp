#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "jsrec/analysis.hpp"
#include "jsrec/bp.hpp"
#include "jsrec/matrix.hpp"
#include "jsrec/mmv.hpp"
#include "jsrec/rng.hpp"
#include "jsrec/support.hpp"

namespace jsrec {

enum class ExperimentKind {
  SmvSweep,
  L11VsL12,
  Boosted,
  Rembo,
  Triangles,
  PatternSampling,
  CndTable,
};

ExperimentKind experiment_kind_from_string(const std::string& s);
std::string to_string(ExperimentKind k);

// Declarative experiment description. Parsed from JSON with a schema version
// field; unknown keys are rejected so a config echo always reproduces the run.
struct ExperimentConfig {
  int schema_version = 1;
  ExperimentKind kind = ExperimentKind::SmvSweep;
  int m = 20;
  int n = 60;
  std::vector<int> r_values{1};
  std::vector<int> s_values{1};
  int trials = 200;
  std::uint64_t seed = 1;
  int max_iterations = 1000;   // rembo weight budget
  int grid_density = 12;       // triangles barycentric grid
  int n_max = 12, d_max = 12;  // cnd_table ranges
  bool use_face_cache = true;  // consult face counts instead of re-solving
  std::string output_dir = "out";
  SolverSettings tolerances;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::filesystem::path& path);
  std::string to_json_text() const;  // canonical echo, stable key order

  void validate() const;
};

// One CSV record; cells are (column, value) with a fixed per-kind layout.
struct ResultRow {
  std::vector<std::pair<std::string, std::string>> cells;
  void add(const std::string& key, const std::string& value) { cells.emplace_back(key, value); }
  void add(const std::string& key, double value);
  void add(const std::string& key, long long value);
};

struct ExperimentOutcome {
  std::vector<ResultRow> rows;
  long long solver_calls = 0;
  long long solver_failures = 0;
  bool failure_rate_exceeded = false;  // failures > 1% of calls
};

// Runs the configured experiment and writes results.csv, config.echo.json and
// plot.svg into output_dir. Rows are also returned for in-process use.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

struct SolveCounters {
  long long calls = 0;
  long long failures = 0;
};

// Weighted-simplex scan: for every triple formed from the given vectors (all
// supported on I) and every barycentric grid weight W = diag(w1,w2,w3) with
// unit trace, attempts row-norm-sum recovery of X0*W from B = A*X0*W.
// Row layout: triple,w1,w2,w3,recovered.
std::vector<ResultRow> run_triangles(const DenseMatrix& A, const SupportSet& I,
                                     const std::vector<std::vector<double>>& s_vectors,
                                     const std::vector<std::vector<double>>& f_vectors,
                                     int grid_density, const MmvSettings& settings = {},
                                     SolveCounters* counters = nullptr);

struct RecoverySplit {
  std::vector<std::vector<double>> s_vectors;  // recovered individually
  std::vector<std::vector<double>> f_vectors;  // not recovered
};

// Draws random vectors on I and sorts them by individual basis-pursuit
// recovery until want_s + want_f examples are found (or the budget runs out,
// which raises SearchExhausted). With require_certificate the s-vectors must
// also carry a strict uniqueness certificate.
RecoverySplit find_recovery_split(const DenseMatrix& A, const SupportSet& I, Rng& rng,
                                  int want_s, int want_f, int budget,
                                  const SolverSettings& settings = {},
                                  bool require_certificate = false);

void write_rows_csv(const std::vector<ResultRow>& rows, std::ostream& os);

}  // namespace jsrec
