#include "jsrec/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eigen_util.hpp"
#include "jsrec/combinatorics.hpp"
#include "jsrec/errors.hpp"
#include "jsrec/parallel.hpp"
#include "jsrec/plot.hpp"
#include "jsrec/recover.hpp"

namespace jsrec {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ci_halfwidth(double p, long long trials) {
  return 1.96 * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
}

// Stream ids: one substream per (kind, s, r, trial), plus low-numbered
// streams for the fixed matrix and supports. Deterministic no matter how
// trials are scheduled across threads.
std::uint64_t trial_stream(int kind_tag, int s, int r, std::int64_t t) {
  return (static_cast<std::uint64_t>(kind_tag) << 56) ^
         (static_cast<std::uint64_t>(s) << 40) ^
         (static_cast<std::uint64_t>(r) << 24) ^ static_cast<std::uint64_t>(t + 1);
}

MmvSettings mmv_from(const SolverSettings& tol) {
  MmvSettings s;
  s.bp = tol;
  s.stop_tol = tol.feas_tol;
  s.gap_tol = tol.gap_tol;
  s.recovery_tol = tol.recovery_tol;
  s.zero_tol = tol.zero_tol;
  return s;
}

// Coefficients on a fixed support, entries i.i.d. normal, columns in order.
DenseMatrix random_on_support(int n, const SupportSet& I, int r, Rng& rng) {
  DenseMatrix x0(n, r);
  for (int k = 0; k < r; ++k)
    for (int j : I.indices()) x0(j, k) = rng.next_normal();
  return x0;
}

// Canonical pattern code of column `col` of X0 restricted to I; false when
// an entry sits inside the zero tolerance.
bool column_code(const DenseMatrix& X0, const SupportSet& I, int col, double zero_tol,
                 std::uint64_t* code) {
  std::uint64_t c = 0;
  for (int k = 0; k < I.size(); ++k) {
    const double v = X0(I[k], col);
    if (std::abs(v) <= zero_tol) return false;
    if (v < 0) c |= std::uint64_t{1} << k;
  }
  const std::uint64_t mask =
      I.size() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << I.size()) - 1;
  if (c & 1) c = ~c & mask;
  *code = c;
  return true;
}

bool is_solver_failure(SolveStatus s) {
  return s == SolveStatus::NumericFailure || s == SolveStatus::Infeasible;
}

struct KindOutput {
  std::vector<ResultRow> rows;
  std::vector<PlotSeries> series;
  AxesSpec axes;
  std::string custom_svg;  // used instead of the line plot when nonempty
  long long calls = 0;
  long long failures = 0;
};

// ---------------------------------------------------------------------------
// smv_sweep: single-vector recovery rate against sparsity.

KindOutput run_smv_sweep(const ExperimentConfig& cfg) {
  KindOutput out;
  Rng arng(cfg.seed, 0);
  const DenseMatrix A = gaussian_matrix(cfg.m, cfg.n, arng);
  const auto a = as_eigen(A);

  PlotSeries curve{"l1", {}};
  for (int s : cfg.s_values) {
    std::vector<char> rec(cfg.trials, 0), fail(cfg.trials, 0);
    parallel_for(cfg.trials, [&](std::int64_t t) {
      Rng rng(cfg.seed, trial_stream(1, s, 1, t));
      const SupportSet I = SupportSet::random(s, cfg.n, rng);
      const DenseMatrix x0 = random_on_support(cfg.n, I, 1, rng);
      const Eigen::VectorXd b = a * as_eigen(x0).col(0);
      const SolveReport rep = solve_bp(A, to_vector(b), cfg.tolerances);
      if (is_solver_failure(rep.status)) fail[t] = 1;
      rec[t] = rep.status == SolveStatus::Optimal &&
               norm_inf_diff(rep.x, x0.column(0)) <= cfg.tolerances.recovery_tol;
    });
    out.calls += cfg.trials;
    out.failures += std::count(fail.begin(), fail.end(), 1);
    const double p =
        static_cast<double>(std::count(rec.begin(), rec.end(), 1)) / cfg.trials;
    ResultRow row;
    row.add("method", "l1");
    row.add("s", static_cast<long long>(s));
    row.add("r", 1LL);
    row.add("empirical_rate", p);
    row.add("trials", static_cast<long long>(cfg.trials));
    row.add("ci_halfwidth", ci_halfwidth(p, cfg.trials));
    out.rows.push_back(std::move(row));
    curve.points.emplace_back(s, p);
  }
  out.series.push_back(std::move(curve));
  out.axes = {"Basis pursuit recovery rate", "row sparsity s", "recovery rate"};
  return out;
}

// ---------------------------------------------------------------------------
// l11_vs_l12: column-wise l1 against the row-norm sum.

KindOutput run_l11_vs_l12(const ExperimentConfig& cfg) {
  KindOutput out;
  Rng arng(cfg.seed, 0);
  const DenseMatrix A = gaussian_matrix(cfg.m, cfg.n, arng);
  const auto a = as_eigen(A);
  const MmvSettings mmv = mmv_from(cfg.tolerances);

  for (int r : cfg.r_values) {
    PlotSeries c11{"l11 r=" + std::to_string(r), {}};
    PlotSeries c12{"l12 r=" + std::to_string(r), {}};
    for (int s : cfg.s_values) {
      std::vector<char> rec11(cfg.trials, 0), rec12(cfg.trials, 0);
      std::vector<int> fails(cfg.trials, 0);
      parallel_for(cfg.trials, [&](std::int64_t t) {
        Rng rng(cfg.seed, trial_stream(2, s, r, t));
        const SupportSet I = SupportSet::random(s, cfg.n, rng);
        const DenseMatrix x0 = random_on_support(cfg.n, I, r, rng);
        const DenseMatrix B = to_matrix(a * as_eigen(x0));
        const MmvSolveReport rep11 = solve_l11(A, B, mmv);
        if (is_solver_failure(rep11.status)) ++fails[t];
        rec11[t] = rep11.status == SolveStatus::Optimal &&
                   rep11.X.max_abs_diff(x0) <= mmv.recovery_tol;
        const MmvSolveReport rep12 = solve_l12(A, B, mmv);
        if (is_solver_failure(rep12.status)) ++fails[t];
        rec12[t] = rep12.status == SolveStatus::Optimal &&
                   rep12.X.max_abs_diff(x0) <= mmv.recovery_tol;
      });
      out.calls += static_cast<long long>(cfg.trials) * (r + 1);
      for (int f : fails) out.failures += f;
      const double p11 =
          static_cast<double>(std::count(rec11.begin(), rec11.end(), 1)) / cfg.trials;
      const double p12 =
          static_cast<double>(std::count(rec12.begin(), rec12.end(), 1)) / cfg.trials;
      for (const auto& [method, p] : {std::pair{"l11", p11}, std::pair{"l12", p12}}) {
        ResultRow row;
        row.add("method", method);
        row.add("s", static_cast<long long>(s));
        row.add("r", static_cast<long long>(r));
        row.add("empirical_rate", p);
        row.add("trials", static_cast<long long>(cfg.trials));
        row.add("ci_halfwidth", ci_halfwidth(p, cfg.trials));
        out.rows.push_back(std::move(row));
      }
      c11.points.emplace_back(s, p11);
      c12.points.emplace_back(s, p12);
    }
    out.series.push_back(std::move(c12));
    out.series.push_back(std::move(c11));
  }
  out.axes = {"Row-norm-sum vs column-wise recovery", "row sparsity s", "recovery rate"};
  return out;
}

// ---------------------------------------------------------------------------
// boosted: first-success column scan against the face-count model. Also
// reports the plain column-wise rate, which decays as p^r.

KindOutput run_boosted(const ExperimentConfig& cfg) {
  KindOutput out;
  Rng arng(cfg.seed, 0);
  const DenseMatrix A = gaussian_matrix(cfg.m, cfg.n, arng);
  const auto a = as_eigen(A);
  const MmvSettings mmv = mmv_from(cfg.tolerances);
  PipelineSettings pipe;
  pipe.bp = cfg.tolerances;

  for (int s : cfg.s_values) {
    Rng srng(cfg.seed, trial_stream(3, s, 0, -1));
    const SupportSet I = SupportSet::random(s, cfg.n, srng);
    const FaceCount fc = face_count(A, I, cfg.tolerances);
    out.calls += std::int64_t{1} << (s - 1);
    out.failures += fc.solver_failures;
    const double p = prob_l1(fc);

    PlotSeries emp{"s=" + std::to_string(s) + " boosted", {}};
    PlotSeries mod{"s=" + std::to_string(s) + " model", {}};
    for (int r : cfg.r_values) {
      std::vector<char> boosted_rec(cfg.trials, 0), l11_rec(cfg.trials, 0);
      std::vector<int> fails(cfg.trials, 0), calls(cfg.trials, 0);
      parallel_for(cfg.trials, [&](std::int64_t t) {
        Rng rng(cfg.seed, trial_stream(3, s, r, t));
        const DenseMatrix x0 = random_on_support(cfg.n, I, r, rng);
        if (cfg.use_face_cache) {
          bool any = false, all = true;
          for (int k = 0; k < r; ++k) {
            std::uint64_t code = 0;
            const bool ok = column_code(x0, I, k, cfg.tolerances.zero_tol, &code);
            const bool hit = ok && fc.recovered(code);
            any = any || hit;
            all = all && hit;
          }
          boosted_rec[t] = any;
          l11_rec[t] = all;
        } else {
          const DenseMatrix B = to_matrix(a * as_eigen(x0));
          const PipelineReport rep = boosted_l1(A, B, pipe);
          boosted_rec[t] =
              rep.recovered && rep.X.max_abs_diff(x0) <= cfg.tolerances.recovery_tol;
          const MmvSolveReport rep11 = solve_l11(A, B, mmv);
          if (is_solver_failure(rep11.status)) ++fails[t];
          l11_rec[t] = rep11.status == SolveStatus::Optimal &&
                       rep11.X.max_abs_diff(x0) <= mmv.recovery_tol;
          calls[t] = 2 * r;
        }
      });
      for (int f : fails) out.failures += f;
      for (int c : calls) out.calls += c;
      const double pb = static_cast<double>(
                            std::count(boosted_rec.begin(), boosted_rec.end(), 1)) /
                        cfg.trials;
      const double p11 =
          static_cast<double>(std::count(l11_rec.begin(), l11_rec.end(), 1)) /
          cfg.trials;
      ResultRow rb;
      rb.add("method", "boosted");
      rb.add("s", static_cast<long long>(s));
      rb.add("r", static_cast<long long>(r));
      rb.add("empirical_rate", pb);
      rb.add("model_rate", prob_boosted(p, r));
      rb.add("trials", static_cast<long long>(cfg.trials));
      rb.add("ci_halfwidth", ci_halfwidth(pb, cfg.trials));
      out.rows.push_back(std::move(rb));
      ResultRow r11;
      r11.add("method", "l11");
      r11.add("s", static_cast<long long>(s));
      r11.add("r", static_cast<long long>(r));
      r11.add("empirical_rate", p11);
      r11.add("model_rate", prob_l11(p, r));
      r11.add("trials", static_cast<long long>(cfg.trials));
      r11.add("ci_halfwidth", ci_halfwidth(p11, cfg.trials));
      out.rows.push_back(std::move(r11));
      emp.points.emplace_back(r, pb);
      mod.points.emplace_back(r, prob_boosted(p, r));
    }
    out.series.push_back(std::move(emp));
    out.series.push_back(std::move(mod));
  }
  out.axes = {"Boosted first-success recovery", "observations r", "recovery rate"};
  return out;
}

// ---------------------------------------------------------------------------
// rembo: random weighted combinations against the elimination model.

KindOutput run_rembo(const ExperimentConfig& cfg) {
  KindOutput out;
  Rng arng(cfg.seed, 0);
  const DenseMatrix A = gaussian_matrix(cfg.m, cfg.n, arng);
  const auto a = as_eigen(A);
  PipelineSettings pipe;
  pipe.bp = cfg.tolerances;

  for (int s : cfg.s_values) {
    Rng srng(cfg.seed, trial_stream(4, s, 0, -1));
    const SupportSet I = SupportSet::random(s, cfg.n, srng);
    const FaceCount fc = face_count(A, I, cfg.tolerances);
    out.calls += std::int64_t{1} << (s - 1);
    out.failures += fc.solver_failures;

    PlotSeries emp{"s=" + std::to_string(s) + " rembo", {}};
    PlotSeries mod{"s=" + std::to_string(s) + " model", {}};
    for (int r : cfg.r_values) {
      std::vector<char> rec(cfg.trials, 0);
      std::vector<double> predicted(cfg.trials, 0.0);
      std::vector<int> fails(cfg.trials, 0), calls(cfg.trials, 0);
      parallel_for(cfg.trials, [&](std::int64_t t) {
        Rng rng(cfg.seed, trial_stream(4, s, r, t));
        const DenseMatrix x0 = random_on_support(cfg.n, I, r, rng);
        Rng wrng(cfg.seed,
                 trial_stream(4, s, r, t) ^ (std::uint64_t{1} << 63));
        // Nonzero rows of X0 only; the weighted pattern depends on nothing else.
        Eigen::MatrixXd xbar(s, r);
        for (int k = 0; k < s; ++k)
          for (int c = 0; c < r; ++c) xbar(k, c) = x0(I[k], c);

        if (cfg.use_face_cache) {
          std::set<std::uint64_t> seen;
          bool hit = false;
          Eigen::VectorXd w(r);
          for (int it = 0; it < cfg.max_iterations; ++it) {
            for (int c = 0; c < r; ++c) w[c] = wrng.next_normal();
            const Eigen::VectorXd y = xbar * w;
            std::uint64_t code = 0;
            bool ok = true;
            for (int k = 0; k < s; ++k)
              if (std::abs(y[k]) <= cfg.tolerances.zero_tol) { ok = false; break; }
            if (!ok) continue;
            for (int k = 0; k < s; ++k)
              if (y[k] < 0) code |= std::uint64_t{1} << k;
            const std::uint64_t mask = (std::uint64_t{1} << s) - 1;
            if (code & 1) code = ~code & mask;
            seen.insert(code);
            if (!hit && fc.recovered(code)) hit = true;
          }
          rec[t] = hit;
          predicted[t] = prob_rembo_terms(fc.surviving, fc.total,
                                          static_cast<std::uint64_t>(seen.size()));
        } else {
          const DenseMatrix B = to_matrix(a * as_eigen(x0));
          const PipelineReport rep = rembo_l1(A, B, cfg.max_iterations, wrng, pipe);
          rec[t] = rep.recovered &&
                   rep.X.max_abs_diff(x0) <= cfg.tolerances.recovery_tol;
          calls[t] = rep.iterations_used;
          predicted[t] = prob_rembo(fc.surviving, fc.total, s, r);
        }
      });
      for (int f : fails) out.failures += f;
      for (int c : calls) out.calls += c;
      const double pe =
          static_cast<double>(std::count(rec.begin(), rec.end(), 1)) / cfg.trials;
      double pm = 0.0;
      for (double v : predicted) pm += v;
      pm /= cfg.trials;
      ResultRow row;
      row.add("method", "rembo");
      row.add("s", static_cast<long long>(s));
      row.add("r", static_cast<long long>(r));
      row.add("empirical_rate", pe);
      row.add("model_rate", pm);
      row.add("model_full_rate", prob_rembo(fc.surviving, fc.total, s, r));
      row.add("trials", static_cast<long long>(cfg.trials));
      row.add("ci_halfwidth", ci_halfwidth(pe, cfg.trials));
      out.rows.push_back(std::move(row));
      emp.points.emplace_back(r, pe);
      mod.points.emplace_back(r, pm);
    }
    out.series.push_back(std::move(emp));
    out.series.push_back(std::move(mod));
  }
  out.axes = {"ReMBo recovery against the elimination model", "observations r",
              "recovery rate"};
  return out;
}

// ---------------------------------------------------------------------------
// triangles: weighted-simplex recovery regions.

std::string render_triangles_svg(const std::vector<ResultRow>& rows) {
  // Group rows by triple label, preserving order.
  std::vector<std::string> labels;
  for (const auto& row : rows) {
    const std::string& lab = row.cells[0].second;
    if (labels.empty() || labels.back() != lab) labels.push_back(lab);
  }
  const int panels = static_cast<int>(labels.size());
  const double pw = 260.0, ph = 250.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 "
     << fmt17(pw * panels) << " 280\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << fmt17(pw * panels)
     << "\" height=\"280\" fill=\"white\"/>\n";
  for (int p = 0; p < panels; ++p) {
    const double ox = pw * p + 20.0;
    const double x1 = ox, y1 = ph;             // corner 1 (w1 = 1)
    const double x2 = ox + 220.0, y2 = ph;     // corner 2
    const double x3 = ox + 110.0, y3 = ph - 190.0;
    os << "<polygon points=\"" << x1 << ',' << y1 << ' ' << x2 << ',' << y2 << ' '
       << x3 << ',' << y3 << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ox + 110.0 << "\" y=\"" << ph + 22.0
       << "\" text-anchor=\"middle\" font-size=\"13\">" << labels[p] << "</text>\n";
    for (const auto& row : rows) {
      if (row.cells[0].second != labels[p]) continue;
      const double w1 = std::stod(row.cells[1].second);
      const double w2 = std::stod(row.cells[2].second);
      const double w3 = std::stod(row.cells[3].second);
      const bool rec = row.cells[4].second == "1";
      const double x = w1 * x1 + w2 * x2 + w3 * x3;
      const double y = w1 * y1 + w2 * y2 + w3 * y3;
      os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"4\" fill=\""
         << (rec ? "#1a1a1a" : "#e8e8e8") << "\" stroke=\"#888888\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

KindOutput run_triangles_kind(const ExperimentConfig& cfg) {
  KindOutput out;
  Rng arng(cfg.seed, 0);
  const DenseMatrix A = gaussian_matrix(cfg.m, cfg.n, arng);
  const int s = cfg.s_values.front();

  Rng srng(cfg.seed, trial_stream(5, s, 0, -1));
  RecoverySplit split;
  bool found = false;
  for (int attempt = 0; attempt < 50 && !found; ++attempt) {
    const SupportSet I = SupportSet::random(s, cfg.n, srng);
    try {
      split = find_recovery_split(A, I, srng, 3, 3, 150, cfg.tolerances);
      SolveCounters counters;
      out.rows = run_triangles(A, I, split.s_vectors, split.f_vectors,
                               cfg.grid_density, mmv_from(cfg.tolerances), &counters);
      out.calls += counters.calls;
      out.failures += counters.failures;
      found = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SearchExhausted) throw;
    }
  }
  if (!found)
    fail(ErrorCode::SearchExhausted,
         "no support admitting both recoverable and unrecoverable vectors");
  out.custom_svg = render_triangles_svg(out.rows);
  return out;
}

// ---------------------------------------------------------------------------
// pattern_sampling: saturation of the reachable sign patterns.

KindOutput run_pattern_sampling(const ExperimentConfig& cfg) {
  KindOutput out;
  const int s = cfg.s_values.front();
  const int r = cfg.r_values.front();
  Rng xrng(cfg.seed, 1);
  const DenseMatrix xbar = gaussian_matrix(s, r, xrng);
  Rng wrng(cfg.seed, 2);
  const PatternStats stats = sample_sign_patterns(xbar, cfg.trials, wrng);

  for (const auto& [code, count] : stats.frequency) {
    std::string pat(static_cast<std::size_t>(s), '+');
    for (int k = 0; k < s; ++k)
      if ((code >> k) & 1) pat[static_cast<std::size_t>(k)] = '-';
    ResultRow row;
    row.add("pattern", pat);
    row.add("count", count);
    row.add("first_seen", stats.first_seen.at(code));
    out.rows.push_back(std::move(row));
  }

  PlotSeries curve{"unique pairs", {}};
  for (const auto& [t, u] : stats.saturation_series())
    curve.points.emplace_back(static_cast<double>(t), static_cast<double>(u));
  const double bound = cnd(s, r).to_double() / 2.0;
  PlotSeries cap{"C(s,r)/2", {{1.0, bound}, {static_cast<double>(stats.trials), bound}}};
  out.series.push_back(std::move(curve));
  out.series.push_back(std::move(cap));
  out.axes = {"Unique sign-pattern pairs", "trial", "unique pairs"};
  return out;
}

// ---------------------------------------------------------------------------
// cnd_table: exact orthant-intersection counts.

KindOutput run_cnd_table(const ExperimentConfig& cfg) {
  KindOutput out;
  for (int n = 1; n <= cfg.n_max; ++n)
    for (int d = 1; d <= cfg.d_max; ++d) {
      ResultRow row;
      row.add("n", static_cast<long long>(n));
      row.add("d", static_cast<long long>(d));
      row.add("cnd", cnd(n, d).to_string());
      out.rows.push_back(std::move(row));
    }
  for (int d = 1; d <= std::min(4, cfg.d_max); ++d) {
    PlotSeries series{"d=" + std::to_string(d), {}};
    for (int n = 1; n <= cfg.n_max; ++n)
      series.points.emplace_back(n, cnd(n, d).to_double());
    out.series.push_back(std::move(series));
  }
  out.axes = {"Orthant intersection counts", "n", "C(n,d)"};
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<ResultRow> run_triangles(const DenseMatrix& A, const SupportSet& I,
                                     const std::vector<std::vector<double>>& s_vectors,
                                     const std::vector<std::vector<double>>& f_vectors,
                                     int grid_density, const MmvSettings& settings,
                                     SolveCounters* counters) {
  if (grid_density < 2) fail(ErrorCode::InvalidArgument, "grid_density must be >= 2");
  const int n = A.cols();
  const auto check_support = [&](const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != n)
      fail(ErrorCode::DimensionMismatch, "corner vector length");
    for (int j = 0; j < n; ++j) {
      const bool on = I.contains(j);
      if (!on && v[j] != 0.0)
        fail(ErrorCode::InvalidArgument, "corner vector leaves the support");
      if (on && std::abs(v[j]) <= settings.zero_tol)
        fail(ErrorCode::InvalidArgument, "corner vector vanishes on the support");
    }
  };
  for (const auto& v : s_vectors) check_support(v);
  for (const auto& v : f_vectors) check_support(v);

  // Triples from all-recoverable corners through mixed to all-unrecoverable.
  struct Triple {
    std::string label;
    const std::vector<double>* v[3];
  };
  std::vector<Triple> triples;
  if (s_vectors.size() >= 3)
    triples.push_back({"s1+s2+s3", {&s_vectors[0], &s_vectors[1], &s_vectors[2]}});
  if (s_vectors.size() >= 2 && !f_vectors.empty())
    triples.push_back({"s1+s2+f1", {&s_vectors[0], &s_vectors[1], &f_vectors[0]}});
  if (!s_vectors.empty() && f_vectors.size() >= 2)
    triples.push_back({"s1+f1+f2", {&s_vectors[0], &f_vectors[0], &f_vectors[1]}});
  if (f_vectors.size() >= 3)
    triples.push_back({"f1+f2+f3", {&f_vectors[0], &f_vectors[1], &f_vectors[2]}});
  if (triples.empty())
    fail(ErrorCode::InvalidArgument, "need at least three corner vectors");

  const auto a = as_eigen(A);
  std::vector<ResultRow> rows;
  for (const auto& triple : triples) {
    DenseMatrix x0(n, 3);
    for (int c = 0; c < 3; ++c)
      for (int j = 0; j < n; ++j) x0(j, c) = (*triple.v[c])[j];

    // Barycentric grid points with i+j+k = grid_density.
    std::vector<std::array<int, 3>> grid;
    for (int i = 0; i <= grid_density; ++i)
      for (int j = 0; j + i <= grid_density; ++j)
        grid.push_back({i, j, grid_density - i - j});

    std::vector<char> rec(grid.size(), 0), failed(grid.size(), 0);
    parallel_for(static_cast<std::int64_t>(grid.size()), [&](std::int64_t g) {
      const double w1 = static_cast<double>(grid[g][0]) / grid_density;
      const double w2 = static_cast<double>(grid[g][1]) / grid_density;
      const double w3 = static_cast<double>(grid[g][2]) / grid_density;
      DenseMatrix target(n, 3);
      for (int j = 0; j < n; ++j) {
        target(j, 0) = w1 * x0(j, 0);
        target(j, 1) = w2 * x0(j, 1);
        target(j, 2) = w3 * x0(j, 2);
      }
      const DenseMatrix B = to_matrix(a * as_eigen(target));
      const MmvSolveReport rep = solve_l12(A, B, settings);
      failed[g] = is_solver_failure(rep.status);
      rec[g] = rep.status == SolveStatus::Optimal &&
               rep.X.max_abs_diff(target) <= settings.recovery_tol;
    });
    if (counters) {
      counters->calls += static_cast<long long>(grid.size());
      for (char f : failed) counters->failures += f;
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
      ResultRow row;
      row.add("triple", triple.label);
      row.add("w1", static_cast<double>(grid[g][0]) / grid_density);
      row.add("w2", static_cast<double>(grid[g][1]) / grid_density);
      row.add("w3", static_cast<double>(grid[g][2]) / grid_density);
      row.add("recovered", static_cast<long long>(rec[g]));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

RecoverySplit find_recovery_split(const DenseMatrix& A, const SupportSet& I, Rng& rng,
                                  int want_s, int want_f, int budget,
                                  const SolverSettings& settings,
                                  bool require_certificate) {
  const int n = A.cols();
  const auto a = as_eigen(A);
  RecoverySplit split;
  for (int t = 0; t < budget; ++t) {
    if (static_cast<int>(split.s_vectors.size()) >= want_s &&
        static_cast<int>(split.f_vectors.size()) >= want_f)
      return split;
    std::vector<double> v(n, 0.0);
    for (int j : I.indices()) {
      double g = rng.next_normal();
      while (std::abs(g) < 1e-3) g = rng.next_normal();
      v[j] = g;
    }
    const Eigen::VectorXd b = a * as_eigen(v);
    const SolveReport rep = solve_bp(A, to_vector(b), settings);
    if (rep.status != SolveStatus::Optimal) continue;
    if (norm_inf_diff(rep.x, v) <= settings.recovery_tol) {
      if (static_cast<int>(split.s_vectors.size()) < want_s) {
        if (!require_certificate ||
            check_smv_certificate(A, v, rep.y, 1e-6, settings.zero_tol) ==
                CertificateResult::UniqueOptimal)
          split.s_vectors.push_back(v);
      }
    } else if (static_cast<int>(split.f_vectors.size()) < want_f) {
      split.f_vectors.push_back(v);
    }
  }
  if (static_cast<int>(split.s_vectors.size()) >= want_s &&
      static_cast<int>(split.f_vectors.size()) >= want_f)
    return split;
  fail(ErrorCode::SearchExhausted,
       "budget exhausted: found " + std::to_string(split.s_vectors.size()) + " of " +
           std::to_string(want_s) + " recoverable and " +
           std::to_string(split.f_vectors.size()) + " of " + std::to_string(want_f) +
           " unrecoverable vectors");
}

// ---------------------------------------------------------------------------
// Config parsing and serialization.

ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "smv_sweep") return ExperimentKind::SmvSweep;
  if (s == "l11_vs_l12") return ExperimentKind::L11VsL12;
  if (s == "boosted") return ExperimentKind::Boosted;
  if (s == "rembo") return ExperimentKind::Rembo;
  if (s == "triangles") return ExperimentKind::Triangles;
  if (s == "pattern_sampling") return ExperimentKind::PatternSampling;
  if (s == "cnd_table") return ExperimentKind::CndTable;
  fail(ErrorCode::InvalidArgument, "unknown experiment kind: " + s);
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::SmvSweep: return "smv_sweep";
    case ExperimentKind::L11VsL12: return "l11_vs_l12";
    case ExperimentKind::Boosted: return "boosted";
    case ExperimentKind::Rembo: return "rembo";
    case ExperimentKind::Triangles: return "triangles";
    case ExperimentKind::PatternSampling: return "pattern_sampling";
    case ExperimentKind::CndTable: return "cnd_table";
  }
  return "?";
}

void ResultRow::add(const std::string& key, double value) { add(key, fmt17(value)); }
void ResultRow::add(const std::string& key, long long value) {
  add(key, std::to_string(value));
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("config parse error: ") + e.what());
  }

  static const std::set<std::string> allowed = {
      "schema_version", "kind", "m", "n", "r_values", "s_values", "trials",
      "seed", "max_iterations", "grid_density", "n_max", "d_max",
      "use_face_cache", "output_dir", "tolerances"};
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key))
      fail(ErrorCode::InvalidArgument, "unknown config key: " + key);

  ExperimentConfig cfg;
  try {
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1)
      fail(ErrorCode::InvalidArgument, "config must declare schema_version 1");
    cfg.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("m")) cfg.m = j.at("m").get<int>();
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("r_values")) cfg.r_values = j.at("r_values").get<std::vector<int>>();
    if (j.contains("s_values")) cfg.s_values = j.at("s_values").get<std::vector<int>>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("max_iterations")) cfg.max_iterations = j.at("max_iterations").get<int>();
    if (j.contains("grid_density")) cfg.grid_density = j.at("grid_density").get<int>();
    if (j.contains("n_max")) cfg.n_max = j.at("n_max").get<int>();
    if (j.contains("d_max")) cfg.d_max = j.at("d_max").get<int>();
    if (j.contains("use_face_cache")) cfg.use_face_cache = j.at("use_face_cache").get<bool>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("tolerances")) {
      static const std::set<std::string> tol_keys = {"feas_tol", "gap_tol", "max_iter",
                                                     "recovery_tol", "zero_tol"};
      const auto& t = j.at("tolerances");
      for (const auto& [key, value] : t.items())
        if (!tol_keys.contains(key))
          fail(ErrorCode::InvalidArgument, "unknown tolerance key: " + key);
      if (t.contains("feas_tol")) cfg.tolerances.feas_tol = t.at("feas_tol").get<double>();
      if (t.contains("gap_tol")) cfg.tolerances.gap_tol = t.at("gap_tol").get<double>();
      if (t.contains("max_iter")) cfg.tolerances.max_iter = t.at("max_iter").get<int>();
      if (t.contains("recovery_tol"))
        cfg.tolerances.recovery_tol = t.at("recovery_tol").get<double>();
      if (t.contains("zero_tol")) cfg.tolerances.zero_tol = t.at("zero_tol").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("config field error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::IoError, "cannot open config: " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json_text() const {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["kind"] = to_string(kind);
  j["m"] = m;
  j["n"] = n;
  j["r_values"] = r_values;
  j["s_values"] = s_values;
  j["trials"] = trials;
  j["seed"] = seed;
  j["max_iterations"] = max_iterations;
  j["grid_density"] = grid_density;
  j["n_max"] = n_max;
  j["d_max"] = d_max;
  j["use_face_cache"] = use_face_cache;
  j["output_dir"] = output_dir;
  j["tolerances"] = {{"feas_tol", tolerances.feas_tol},
                     {"gap_tol", tolerances.gap_tol},
                     {"max_iter", tolerances.max_iter},
                     {"recovery_tol", tolerances.recovery_tol},
                     {"zero_tol", tolerances.zero_tol}};
  return j.dump(2) + "\n";
}

void ExperimentConfig::validate() const {
  if (m < 1 || n < 1) fail(ErrorCode::InvalidArgument, "m and n must be positive");
  if (trials < 1) fail(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (r_values.empty() || s_values.empty())
    fail(ErrorCode::InvalidArgument, "r_values and s_values must be nonempty");
  for (int r : r_values)
    if (r < 1) fail(ErrorCode::InvalidArgument, "r_values entries must be >= 1");
  for (int s : s_values)
    if (s < 1 || s > n)
      fail(ErrorCode::InvalidArgument, "s_values entries must lie in [1, n]");
  if (max_iterations < 1) fail(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
  if (grid_density < 2) fail(ErrorCode::InvalidArgument, "grid_density must be >= 2");
  if (n_max < 1 || d_max < 1)
    fail(ErrorCode::InvalidArgument, "n_max and d_max must be >= 1");
}

void write_rows_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
  if (rows.empty()) return;
  for (std::size_t k = 0; k < rows[0].cells.size(); ++k)
    os << (k ? "," : "") << rows[0].cells[k].first;
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.cells.size(); ++k)
      os << (k ? "," : "") << row.cells[k].second;
    os << '\n';
  }
}

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  config.validate();
  KindOutput out;
  switch (config.kind) {
    case ExperimentKind::SmvSweep: out = run_smv_sweep(config); break;
    case ExperimentKind::L11VsL12: out = run_l11_vs_l12(config); break;
    case ExperimentKind::Boosted: out = run_boosted(config); break;
    case ExperimentKind::Rembo: out = run_rembo(config); break;
    case ExperimentKind::Triangles: out = run_triangles_kind(config); break;
    case ExperimentKind::PatternSampling: out = run_pattern_sampling(config); break;
    case ExperimentKind::CndTable: out = run_cnd_table(config); break;
  }

  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / "results.csv", std::ios::binary);
    if (!os) fail(ErrorCode::IoError, "cannot write results.csv");
    write_rows_csv(out.rows, os);
  }
  {
    std::ofstream os(dir / "config.echo.json", std::ios::binary);
    if (!os) fail(ErrorCode::IoError, "cannot write config.echo.json");
    os << config.to_json_text();
  }
  if (!out.custom_svg.empty()) {
    std::ofstream os(dir / "plot.svg", std::ios::binary);
    if (!os) fail(ErrorCode::IoError, "cannot write plot.svg");
    os << out.custom_svg;
  } else if (!out.series.empty()) {
    emit_plot(out.series, out.axes, dir / "plot.svg");
  }

  ExperimentOutcome outcome;
  outcome.rows = std::move(out.rows);
  outcome.solver_calls = out.calls;
  outcome.solver_failures = out.failures;
  outcome.failure_rate_exceeded =
      out.calls > 0 && out.failures * 100 > out.calls;
  return outcome;
}

}  // namespace jsrec
