// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria with stated runtime budgets enforce them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "jsrec/analysis.hpp"
#include "jsrec/bigint.hpp"
#include "jsrec/bp.hpp"
#include "jsrec/combinatorics.hpp"
#include "jsrec/errors.hpp"
#include "jsrec/experiment.hpp"
#include "jsrec/matrix.hpp"
#include "jsrec/mmv.hpp"
#include "jsrec/recover.hpp"
#include "jsrec/rng.hpp"
#include "oracles.hpp"

using namespace jsrec;

namespace {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DenseMatrix multiply(const DenseMatrix& A, const DenseMatrix& X) {
  DenseMatrix B(A.rows(), X.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int c = 0; c < X.cols(); ++c) {
      double acc = 0.0;
      for (int j = 0; j < A.cols(); ++j) acc += A(i, j) * X(j, c);
      B(i, c) = acc;
    }
  return B;
}

DenseMatrix normalize_columns(DenseMatrix A) {
  for (int j = 0; j < A.cols(); ++j) {
    double nrm = 0.0;
    for (int i = 0; i < A.rows(); ++i) nrm += A(i, j) * A(i, j);
    nrm = std::sqrt(nrm);
    for (int i = 0; i < A.rows(); ++i) A(i, j) /= nrm;
  }
  return A;
}

std::uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * static_cast<std::uint64_t>(n - i) / (i + 1);
  return r;
}

// --------------------------------------------------------------------------
// 1. C(n,d) table: closed form == recurrence == implementation, plus the two
//    corollaries, in under a second.

CriterionResult criterion_cnd_table() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int kMax = 12;

  // Recurrence expansion, built independently of cnd().
  BigUint rec[kMax + 1][kMax + 1];
  for (int d = 1; d <= kMax; ++d) rec[1][d] = BigUint(2);
  for (int n = 2; n <= kMax; ++n) {
    rec[n][1] = BigUint(2);
    for (int d = 2; d <= kMax; ++d) rec[n][d] = rec[n - 1][d - 1] + rec[n - 1][d];
  }

  int mismatches = 0;
  for (int n = 1; n <= kMax; ++n)
    for (int d = 1; d <= kMax; ++d) {
      const BigUint v = cnd(n, d);
      if (v != rec[n][d]) ++mismatches;
      // Closed form with exact 64-bit binomials.
      std::uint64_t closed = 0;
      if (d >= n) {
        closed = std::uint64_t{1} << n;
      } else {
        for (int i = 0; i < d; ++i) closed += binomial_u64(n - 1, i);
        closed *= 2;
      }
      if (v.to_u64() != closed) ++mismatches;
    }
  for (int d = 1; d <= 6; ++d)
    if (cnd(2 * d, d) != BigUint::pow2(2 * d - 1)) ++mismatches;
  for (int n = 1; n <= kMax; ++n)
    for (int d = 1; d <= n; ++d) {
      BigUint sum = cnd(n, d) + cnd(n, n - d == 0 ? n : n - d);
      if (d < n && sum != BigUint::pow2(n)) ++mismatches;
      if (d == n && cnd(n, d) != BigUint::pow2(n)) ++mismatches;
    }

  const double secs = seconds_since(t0);
  CriterionResult res;
  res.pass = mismatches == 0 && secs < 1.0;
  res.detail = "mismatches=" + std::to_string(mismatches) +
               ", runtime=" + std::to_string(secs) + "s (budget 1s)";
  return res;
}

// --------------------------------------------------------------------------
// 2. solve_bp objective equals exhaustive vertex enumeration on 200 seeded
//    small instances, within 1e-8, in under 30 s.

CriterionResult criterion_solver_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  int violations = 0;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    Rng rng(5000 + t, 0);
    const int m = 2 + static_cast<int>(rng.next_below(3));  // 2..4
    const int n = m + 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(6 - m)));
    const DenseMatrix A = gaussian_matrix(m, n, rng);
    const int s = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(m)));
    std::vector<double> x0(n, 0.0);
    for (int k = 0; k < s; ++k) x0[k] = rng.next_normal();
    std::vector<double> b(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) b[i] += A(i, j) * x0[j];

    const SolveReport rep = solve_bp(A, b);
    const double oracle = testing::bp_objective_by_enumeration(A, b);
    const double err = std::abs(rep.objective - oracle);
    worst = std::max(worst, err);
    if (rep.status != SolveStatus::Optimal || err > 1e-8 * (1.0 + oracle)) ++violations;
  }
  const double secs = seconds_since(t0);
  CriterionResult res;
  res.pass = violations == 0 && secs < 30.0;
  res.detail = "violations=" + std::to_string(violations) +
               ", worst_err=" + std::to_string(worst) +
               ", runtime=" + std::to_string(secs) + "s (budget 30s)";
  return res;
}

// --------------------------------------------------------------------------
// 3. Certificate soundness: UniqueOptimal at (x0, dual) forces recovery.

CriterionResult criterion_certificate_soundness() {
  int violations = 0, certified = 0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(6000 + t, 0);
    const DenseMatrix A = gaussian_matrix(10, 30, rng);
    const int s = 1 + static_cast<int>(rng.next_below(3));
    const SupportSet I = SupportSet::random(s, 30, rng);
    std::vector<double> x0(30, 0.0);
    for (int j : I.indices()) x0[j] = rng.next_normal();
    std::vector<double> b(10, 0.0);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 30; ++j) b[i] += A(i, j) * x0[j];

    const SolveReport rep = solve_bp(A, b);
    if (rep.status != SolveStatus::Optimal) { ++violations; continue; }
    if (check_smv_certificate(A, x0, rep.y) == CertificateResult::UniqueOptimal) {
      ++certified;
      if (norm_inf_diff(rep.x, x0) > 1e-5) ++violations;
    }
  }
  CriterionResult res;
  res.pass = violations == 0 && certified > 0;
  res.detail = "violations=" + std::to_string(violations) +
               ", certified=" + std::to_string(certified) + "/100";
  return res;
}

// --------------------------------------------------------------------------
// 4. NSP holds exactly when every face survives.

CriterionResult criterion_nsp_equivalence() {
  int disagreements = 0, holds = 0;
  for (int t = 0; t < 50; ++t) {
    Rng rng(7000 + t, 0);
    const DenseMatrix A = gaussian_matrix(6, 15, rng);
    const int s = 1 + static_cast<int>(rng.next_below(3));
    const SupportSet I = SupportSet::random(s, 15, rng);
    const bool nsp = check_nsp_uniform(A, I).holds;
    const FaceCount fc = face_count(A, I);
    const bool uniform = fc.surviving == fc.total;
    if (nsp != uniform) ++disagreements;
    if (nsp) ++holds;
  }
  CriterionResult res;
  res.pass = disagreements == 0;
  res.detail = "disagreements=" + std::to_string(disagreements) +
               ", holds=" + std::to_string(holds) + "/50";
  return res;
}

// --------------------------------------------------------------------------
// 5+6. Boosted and column-wise rates against the face-count models on a
//      fixed 20x80 system, supports of size 8..10, r = 1..8, 200 trials.

struct BoostedOutcome {
  CriterionResult boosted;
  CriterionResult l11;
};

BoostedOutcome criterion_boosted_and_l11() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int kTrials = 200;
  constexpr std::uint64_t kSeed = 2020;

  Rng arng(kSeed, 0);
  const DenseMatrix A = gaussian_matrix(20, 80, arng);

  int cells = 0, boosted_within = 0, l11_within = 0;
  int monotone_breaks = 0;
  std::string ps;
  for (int s : {8, 9, 10}) {
    Rng srng(kSeed, 100 + s);
    const SupportSet I = SupportSet::random(s, 80, srng);
    const FaceCount fc = face_count(A, I);
    const double p = prob_l1(fc);
    ps += (ps.empty() ? "p=" : ",") + std::to_string(p).substr(0, 6);

    double prev_emp = 2.0, prev_sigma = 0.0;
    for (int r = 1; r <= 8; ++r) {
      int boost_hits = 0, l11_hits = 0;
      for (int t = 0; t < kTrials; ++t) {
        Rng rng(kSeed, (static_cast<std::uint64_t>(s) << 32) ^
                           (static_cast<std::uint64_t>(r) << 20) ^
                           static_cast<std::uint64_t>(t + 1));
        bool any = false, all = true;
        for (int k = 0; k < r; ++k) {
          std::uint64_t code = 0;
          bool ok = true;
          for (int q = 0; q < s; ++q) {
            const double v = rng.next_normal();
            if (std::abs(v) <= 1e-12) ok = false;
            if (v < 0) code |= std::uint64_t{1} << q;
          }
          const std::uint64_t mask = (std::uint64_t{1} << s) - 1;
          if (code & 1) code = ~code & mask;
          const bool hit = ok && fc.recovered(code);
          any = any || hit;
          all = all && hit;
        }
        boost_hits += any;
        l11_hits += all;
      }
      const double emp_boost = static_cast<double>(boost_hits) / kTrials;
      const double emp_l11 = static_cast<double>(l11_hits) / kTrials;
      const double model_boost = prob_boosted(p, r);
      const double model_l11 = prob_l11(p, r);
      const double sig_boost = std::sqrt(model_boost * (1.0 - model_boost) / kTrials);
      const double sig_l11 = std::sqrt(model_l11 * (1.0 - model_l11) / kTrials);
      ++cells;
      if (std::abs(emp_boost - model_boost) <= 3.0 * sig_boost + 1e-12) ++boosted_within;
      if (std::abs(emp_l11 - model_l11) <= 3.0 * sig_l11 + 1e-12) ++l11_within;

      const double sigma_emp = std::sqrt(emp_l11 * (1.0 - emp_l11) / kTrials);
      if (prev_emp < 1.5) {
        const double pooled = std::sqrt(sigma_emp * sigma_emp + prev_sigma * prev_sigma);
        if (emp_l11 > prev_emp + 2.0 * pooled + 1e-12) ++monotone_breaks;
      }
      prev_emp = emp_l11;
      prev_sigma = sigma_emp;
    }
  }
  const double secs = seconds_since(t0);

  BoostedOutcome out;
  out.boosted.pass = boosted_within * 10 >= cells * 9 && secs < 1200.0;
  out.boosted.detail = "within-3sigma cells=" + std::to_string(boosted_within) + "/" +
                       std::to_string(cells) + " (" + ps + ")" +
                       ", runtime=" + std::to_string(secs) + "s (budget 1200s)";
  out.l11.pass = l11_within * 10 >= cells * 9 && monotone_breaks == 0;
  out.l11.detail = "within-3sigma cells=" + std::to_string(l11_within) + "/" +
                   std::to_string(cells) +
                   ", monotone_breaks=" + std::to_string(monotone_breaks);
  return out;
}

// --------------------------------------------------------------------------
// 7. ReMBo with forced unit weights reproduces the boosted decisions.

CriterionResult criterion_rembo_reduction() {
  int mismatches = 0;
  for (int t = 0; t < 50; ++t) {
    Rng rng(8000 + t, 0);
    const DenseMatrix A = gaussian_matrix(10, 30, rng);
    const int s = 2 + static_cast<int>(rng.next_below(3));
    const int r = 1 + static_cast<int>(rng.next_below(4));
    const SupportSet I = SupportSet::random(s, 30, rng);
    DenseMatrix x0(30, r);
    for (int c = 0; c < r; ++c)
      for (int j : I.indices()) x0(j, c) = rng.next_normal();
    const DenseMatrix B = multiply(A, x0);

    PipelineSettings st;
    DenseMatrix weights(r, r);
    for (int k = 0; k < r; ++k) weights(k, k) = 1.0;
    st.forced_weights = weights;
    Rng unused(8000 + t, 99);
    const PipelineReport via_rembo = rembo_l1(A, B, r, unused, st);
    const PipelineReport via_boost = boosted_l1(A, B);

    bool same = via_rembo.recovered == via_boost.recovered &&
                via_rembo.iterations_used == via_boost.iterations_used;
    if (same && via_rembo.recovered)
      same = via_rembo.support.indices() == via_boost.support.indices() &&
             via_rembo.X.max_abs_diff(via_boost.X) < 1e-12;
    if (!same) ++mismatches;
  }
  CriterionResult res;
  res.pass = mismatches == 0;
  res.detail = "mismatches=" + std::to_string(mismatches) + "/50";
  return res;
}

// --------------------------------------------------------------------------
// 8. The two counterexample constructions, verified per instance.

CriterionResult criterion_counterexamples() {
  MmvSettings st;
  int diag_ok = 0;
  for (int seed = 0; seed < 10; ++seed) {
    Rng arng(9100 + seed, 0);
    const DenseMatrix A = normalize_columns(gaussian_matrix(10, 30, arng));
    Rng crng(9100 + seed, 1);
    const ProblemInstance inst = construct_diag_counterexample(A, 11, crng);
    const MmvSolveReport rep11 = solve_l11(inst.A, inst.B, st);
    const MmvSolveReport rep12 = solve_l12(inst.A, inst.B, st);
    const bool l11_recovers = rep11.status == SolveStatus::Optimal &&
                              rep11.X.max_abs_diff(inst.X0) <= 1e-5;
    const bool l12_fails = rep12.X.max_abs_diff(inst.X0) > 1e-5;
    if (l11_recovers && l12_fails) ++diag_ok;
  }

  int mixed_ok = 0, mixed_tried = 0;
  for (int size : {5, 7}) {
    for (int seed = 0; seed < 3; ++seed) {
      ++mixed_tried;
      Rng arng(9200 + seed, 0);
      const DenseMatrix A = gaussian_matrix(20, 60, arng);
      Rng srng(9200 + seed, 10 + size);
      bool done = false;
      for (int attempt = 0; attempt < 40 && !done; ++attempt) {
        const SupportSet I = SupportSet::random(size, 60, srng);
        try {
          // Quick admissibility probe before the certified search.
          find_recovery_split(A, I, srng, 1, 1, 60, st.bp, true);
          Rng crng(9200 + seed, 1000 + attempt);
          const MixedInstance mixed = construct_l12_succeeds_l11_fails(A, I, crng);
          const MmvSolveReport rep11 = solve_l11(A, mixed.instance.B, st);
          const MmvSolveReport rep12 = solve_l12(A, mixed.instance.B, st);
          const bool l11_fails = rep11.X.max_abs_diff(mixed.instance.X0) > 1e-5;
          const bool l12_recovers = rep12.status == SolveStatus::Optimal &&
                                    rep12.X.max_abs_diff(mixed.instance.X0) <= 1e-5;
          if (l11_fails && l12_recovers) {
            ++mixed_ok;
            done = true;
          }
        } catch (const Error& e) {
          if (e.code() != ErrorCode::SearchExhausted) throw;
        }
      }
    }
  }

  CriterionResult res;
  res.pass = diag_ok == 10 && mixed_ok == mixed_tried;
  res.detail = "diag=" + std::to_string(diag_ok) + "/10, mixed=" +
               std::to_string(mixed_ok) + "/" + std::to_string(mixed_tried);
  return res;
}

// --------------------------------------------------------------------------
// 9. Pattern-sampling saturation at desk scale.

CriterionResult criterion_pattern_saturation() {
  const auto t0 = std::chrono::steady_clock::now();

  Rng x4(3030, 0);
  const DenseMatrix xbar4 = gaussian_matrix(4, 2, x4);
  Rng w4(3030, 1);
  const PatternStats small = sample_sign_patterns(xbar4, 10000, w4);
  const bool small_ok = small.unique_pairs() == 4;  // cnd(4,2)/2

  Rng x10(3031, 0);
  const DenseMatrix xbar10 = gaussian_matrix(10, 5, x10);
  Rng w10(3031, 1);
  const PatternStats big = sample_sign_patterns(xbar10, 1000000, w10);
  const bool bound_ok = big.unique_pairs() <= 256;
  const bool band_ok = big.unique_pairs() >= 200;

  const double secs = seconds_since(t0);
  CriterionResult res;
  res.pass = small_ok && bound_ok && band_ok && secs < 120.0;
  res.detail = "small=" + std::to_string(small.unique_pairs()) + "/4, big=" +
               std::to_string(big.unique_pairs()) +
               " (bound 256, band >=200), runtime=" + std::to_string(secs) +
               "s (budget 120s)";
  return res;
}

// --------------------------------------------------------------------------
// 10. Wherever the empirical l12 and l11 rates separate, l12 leads.

CriterionResult criterion_l12_ordering() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::L11VsL12;
  cfg.m = 20;
  cfg.n = 60;
  cfg.r_values = {4};
  cfg.s_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  cfg.trials = 100;
  cfg.seed = 4040;
  cfg.output_dir =
      (std::filesystem::temp_directory_path() / "jsrec_acceptance" / "l11_vs_l12").string();
  const ExperimentOutcome out = run_experiment(cfg);

  int violations = 0, separated = 0;
  for (std::size_t i = 0; i + 1 < out.rows.size(); i += 2) {
    const auto& row11 = out.rows[i];
    const auto& row12 = out.rows[i + 1];
    const double p11 = std::stod(row11.cells[3].second);
    const double p12 = std::stod(row12.cells[3].second);
    const double ci11 = std::stod(row11.cells[5].second);
    const double ci12 = std::stod(row12.cells[5].second);
    const double pooled = std::sqrt(ci11 * ci11 + ci12 * ci12);
    if (std::abs(p12 - p11) > 2.0 * pooled) {
      ++separated;
      if (p12 < p11) ++violations;
    }
  }
  CriterionResult res;
  res.pass = violations == 0 && out.solver_failures == 0;
  res.detail = "violations=" + std::to_string(violations) +
               ", separated_cells=" + std::to_string(separated) + "/12" +
               ", solver_failures=" + std::to_string(out.solver_failures);
  return res;
}

}  // namespace

int main() {
  const auto t0_total = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, CriterionResult>> results;

  results.emplace_back("1 cnd-table exactness", criterion_cnd_table());
  results.emplace_back("2 solver-vs-enumeration", criterion_solver_oracle());
  results.emplace_back("3 certificate-soundness", criterion_certificate_soundness());
  results.emplace_back("4 nsp-facecount-equivalence", criterion_nsp_equivalence());
  const BoostedOutcome b = criterion_boosted_and_l11();
  results.emplace_back("5 boosted-model-band", b.boosted);
  results.emplace_back("6 l11-degradation", b.l11);
  results.emplace_back("7 rembo-boosted-reduction", criterion_rembo_reduction());
  results.emplace_back("8 counterexample-pair", criterion_counterexamples());
  results.emplace_back("9 pattern-saturation", criterion_pattern_saturation());
  results.emplace_back("10 l12-vs-l11-ordering", criterion_l12_ordering());

  int failures = 0;
  for (const auto& [name, res] : results) {
    std::printf("[%s] %s: %s\n", res.pass ? "PASS" : "FAIL", name.c_str(),
                res.detail.c_str());
    if (!res.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed, total runtime %.1fs\n",
              static_cast<int>(results.size()) - failures, results.size(),
              seconds_since(t0_total));
  return failures;
}
