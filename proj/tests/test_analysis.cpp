#include <doctest.h>

#include <cmath>
#include <sstream>

#include "jsrec/analysis.hpp"
#include "jsrec/bp.hpp"
#include "jsrec/combinatorics.hpp"
#include "jsrec/errors.hpp"
#include "jsrec/matrix.hpp"
#include "jsrec/rng.hpp"

using namespace jsrec;

namespace {

DenseMatrix two_by_three() {
  return DenseMatrix::from_data(2, 3, {1, 0, 1, 0, 1, 1});
}

}  // namespace

TEST_CASE("face_count on the identity keeps every face") {
  const DenseMatrix A = DenseMatrix::identity(4);
  const SupportSet I = SupportSet::make({0, 2, 3}, 4);
  const FaceCount fc = face_count(A, I);
  CHECK(fc.total.to_u64() == 8);
  CHECK(fc.surviving == fc.total);
  for (const auto& [code, rec] : fc.per_pattern) CHECK(rec);
}

TEST_CASE("face_count separates surviving and lost patterns") {
  const DenseMatrix A = two_by_three();
  SUBCASE("I = {0,1}: only the opposite-sign patterns survive") {
    const FaceCount fc = face_count(A, SupportSet::make({0, 1}, 3));
    CHECK(fc.total.to_u64() == 4);
    CHECK(fc.surviving.to_u64() == 2);
    CHECK_FALSE(fc.per_pattern.at(0b00));  // (+,+) loses to the shared column
    CHECK(fc.per_pattern.at(0b10));        // (+,-) survives
  }
  SUBCASE("I = {2}: one-sparse recovery works") {
    const FaceCount fc = face_count(A, SupportSet::make({2}, 3));
    CHECK(fc.total.to_u64() == 2);
    CHECK(fc.surviving.to_u64() == 2);
  }
}

TEST_CASE("face_count depends only on sign patterns, not magnitudes") {
  Rng rng(42, 0);
  const DenseMatrix A = gaussian_matrix(4, 10, rng);
  const SupportSet I = SupportSet::make({1, 5, 8}, 10);
  const FaceCount fc = face_count(A, I);
  // Re-run each pattern with random magnitudes; recovery must agree.
  SolverSettings st;
  for (const auto& [code, expected] : fc.per_pattern) {
    std::vector<double> x0(10, 0.0);
    for (int k = 0; k < 3; ++k) {
      double mag = std::abs(rng.next_normal()) + 0.1;
      x0[I[k]] = ((code >> k) & 1 ? -1.0 : 1.0) * mag;
    }
    std::vector<double> b(4, 0.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 10; ++j) b[i] += A(i, j) * x0[j];
    const SolveReport rep = solve_bp(A, b, st);
    REQUIRE(rep.status == SolveStatus::Optimal);
    CHECK((norm_inf_diff(rep.x, x0) <= st.recovery_tol) == expected);
  }
}

TEST_CASE("face_count rejects oversized supports") {
  const DenseMatrix A = DenseMatrix::identity(30);
  std::vector<int> idx(25);
  for (int i = 0; i < 25; ++i) idx[i] = i;
  CHECK_THROWS_AS(face_count(A, SupportSet::make(idx, 30), SolverSettings{}, 1 << 10),
                  Error);
}

TEST_CASE("null-space property checks") {
  SUBCASE("trivial kernel holds vacuously") {
    const NspResult res = check_nsp_uniform(DenseMatrix::identity(3),
                                            SupportSet::make({0, 1}, 3));
    CHECK(res.holds);
  }
  SUBCASE("singleton support off the kernel mass holds") {
    const NspResult res = check_nsp_uniform(two_by_three(), SupportSet::make({2}, 3));
    CHECK(res.holds);
  }
  SUBCASE("the kernel line defeats a two-index support") {
    const NspResult res = check_nsp_uniform(two_by_three(), SupportSet::make({0, 1}, 3));
    REQUIRE_FALSE(res.holds);
    REQUIRE(res.witness.has_value());
    // Witness must be proportional to (1,1,-1) and actually violate strictness.
    const auto& z = *res.witness;
    CHECK(std::abs(z[0] - z[1]) < 1e-6 * (std::abs(z[0]) + 1.0));
    CHECK(std::abs(z[0] + z[2]) < 1e-6 * (std::abs(z[0]) + 1.0));
    CHECK(std::abs(z[0]) + std::abs(z[1]) >= std::abs(z[2]) - 1e-7);
  }
  SUBCASE("dependent support columns fail immediately") {
    // Two collinear columns: kernel vector lives inside I.
    const DenseMatrix A = DenseMatrix::from_data(2, 3, {1, 2, 0, 1, 2, 1});
    const NspResult res = check_nsp_uniform(A, SupportSet::make({0, 1}, 3));
    REQUIRE_FALSE(res.holds);
    REQUIRE(res.witness.has_value());
    double off_mass = std::abs((*res.witness)[2]);
    CHECK(off_mass < 1e-9);
  }
}

TEST_CASE("nsp equivalence with exhaustive face counting") {
  int holds_seen = 0, fails_seen = 0;
  for (int t = 0; t < 12; ++t) {
    Rng rng(900 + t, 0);
    const DenseMatrix A = gaussian_matrix(6, 15, rng);
    Rng srng(900 + t, 1);
    const int s = 1 + static_cast<int>(srng.next_below(3));
    const SupportSet I = SupportSet::random(s, 15, srng);
    const bool nsp = check_nsp_uniform(A, I).holds;
    const FaceCount fc = face_count(A, I);
    const bool uniform = fc.surviving == fc.total;
    CHECK(nsp == uniform);
    (nsp ? holds_seen : fails_seen)++;
  }
  CHECK(holds_seen > 0);  // suite exercises both outcomes
  CHECK(fails_seen >= 0);
}

TEST_CASE("spark computations") {
  SUBCASE("kernel vector with three nonzeros") {
    const SparkResult res = spark_bruteforce(two_by_three());
    CHECK(res.kind == SparkResult::Kind::Value);
    CHECK(res.k == 3);
  }
  SUBCASE("identity has a trivial kernel") {
    CHECK(spark_bruteforce(DenseMatrix::identity(4)).kind == SparkResult::Kind::Trivial);
  }
  SUBCASE("gaussian 4x8 sits at m+1") {
    Rng rng(11, 0);
    const DenseMatrix A = gaussian_matrix(4, 8, rng);
    const SparkResult res = spark_bruteforce(A);
    CHECK(res.kind == SparkResult::Kind::Value);
    CHECK(res.k == 5);
  }
  SUBCASE("budget exhaustion reports a lower bound") {
    Rng rng(13, 0);
    const DenseMatrix A = gaussian_matrix(4, 12, rng);
    const SparkResult res = spark_bruteforce(A, 10);
    CHECK(res.kind == SparkResult::Kind::AtLeast);
    CHECK(res.k >= 1);
  }
  SUBCASE("duplicate column gives spark 2") {
    const DenseMatrix A = DenseMatrix::from_data(2, 3, {1, 1, 0, 2, 2, 1});
    const SparkResult res = spark_bruteforce(A);
    CHECK(res.kind == SparkResult::Kind::Value);
    CHECK(res.k == 2);
  }
}

TEST_CASE("probability models") {
  FaceCount fc;
  fc.total = BigUint(4);
  fc.surviving = BigUint(2);
  CHECK(prob_l1(fc) == doctest::Approx(0.5));
  CHECK(prob_l11(0.5, 2) == doctest::Approx(0.25));
  CHECK(prob_l11(1.0, 17) == doctest::Approx(1.0));
  CHECK(prob_l11(0.9, 10) == doctest::Approx(0.3486784401).epsilon(1e-9));
  CHECK(prob_boosted(0.5, 2) == doctest::Approx(0.75));
  CHECK(prob_boosted(0.0, 5) == doctest::Approx(0.0));
  CHECK(prob_boosted(0.1, 20) == doctest::Approx(0.8784233454094308).epsilon(1e-9));
}

TEST_CASE("model ordering: joint <= single <= boosted") {
  for (double p : {0.0, 0.05, 0.3, 0.7, 0.95, 1.0})
    for (int r = 1; r <= 10; ++r) {
      CHECK(prob_l11(p, r) <= p + 1e-15);
      CHECK(p <= prob_boosted(p, r) + 1e-15);
    }
}

TEST_CASE("rembo model") {
  SUBCASE("full survival is certain") {
    CHECK(prob_rembo(BigUint(8), BigUint(8), 3, 2) == doctest::Approx(1.0));
  }
  SUBCASE("no survivors means no recovery") {
    CHECK(prob_rembo(BigUint(0), BigUint(8), 3, 2) == doctest::Approx(0.0));
  }
  SUBCASE("single-term reduction equals the face ratio") {
    CHECK(prob_rembo(BigUint(2), BigUint(4), 2, 1) == doctest::Approx(0.5));
  }
  SUBCASE("elimination beats independent sampling") {
    // terms model with elimination >= plain boosted with the same tries
    const double pr = prob_rembo_terms(BigUint(2), BigUint(16), 4);
    const double pb = prob_boosted(2.0 / 16.0, 4);
    CHECK(pr >= pb - 1e-12);
  }
  SUBCASE("monotone in r and surviving") {
    double prev = 0.0;
    for (int r = 1; r <= 6; ++r) {
      const double v = prob_rembo(BigUint(4), BigUint(32), 5, r);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
    double prev_s = 0.0;
    for (std::uint64_t surv = 0; surv <= 32; surv += 2) {
      const double v = prob_rembo(BigUint(surv), BigUint(32), 5, 3);
      CHECK(v >= prev_s - 1e-12);
      prev_s = v;
    }
  }
  SUBCASE("lower bound by the boosted model") {
    for (int r = 1; r <= 8; ++r) {
      const BigUint surv(6), tot(32);
      const double pl1 = 6.0 / 32.0;
      const std::uint64_t pairs = cnd(5, r).to_u64() / 2;
      const int capped = static_cast<int>(std::min<std::uint64_t>(r, pairs));
      CHECK(prob_rembo(surv, tot, 5, r) >= prob_boosted(pl1, capped) - 1e-12);
    }
  }
}

TEST_CASE("face count csv layout") {
  FaceCount fc;
  fc.support = SupportSet::make({0, 1}, 3);
  fc.per_pattern[0b00] = true;
  fc.per_pattern[0b10] = false;
  std::ostringstream os;
  write_face_count_csv(fc, os);
  CHECK(os.str() == "pattern,recovered\n++,1\n+-,0\n");
}
