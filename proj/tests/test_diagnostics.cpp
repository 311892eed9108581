#include <doctest.h>

#include <cmath>

#include "csa/diagnostics.hpp"

using namespace csa;

TEST_CASE("legendre gramian is the identity") {
  const auto fam = recurrence_table(FamilyKind::legendre(), 12);
  for (int n : {1, 5, 12}) {
    const auto rep = gramian(fam, n);
    CHECK(rep.converged);
    CHECK((rep.R - Eigen::MatrixXd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() <
          1e-10);
    CHECK(rep.norm1_inv_sqrt == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("degree-zero gramian is the unit matrix for every family") {
  for (const auto kind : {FamilyKind::legendre(), FamilyKind::jacobi(2, 5),
                          FamilyKind::hermite(), FamilyKind::laguerre()}) {
    const auto rep = gramian(recurrence_table(kind, 1), 0);
    REQUIRE(rep.R.rows() == 1);
    CHECK(rep.R(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("hermite gramian structure") {
  const auto fam = recurrence_table(FamilyKind::hermite(), 20);
  const auto rep = gramian(fam, 20);
  CHECK(rep.converged);
  CHECK(rep.lambda_min > 0.0);
  CHECK(rep.lambda_min < 1.5);
  CHECK(std::isfinite(rep.norm1_inv_sqrt));
  // Square-root consistency.
  CHECK((rep.sqrt_R * rep.sqrt_R - rep.R).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((rep.inv_sqrt_R * rep.R * rep.inv_sqrt_R -
         Eigen::MatrixXd::Identity(21, 21))
            .cwiseAbs()
            .maxCoeff() < 1e-9);
  // Norm chain: |R^{-1/2}|_1 >= |R^{-1/2}|_2 = lambda_min^{-1/2}.
  CHECK(rep.norm1_inv_sqrt >= 1.0 / std::sqrt(rep.lambda_min) - 1e-12);
  // trace R = N exactly for the Christoffel-weighted Gramian.
  CHECK(rep.R.trace() == doctest::Approx(21.0).epsilon(1e-10));
}

TEST_CASE("gramian quadrature is stable under one further doubling") {
  const auto fam = recurrence_table(FamilyKind::laguerre(), 15);
  const auto rep = gramian(fam, 15);
  CHECK(rep.converged);
  CHECK(rep.quad_points_used >= 128);
  // The convergence criterion itself guarantees < 1e-11 change on the last
  // doubling; spot check symmetry too.
  CHECK((rep.R - rep.R.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("coherence scan") {
  SUBCASE("legendre is flat") {
    const auto rep =
        coherence_scan(FamilyKind::legendre(), {10, 20, 30, 40, 50}, 50);
    CHECK(rep.fitted_exponent > -0.05);
    CHECK(rep.fitted_exponent < 0.05);
    for (double L : rep.L_values) CHECK(L >= 1.0);
  }
  SUBCASE("hermite grows like n^{2/3} (short desk check)") {
    const auto rep = coherence_scan(FamilyKind::hermite(), {40, 80, 160}, 50);
    CHECK(rep.fitted_exponent == doctest::Approx(2.0 / 3.0).epsilon(0.2));
  }
  SUBCASE("grid stability under doubling") {
    const auto a = coherence_scan(FamilyKind::hermite(), {60}, 50);
    const auto b = coherence_scan(FamilyKind::hermite(), {60}, 100);
    CHECK(std::abs(a.L_values[0] - b.L_values[0]) / b.L_values[0] < 0.005);
  }
  SUBCASE("too coarse a grid is an error") {
    CHECK_THROWS(coherence_scan(FamilyKind::legendre(), {10}, 9));
  }
}

TEST_CASE("sample count bound") {
  CHECK(sample_count_bound(1.0, 1.0, 1, 2) == 1);
  // Monotone in sparsity.
  CHECK(sample_count_bound(1.0, 1.0, 10, 496) >
        sample_count_bound(1.0, 1.0, 5, 496));
  // Legendre-style inputs: L and the norm are O(1), bound scales ~ s log^3 s log N.
  const long long m = sample_count_bound(2.16, 1.0, 5, 496);
  CHECK(m == static_cast<long long>(
                 std::ceil(2.16 * 5 * std::pow(std::log(5.0), 3) * std::log(496.0))));
  CHECK_THROWS(sample_count_bound(0.0, 1.0, 1, 2));
}

TEST_CASE("report serialization") {
  const auto fam = recurrence_table(FamilyKind::legendre(), 3);
  const auto rep = gramian(fam, 3);
  const auto text = to_json(rep);
  CHECK(text.find("\"family\":\"legendre\"") != std::string::npos);
  CHECK(text.find("\"converged\":true") != std::string::npos);
  const auto scan = coherence_scan(FamilyKind::legendre(), {10, 20}, 50);
  CHECK(to_json(scan).find("\"fitted_exponent\"") != std::string::npos);
}
