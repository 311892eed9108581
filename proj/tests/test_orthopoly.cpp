#include <doctest.h>

#include <cmath>

#include "csa/orthopoly.hpp"
#include "csa/preconditioner.hpp"
#include "csa/rng.hpp"
#include "oracles.hpp"

using namespace csa;

TEST_CASE("legendre phi_1 normalization") {
  const auto fam = recurrence_table(FamilyKind::legendre(), 1);
  const auto e = eval_basis(fam, 1, 1.0);
  CHECK(e.log_scale == 0.0);
  CHECK(e.values[1] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("hermite phi_0 is one") {
  const auto fam = recurrence_table(FamilyKind::hermite(), 0);
  for (double z : {-3.0, 0.0, 7.5}) {
    const auto e = eval_basis(fam, 0, z);
    CHECK(e.values[0] == 1.0);
  }
}

TEST_CASE("legendre values at zero") {
  const auto fam = recurrence_table(FamilyKind::legendre(), 2);
  const auto e = eval_basis(fam, 2, 0.0);
  CHECK(e.values[0] == doctest::Approx(1.0));
  CHECK(e.values[1] == doctest::Approx(0.0));
  CHECK(e.values[2] == doctest::Approx(-std::sqrt(5.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("laguerre phi_0 constant") {
  const auto fam = recurrence_table(FamilyKind::laguerre(), 0);
  CHECK(eval_basis(fam, 0, 5.0).values[0] == 1.0);
}

TEST_CASE("gauss rule gram matrix is the identity") {
  // Quadrature from the family's own recurrence, one higher exactness degree.
  for (const auto kind :
       {FamilyKind::legendre(), FamilyKind::jacobi(2, 5), FamilyKind::jacobi(-0.5, -0.5),
        FamilyKind::hermite(), FamilyKind::laguerre()}) {
    const int n = 50;
    const auto fam = recurrence_table(kind, n + 1);
    const auto rule = gauss_rule(fam, n + 1);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int q = 0; q < rule.nodes.size(); ++q) {
      const auto e = eval_basis(fam, n, rule.nodes[q]);
      G += rule.weights[q] * e.values * e.values.transpose();
    }
    CHECK((G - Eigen::MatrixXd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("orthonormality against quadrature independent of the recurrence") {
  // The oracle integrates phi_i phi_j w directly with double-exponential /
  // trapezoid rules that know nothing about orthogonality.
  SUBCASE("jacobi(2,5)") {
    const auto fam = recurrence_table(FamilyKind::jacobi(2, 5), 12);
    auto w = [](double z) { return family_density(FamilyKind::jacobi(2, 5), z); };
    for (auto [i, j] : {std::pair{3, 3}, {5, 5}, {12, 12}, {3, 5}, {0, 7}}) {
      const double val = oracles::tanh_sinh([&](double z) {
        const auto e = eval_basis(fam, 12, z);
        return e.values[i] * e.values[j] * w(z);
      });
      CHECK(val == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
    }
  }
  SUBCASE("chebyshev-like jacobi(-1/2,-1/2)") {
    const auto fam = recurrence_table(FamilyKind::jacobi(-0.5, -0.5), 8);
    auto w = [](double z) {
      return family_density(FamilyKind::jacobi(-0.5, -0.5), z);
    };
    for (auto [i, j] : {std::pair{4, 4}, {8, 8}, {2, 6}}) {
      const double val = oracles::tanh_sinh([&](double z) {
        const auto e = eval_basis(fam, 8, z);
        return e.values[i] * e.values[j] * w(z);
      });
      CHECK(val == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
    }
  }
  SUBCASE("hermite") {
    const auto fam = recurrence_table(FamilyKind::hermite(), 20);
    for (auto [i, j] : {std::pair{10, 10}, {20, 20}, {7, 13}, {0, 2}}) {
      const double val = oracles::trapezoid_real(
          [&](double z) {
            const auto e = eval_basis(fam, 20, z);
            return e.values[i] * e.values[j] * std::exp(-z * z) / std::sqrt(M_PI);
          },
          std::sqrt(2.0 * 20) + 8.0);
      CHECK(val == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
    }
  }
  SUBCASE("laguerre") {
    const auto fam = recurrence_table(FamilyKind::laguerre(), 15);
    for (auto [i, j] : {std::pair{6, 6}, {15, 15}, {4, 9}}) {
      const double val = oracles::exp_sinh_half([&](double z) {
        const auto e = eval_basis(fam, 15, z);
        return e.values[i] * e.values[j] * std::exp(-z);
      });
      CHECK(val == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("recurrence coefficients stay positive") {
  for (const auto kind : {FamilyKind::legendre(), FamilyKind::jacobi(2, 5),
                          FamilyKind::hermite(), FamilyKind::laguerre()}) {
    const auto fam = recurrence_table(kind, 100);
    for (int k = 1; k <= 100; ++k) CHECK(fam.b(k) > 0.0);
  }
}

TEST_CASE("symmetric families satisfy phi_k(-z) = (-1)^k phi_k(z)") {
  Rng rng(31);
  for (const auto kind :
       {FamilyKind::legendre(), FamilyKind::jacobi(1.5, 1.5), FamilyKind::hermite()}) {
    const auto fam = recurrence_table(kind, 30);
    for (int rep = 0; rep < 20; ++rep) {
      const double z = kind.bounded() ? rng.uniform(-1.0, 1.0) : rng.normal() * 2.0;
      const auto ep = eval_basis(fam, 30, z);
      const auto em = eval_basis(fam, 30, -z);
      for (int k = 0; k <= 30; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        CHECK(em.values[k] == doctest::Approx(sign * ep.values[k]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("rescaled evaluation matches the raw path where both are finite") {
  // Hermite values at large argument trip the rescaling threshold well below
  // n = 512; compare normalized vectors on a range where raw values stay
  // finite.
  const auto fam = recurrence_table(FamilyKind::hermite(), 400);
  for (double z : {5.0, 12.0, 20.0, 26.0}) {
    const auto e = eval_basis(fam, 400, z);
    // Raw recurrence without rescaling, in long double to extend the range.
    long double p0 = 1.0L, p1 = (z - fam.a(0)) / fam.b(1);
    Eigen::VectorXd raw(401);
    raw[0] = 1.0;
    raw[1] = static_cast<double>(p1);
    bool finite = true;
    for (int k = 1; k < 400; ++k) {
      const long double p2 =
          ((z - fam.a(k)) * p1 - static_cast<long double>(fam.b(k)) * p0) / fam.b(k + 1);
      p0 = p1;
      p1 = p2;
      raw[k + 1] = static_cast<double>(p2);
      if (!std::isfinite(raw[k + 1])) {
        finite = false;
        break;
      }
    }
    if (!finite) continue;
    const Eigen::VectorXd a = e.values / e.values.norm();
    const Eigen::VectorXd b = raw / raw.norm();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("rescaling engages and keeps ratios finite at extreme degree") {
  const auto fam = recurrence_table(FamilyKind::hermite(), 512);
  const auto e = eval_basis(fam, 512, 30.0);
  CHECK(e.log_scale > 0.0);  // raw values would overflow
  CHECK(std::isfinite(e.sum_squares()));
  CHECK(e.values.cwiseAbs().maxCoeff() <= 1e150 * 1.0000001);
}

TEST_CASE("tensor evaluation") {
  SUBCASE("matches univariate evaluation in one dimension") {
    const auto fam = recurrence_table(FamilyKind::legendre(), 6);
    const auto idx = MultiIndexSet::total_degree(1, 6);
    Eigen::VectorXd z(1);
    z << 0.37;
    const auto te = tensor_eval({fam}, idx, z);
    const auto ue = eval_basis(fam, 6, 0.37);
    for (int k = 0; k <= 6; ++k)
      CHECK(te.values[k] * std::exp(te.log_scale) ==
            doctest::Approx(ue.values[k]).epsilon(1e-14));
  }
  SUBCASE("d=2 basis at the origin") {
    const auto fam = recurrence_table(FamilyKind::legendre(), 1);
    const auto idx = MultiIndexSet::total_degree(2, 1);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
    const auto te = tensor_eval({fam, fam}, idx, z);
    const double scale = std::exp(te.log_scale);
    CHECK(te.values[0] * scale == doctest::Approx(1.0));
    CHECK(te.values[1] * scale == doctest::Approx(0.0));
    CHECK(te.values[2] * scale == doctest::Approx(0.0));
  }
  SUBCASE("d=3 product of univariate values") {
    Rng rng(77);
    const auto fam = recurrence_table(FamilyKind::legendre(), 5);
    const auto idx = MultiIndexSet::total_degree(3, 5);
    const std::vector<BasisFamily> fams(3, fam);
    for (int rep = 0; rep < 10; ++rep) {
      Eigen::VectorXd z(3);
      for (int j = 0; j < 3; ++j) z[j] = rng.uniform(-1.0, 1.0);
      const auto te = tensor_eval(fams, idx, z);
      const double scale = std::exp(te.log_scale);
      for (int i = 0; i < idx.size(); ++i) {
        double expected = 1.0;
        for (int j = 0; j < 3; ++j)
          expected *= eval_basis(fam, 5, z[j]).values[idx[i][j]];
        CHECK(te.values[i] * scale ==
              doctest::Approx(expected).epsilon(1e-13).scale(1.0));
      }
    }
  }
  SUBCASE("dimension mismatch") {
    const auto fam = recurrence_table(FamilyKind::legendre(), 2);
    const auto idx = MultiIndexSet::total_degree(2, 2);
    Eigen::VectorXd z(3);
    z.setZero();
    CHECK_THROWS(tensor_eval({fam, fam}, idx, z));
  }
}

TEST_CASE("domain and parameter errors") {
  CHECK_THROWS_AS(recurrence_table(FamilyKind::jacobi(-0.6, 0.0), 4),
                  std::domain_error);
  CHECK_THROWS_AS(recurrence_table(FamilyKind::legendre(), -1),
                  std::invalid_argument);
  const auto fam = recurrence_table(FamilyKind::legendre(), 4);
  CHECK_THROWS_AS(eval_basis(fam, 4, 1.5), std::domain_error);
  CHECK_THROWS_AS(eval_basis(fam, 5, 0.0), std::invalid_argument);
  const auto lag = recurrence_table(FamilyKind::laguerre(), 4);
  CHECK_THROWS_AS(eval_basis(lag, 4, -0.1), std::domain_error);
}

TEST_CASE("gauss-legendre nodes") {
  const auto rule = gauss_legendre(2);
  CHECK(rule.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(rule.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(rule.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
  // Degree-9 polynomial integrated exactly with 5 nodes.
  const auto r5 = gauss_legendre(5);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += r5.weights[i] * std::pow(r5.nodes[i], 8);
  CHECK(acc == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
}
