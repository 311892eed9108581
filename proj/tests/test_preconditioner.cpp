#include <doctest.h>

#include <cmath>

#include "csa/preconditioner.hpp"
#include "csa/rng.hpp"

using namespace csa;

namespace {

DesignMatrix legendre_design(int d, int n, int M, std::uint64_t seed) {
  const auto spec = SamplerSpec::iid(Strategy::CSA, FamilyKind::legendre(), d, n, seed);
  const auto batch = draw_samples(spec, M);
  const std::vector<BasisFamily> fams(d, recurrence_table(FamilyKind::legendre(), n));
  return build_design(fams, MultiIndexSet::total_degree(d, n), batch);
}

}  // namespace

TEST_CASE("christoffel function closed cases") {
  const auto fam = recurrence_table(FamilyKind::legendre(), 1);
  Eigen::VectorXd z(1);

  // Lambda = {0}: constant basis, lambda == 1 everywhere.
  const auto just0 = MultiIndexSet::total_degree(1, 0);
  for (double v : {-0.9, 0.0, 0.4}) {
    z << v;
    CHECK(christoffel_lambda({recurrence_table(FamilyKind::legendre(), 0)}, just0, z) ==
          doctest::Approx(1.0).epsilon(1e-15));
  }

  const auto upto1 = MultiIndexSet::total_degree(1, 1);
  z << 0.0;
  CHECK(christoffel_lambda({fam}, upto1, z) == doctest::Approx(1.0).epsilon(1e-15));
  z << 1.0;
  CHECK(christoffel_lambda({fam}, upto1, z) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("christoffel bounds and monotonicity in the index set") {
  Rng rng(3);
  const auto fam = recurrence_table(FamilyKind::legendre(), 8);
  const std::vector<BasisFamily> fams(2, fam);
  const auto small = MultiIndexSet::total_degree(2, 4);
  const auto large = MultiIndexSet::total_degree(2, 8);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::VectorXd z(2);
    z << rng.uniform(-1, 1), rng.uniform(-1, 1);
    const double ls = christoffel_lambda(fams, small, z);
    const double ll = christoffel_lambda(fams, large, z);
    CHECK(ls > 0.0);
    CHECK(ls <= 1.0);
    CHECK(ll <= ls);  // larger dictionary, smaller lambda
  }
}

TEST_CASE("csa weights give rows of norm sqrt(N)") {
  const auto design = legendre_design(2, 6, 40, 17);
  const auto wv = csa_weights(design);
  const double target = std::sqrt(static_cast<double>(design.cols()));
  Eigen::VectorXd f = Eigen::VectorXd::Zero(design.rows());
  auto [A, b] = assemble_system(design, wv, f);
  for (int m = 0; m < A.rows(); ++m)
    CHECK(A.row(m).norm() == doctest::Approx(target).epsilon(1e-12));
}

TEST_CASE("csa weights: N = 1 dictionary gives unit weights") {
  const auto spec = SamplerSpec::iid(Strategy::CSA, FamilyKind::legendre(), 1, 0, 5);
  const auto batch = draw_samples(spec, 10);
  const std::vector<BasisFamily> fams{recurrence_table(FamilyKind::legendre(), 0)};
  const auto design = build_design(fams, MultiIndexSet::total_degree(1, 0), batch);
  const auto wv = csa_weights(design);
  for (int m = 0; m < 10; ++m) CHECK(wv.w[m] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("csa weight value at a known point") {
  // Legendre d=1, dictionary {0,1}, sample at z=1: w = 2 * lambda(1) = 0.5.
  SampleBatch batch;
  batch.spec = SamplerSpec::iid(Strategy::CSA, FamilyKind::legendre(), 1, 1, 0);
  batch.points.resize(1, 1);
  batch.points(0, 0) = 1.0;
  const std::vector<BasisFamily> fams{recurrence_table(FamilyKind::legendre(), 1)};
  const auto design = build_design(fams, MultiIndexSet::total_degree(1, 1), batch);
  const auto wv = csa_weights(design);
  CHECK(wv.w[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("weights agree with scale-tracked christoffel evaluations") {
  const auto design = legendre_design(2, 5, 25, 29);
  const std::vector<BasisFamily> fams(2, recurrence_table(FamilyKind::legendre(), 5));
  const auto wv = csa_weights(design);
  const double N = design.cols();
  for (int m = 0; m < design.rows(); ++m) {
    const double lam =
        christoffel_lambda(fams, design.indices, design.samples.points.row(m));
    CHECK(wv.w[m] == doctest::Approx(N * lam).epsilon(1e-12));
  }
}

TEST_CASE("asymptotic weights") {
  const int d = 3;
  SampleBatch batch;
  batch.spec = SamplerSpec::iid(Strategy::AsymptoticBounded, FamilyKind::legendre(), d, 2, 0);
  batch.points = Eigen::MatrixXd::Zero(2, d);
  batch.points(1, 0) = 0.5;
  const std::vector<BasisFamily> fams(d, recurrence_table(FamilyKind::legendre(), 2));

  SUBCASE("bounded: k(0) = (1/2)^d for Legendre") {
    const auto wv = asymptotic_weights(Strategy::AsymptoticBounded, fams, batch);
    CHECK(wv.w[0] == doctest::Approx(std::pow(0.5, d)).epsilon(1e-14));
    CHECK(wv.w[1] ==
          doctest::Approx(std::sqrt(1.0 - 0.25) * std::pow(0.5, d)).epsilon(1e-14));
  }
  SUBCASE("gaussian: k = exp(-|z|^2/2)") {
    const std::vector<BasisFamily> hfams(d, recurrence_table(FamilyKind::hermite(), 2));
    SampleBatch hb;
    hb.spec = SamplerSpec::iid(Strategy::AsymptoticGaussian, FamilyKind::hermite(), d, 2, 0);
    hb.points = Eigen::MatrixXd::Zero(2, d);
    hb.points.row(1) << 1.0, 1.0, 0.0;  // |z|^2 = 2
    const auto wv = asymptotic_weights(Strategy::AsymptoticGaussian, hfams, hb);
    CHECK(wv.w[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(wv.w[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  }
  SUBCASE("strategy/family mismatch") {
    const std::vector<BasisFamily> hfams(d, recurrence_table(FamilyKind::hermite(), 2));
    CHECK_THROWS(asymptotic_weights(Strategy::AsymptoticBounded, hfams, batch));
    CHECK_THROWS(asymptotic_weights(Strategy::AsymptoticGaussian, fams, batch));
    CHECK_THROWS(asymptotic_weights(Strategy::MC, fams, batch));
  }
}

TEST_CASE("assemble_system") {
  SUBCASE("unit weights leave the system unchanged") {
    const auto design = legendre_design(1, 3, 6, 41);
    Eigen::VectorXd f = Eigen::VectorXd::LinSpaced(6, 0.0, 1.0);
    auto [A, b] = assemble_system(design, unit_weights(6), f);
    CHECK((A - design.entries).cwiseAbs().maxCoeff() == 0.0);
    CHECK((b - f).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("single row scaled by sqrt(w)") {
    const auto design = legendre_design(1, 2, 1, 43);
    WeightVector wv{Eigen::VectorXd::Constant(1, 4.0), Strategy::MC};
    Eigen::VectorXd f = Eigen::VectorXd::Constant(1, 3.0);
    auto [A, b] = assemble_system(design, wv, f);
    CHECK((A - 2.0 * design.entries).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(b[0] == doctest::Approx(6.0));
  }
  SUBCASE("random case matches a dense diagonal-product oracle") {
    Rng rng(59);
    const auto design = legendre_design(1, 6, 5, 61);
    WeightVector wv{Eigen::VectorXd(5), Strategy::MC};
    Eigen::VectorXd f(5);
    for (int m = 0; m < 5; ++m) {
      wv.w[m] = 0.1 + rng.uniform();
      f[m] = rng.normal();
    }
    auto [A, b] = assemble_system(design, wv, f);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(5, 5);
    for (int m = 0; m < 5; ++m) W(m, m) = std::sqrt(wv.w[m]);
    CHECK((A - W * design.entries).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((b - W * f).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("dimension mismatch") {
    const auto design = legendre_design(1, 2, 4, 67);
    CHECK_THROWS(assemble_system(design, unit_weights(3), Eigen::VectorXd::Zero(4)));
    CHECK_THROWS(assemble_system(design, unit_weights(4), Eigen::VectorXd::Zero(5)));
  }
}
