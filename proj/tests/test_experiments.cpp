#include <doctest.h>

#include <cmath>
#include <sstream>

#include "csa/experiments.hpp"
#include "csa/l1_solver.hpp"
#include "csa/preconditioner.hpp"

using namespace csa;

TEST_CASE("quantile helper") {
  CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
  CHECK(quantile({1.0, 2.0}, 0.5) == doctest::Approx(1.5));
  CHECK(quantile({5.0}, 0.25) == 5.0);
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.25) == doctest::Approx(1.75));
}

TEST_CASE("parallel_for covers every index exactly once") {
  std::vector<int> hits(1000, 0);
  parallel_for(1000, 4, [&](int i) { hits[i]++; });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("manufactured trial basics") {
  TrialConfig config;
  config.family = FamilyKind::legendre();
  config.d = 1;
  config.n = 9;
  config.strategy = Strategy::CSA;
  config.seed = 42;

  SUBCASE("zero sparsity recovers the zero vector") {
    config.s = 0;
    config.M = 5;
    const auto out = manufactured_trial(config, 0);
    CHECK(out.success);
    CHECK(out.rel_error == 0.0);
  }
  SUBCASE("square full-rank system interpolates for any sparsity") {
    config.M = 10;  // N = 10 for d=1, n=9
    for (int s : {1, 5, 10}) {
      config.s = s;
      const auto out = manufactured_trial(config, s);
      CHECK(out.success);
    }
  }
  SUBCASE("row-norm telemetry reports the csa identity") {
    config.s = 2;
    config.M = 8;
    const auto out = manufactured_trial(config, 3);
    CHECK(out.rownorm_dev < 1e-12);
  }
  SUBCASE("invalid shapes throw") {
    config.s = 6;
    config.M = 5;
    CHECK_THROWS(manufactured_trial(config, 0));
    config.s = 2;
    config.M = 11;  // > N
    CHECK_THROWS(manufactured_trial(config, 0));
  }
}

TEST_CASE("easy csa recovery region") {
  // d=2, n=6 (N=28), s=3, M=16: comfortably inside the recovered region.
  TrialConfig config;
  config.family = FamilyKind::legendre();
  config.d = 2;
  config.n = 6;
  config.strategy = Strategy::CSA;
  config.s = 3;
  config.M = 16;
  config.seed = 7;
  int successes = 0;
  for (int t = 0; t < 20; ++t) successes += manufactured_trial(config, t).success;
  CHECK(successes >= 18);
}

TEST_CASE("transition study determinism and shape") {
  TransitionConfig config;
  config.family = FamilyKind::legendre();
  config.d = 2;
  config.n = 4;  // N = 15
  config.strategy = Strategy::CSA;
  config.m_ratios = {0.3, 0.6, 0.9};
  config.s_ratios = {0.2, 0.5, 0.8};
  config.trials = 5;
  config.seed = 11;
  config.threads = 2;

  const auto grid = transition_study(config);
  CHECK(grid.N == 15);
  CHECK(grid.success.rows() == 3);
  CHECK(grid.success.cols() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(grid.success(i, j) >= 0.0);
      CHECK(grid.success(i, j) <= 1.0);
      // Each cell averages exactly `trials` Bernoulli outcomes.
      const double scaled = grid.success(i, j) * config.trials;
      CHECK(std::abs(scaled - std::lround(scaled)) < 1e-9);
      CHECK(grid.m_values(i, j) >= grid.s_values(i, j));
    }

  std::ostringstream a, b;
  write_csv(grid, a);
  config.threads = 1;  // thread count must not affect the bytes
  write_csv(transition_study(config), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("m_ratio,s_ratio,M,s,success_rate,std_err\n", 0) == 0);
}

TEST_CASE("pde study smoke") {
  PdeStudyConfig config;
  config.family = FamilyKind::legendre();
  config.d = 2;
  config.n = 4;
  config.strategy = Strategy::CSA;
  config.m_values = {10, 20};
  config.trials = 3;
  config.validation_count = 100;
  config.collocation_points = 32;
  config.seed = 3;
  config.threads = 2;
  config.cv_tolerance_factors = {0.0, 1e-3, 1e-2};

  const auto curve = pde_study(config);
  REQUIRE(curve.m_values.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(curve.quartile1[i] <= curve.median[i] + 1e-15);
    CHECK(curve.median[i] <= curve.quartile3[i] + 1e-15);
    CHECK(curve.median[i] > 0.0);
  }
  CHECK(curve.max_rownorm_dev < 1e-12);

  std::ostringstream a, b;
  write_csv(curve, a);
  write_csv(pde_study(config), b);
  CHECK(a.str() == b.str());
}

TEST_CASE("exactly representable pde target recovers to solver precision") {
  // A degree-2 polynomial target inside a degree-4 dictionary is 6-sparse in
  // N = 15 basis terms; 3N/4 CSA samples recover it to solver precision.
  const int d = 2, n = 4;
  const auto idx = MultiIndexSet::total_degree(d, n);
  const std::vector<BasisFamily> fams(d, recurrence_table(FamilyKind::legendre(), n));
  Eigen::VectorXd truth_coef = Eigen::VectorXd::Zero(idx.size());
  truth_coef.head(6) << 0.3, -1.2, 0.7, 0.05, 2.0, -0.4;  // all of degree <= 2

  const auto spec = SamplerSpec::iid(Strategy::CSA, FamilyKind::legendre(), d, n, 17);
  const int M = (3 * idx.size() + 3) / 4;
  const auto batch = draw_samples(spec, M);
  const auto design = build_design(fams, idx, batch);
  const Eigen::VectorXd f = design.entries * truth_coef;
  const auto wv = csa_weights(design);
  auto [A, b] = assemble_system(design, wv, f);

  RecoveryProblem problem;
  problem.A = A;
  problem.b = b;
  problem.epsilon = 0.0;
  const auto res = bpdn(problem);
  CHECK((res.coefficients - truth_coef).norm() < 1e-8);
}
