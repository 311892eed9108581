#ifndef CSA_EXPERIMENTS_HPP
#define CSA_EXPERIMENTS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "csa/orthopoly.hpp"
#include "csa/sampling.hpp"

namespace csa {

/// Run fn(0..count-1) across a fixed thread pool; iteration i always
/// produces the same result regardless of scheduling, so outputs stay
/// deterministic.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

// --- manufactured sparse recovery ------------------------------------------

struct TrialConfig {
  FamilyKind family;
  int d = 1;
  int n = 1;
  Strategy strategy = Strategy::CSA;
  int s = 1;
  int M = 1;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  double success_threshold = 0.01;
  int trials = 100;
};

struct TrialOutcome {
  bool success = false;
  double rel_error = 0.0;
  bool degenerate = false;
  /// max relative deviation of preconditioned row norms from sqrt(N)
  /// (CSA strategy only; 0 otherwise).
  double rownorm_dev = 0.0;
};

/// Plant an s-sparse coefficient vector (support uniform without
/// replacement, nonzeros standard normal), sample with the configured
/// strategy, solve preconditioned basis pursuit, and compare.
TrialOutcome manufactured_trial(const TrialConfig& config, std::uint64_t trial_id);

// --- transition studies ------------------------------------------------------

struct TransitionConfig {
  FamilyKind family;
  int d = 2;
  int n = 30;
  Strategy strategy = Strategy::CSA;
  std::vector<double> m_ratios;  // M/N grid
  std::vector<double> s_ratios;  // s/M grid
  int trials = 20;
  double epsilon = 0.0;
  double success_threshold = 0.01;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct TransitionGrid {
  TransitionConfig config;
  int N = 0;
  Eigen::MatrixXi m_values;  // per cell
  Eigen::MatrixXi s_values;
  Eigen::MatrixXd success;   // empirical success probability per cell
  Eigen::MatrixXd std_err;   // binomial standard error
  double max_rownorm_dev = 0.0;

  double mean_success() const { return success.mean(); }
};

/// Sweep the (M/N, s/M) grid with per-cell independent seeds.
TransitionGrid transition_study(const TransitionConfig& config);

/// CSV: m_ratio,s_ratio,M,s,success_rate,std_err (row-major over the grid).
void write_csv(const TransitionGrid& grid, std::ostream& os);

// --- PDE convergence studies -------------------------------------------------

struct PdeStudyConfig {
  FamilyKind family;
  int d = 2;
  int n = 15;
  Strategy strategy = Strategy::CSA;
  std::vector<int> m_values;
  int trials = 20;
  int validation_count = 10000;
  double sigma_a = 1.0;
  double mean_a = 0.1;
  double corr_len = 0.1;
  int collocation_points = 128;
  /// BPDN tolerance picked by 5-fold cross-validation over these factors of
  /// the preconditioned data norm.
  std::vector<double> cv_tolerance_factors = {0.0,     1e-4, 3.16e-4, 1e-3,
                                              3.16e-3, 1e-2, 3.16e-2, 1e-1};
  std::uint64_t seed = 0;
  int threads = 1;
};

struct ConvergenceCurve {
  PdeStudyConfig config;
  int N = 0;
  std::vector<int> m_values;
  std::vector<double> quartile1, median, quartile3;  // of eps_{l2(w)}
  std::vector<double> median_epsilon;                // chosen BPDN tolerance
  double max_rownorm_dev = 0.0;
};

ConvergenceCurve pde_study(const PdeStudyConfig& config);

/// CSV: M,quartile1,median,quartile3,median_epsilon.
void write_csv(const ConvergenceCurve& curve, std::ostream& os);

/// Interpolated quantile (linear between order statistics) of a copy of xs.
double quantile(std::vector<double> xs, double q);

}  // namespace csa

#endif
