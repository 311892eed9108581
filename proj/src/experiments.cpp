#include "csa/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "csa/l1_solver.hpp"
#include "csa/pde.hpp"
#include "csa/preconditioner.hpp"
#include "csa/rng.hpp"

namespace csa {

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace {

double format_percentile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double pos = q * (n - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - lo;
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

double csa_rownorm_dev(const Eigen::MatrixXd& A) {
  const double target = std::sqrt(static_cast<double>(A.cols()));
  double dev = 0.0;
  for (int m = 0; m < A.rows(); ++m)
    dev = std::max(dev, std::abs(A.row(m).norm() - target) / target);
  return dev;
}

void format_row(std::ostream& os, const std::vector<double>& values) {
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    os << (i ? "," : "") << buf;
  }
  os << "\n";
}

}  // namespace

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(xs.begin(), xs.end());
  return format_percentile_sorted(xs, q);
}

TrialOutcome manufactured_trial(const TrialConfig& config, std::uint64_t trial_id) {
  const MultiIndexSet indices = MultiIndexSet::total_degree(config.d, config.n);
  const int N = indices.size();
  if (config.s < 0 || config.s > config.M || config.M > N)
    throw std::invalid_argument("manufactured_trial: need s <= M <= N");
  if (!(config.success_threshold > 0.0))
    throw std::invalid_argument("manufactured_trial: threshold must be > 0");

  const std::vector<BasisFamily> families(
      config.d, recurrence_table(config.family, config.n));

  // Planted vector: support uniform without replacement, values standard
  // normal.
  Eigen::VectorXd planted = Eigen::VectorXd::Zero(N);
  {
    Rng support_rng(derive_stream(config.seed, {trial_id, 1}));
    std::vector<int> perm(N);
    for (int i = 0; i < N; ++i) perm[i] = i;
    for (int i = 0; i < config.s; ++i) {
      const int j = i + static_cast<int>(support_rng.below(N - i));
      std::swap(perm[i], perm[j]);
    }
    Rng value_rng(derive_stream(config.seed, {trial_id, 2}));
    for (int i = 0; i < config.s; ++i) planted[perm[i]] = value_rng.normal();
  }

  SamplerSpec spec = SamplerSpec::iid(config.strategy, config.family, config.d,
                                      config.n,
                                      derive_stream(config.seed, {trial_id, 3}));
  const SampleBatch batch = draw_samples(spec, config.M);
  const DesignMatrix design = build_design(families, indices, batch);
  const Eigen::VectorXd f = design.entries * planted;
  const WeightVector weights = strategy_weights(design, families);
  auto [A, b] = assemble_system(design, weights, f);

  TrialOutcome outcome;
  if (config.strategy == Strategy::CSA) outcome.rownorm_dev = csa_rownorm_dev(A);

  RecoveryProblem problem;
  problem.A = std::move(A);
  problem.b = std::move(b);
  problem.epsilon = config.epsilon;
  const RecoveryResult result = bpdn(problem);

  const double denom = planted.norm();
  outcome.rel_error =
      denom > 0.0 ? (result.coefficients - planted).norm() / denom
                  : result.coefficients.norm();
  outcome.degenerate = result.status == SolveStatus::degenerate;
  outcome.success = !outcome.degenerate &&
                    result.status == SolveStatus::converged &&
                    outcome.rel_error <= config.success_threshold;
  return outcome;
}

TransitionGrid transition_study(const TransitionConfig& config) {
  if (config.m_ratios.empty() || config.s_ratios.empty())
    throw std::invalid_argument("transition_study: empty ratio grid");
  if (config.trials < 1)
    throw std::invalid_argument("transition_study: trials must be >= 1");

  TransitionGrid grid;
  grid.config = config;
  grid.N = static_cast<int>(total_degree_cardinality(config.d, config.n));
  const int rows = static_cast<int>(config.m_ratios.size());
  const int cols = static_cast<int>(config.s_ratios.size());
  grid.m_values.resize(rows, cols);
  grid.s_values.resize(rows, cols);
  grid.success.resize(rows, cols);
  grid.std_err.resize(rows, cols);

  std::vector<double> devs(static_cast<std::size_t>(rows) * cols, 0.0);
  parallel_for(rows * cols, config.threads, [&](int cell) {
    const int i = cell / cols;
    const int j = cell % cols;
    const int M = std::max(1, std::min(grid.N, static_cast<int>(std::lround(
                                                   config.m_ratios[i] * grid.N))));
    const int s = std::max(1, std::min(M, static_cast<int>(std::lround(
                                              config.s_ratios[j] * M))));
    TrialConfig trial;
    trial.family = config.family;
    trial.d = config.d;
    trial.n = config.n;
    trial.strategy = config.strategy;
    trial.s = s;
    trial.M = M;
    trial.epsilon = config.epsilon;
    trial.success_threshold = config.success_threshold;
    trial.trials = config.trials;
    trial.seed = derive_stream(config.seed, {static_cast<std::uint64_t>(i),
                                             static_cast<std::uint64_t>(j)});
    int successes = 0;
    double dev = 0.0;
    for (int t = 0; t < config.trials; ++t) {
      const TrialOutcome outcome = manufactured_trial(trial, t);
      successes += outcome.success ? 1 : 0;
      dev = std::max(dev, outcome.rownorm_dev);
    }
    const double p = static_cast<double>(successes) / config.trials;
    grid.m_values(i, j) = M;
    grid.s_values(i, j) = s;
    grid.success(i, j) = p;
    grid.std_err(i, j) = std::sqrt(p * (1.0 - p) / config.trials);
    devs[cell] = dev;
  });
  grid.max_rownorm_dev = *std::max_element(devs.begin(), devs.end());
  return grid;
}

void write_csv(const TransitionGrid& grid, std::ostream& os) {
  os << "m_ratio,s_ratio,M,s,success_rate,std_err\n";
  for (int i = 0; i < grid.success.rows(); ++i)
    for (int j = 0; j < grid.success.cols(); ++j) {
      format_row(os, {grid.config.m_ratios[i], grid.config.s_ratios[j],
                      static_cast<double>(grid.m_values(i, j)),
                      static_cast<double>(grid.s_values(i, j)),
                      grid.success(i, j), grid.std_err(i, j)});
    }
}

namespace {

// 5-fold cross-validated BPDN tolerance: candidates are factors of the
// preconditioned data norm; the factor minimizing the mean held-out residual
// wins, then the full problem is solved at that tolerance.
RecoveryResult solve_with_cv(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                             const std::vector<double>& factors,
                             double* chosen_epsilon) {
  const int M = static_cast<int>(A.rows());
  const int folds = std::min(5, M);
  double best_factor = 0.0;
  double best_score = std::numeric_limits<double>::infinity();
  if (factors.size() > 1 && folds > 1) {
    for (double factor : factors) {
      double score = 0.0;
      for (int k = 0; k < folds; ++k) {
        std::vector<int> train, hold;
        for (int m = 0; m < M; ++m)
          (m % folds == k ? hold : train).push_back(m);
        Eigen::MatrixXd At(train.size(), A.cols());
        Eigen::VectorXd bt(train.size());
        for (std::size_t r = 0; r < train.size(); ++r) {
          At.row(r) = A.row(train[r]);
          bt[r] = b[train[r]];
        }
        RecoveryProblem sub;
        sub.A = std::move(At);
        sub.b = std::move(bt);
        sub.epsilon = factor * sub.b.norm();
        const RecoveryResult fit = bpdn(sub);
        double acc = 0.0;
        for (int h : hold) {
          const double r = A.row(h).dot(fit.coefficients) - b[h];
          acc += r * r;
        }
        score += std::sqrt(acc / hold.size());
      }
      score /= folds;
      if (score < best_score) {
        best_score = score;
        best_factor = factor;
      }
    }
  }
  RecoveryProblem full;
  full.A = A;
  full.b = b;
  full.epsilon = best_factor * b.norm();
  if (chosen_epsilon) *chosen_epsilon = full.epsilon;
  return bpdn(full);
}

}  // namespace

ConvergenceCurve pde_study(const PdeStudyConfig& config) {
  if (config.m_values.empty())
    throw std::invalid_argument("pde_study: empty M sweep");
  const MultiIndexSet indices = MultiIndexSet::total_degree(config.d, config.n);
  const int N = indices.size();
  const std::vector<BasisFamily> families(
      config.d, recurrence_table(config.family, config.n));
  const CollocationSolver solver = CollocationSolver::make(config.collocation_points);
  const KLField field = kl_decompose(config.corr_len, config.d, solver.x,
                                     config.sigma_a, config.mean_a);

  // One validation set per study; trials share it (common random numbers).
  const ValidationSet vset =
      validation_set(field, solver, families, config.validation_count,
                     derive_stream(config.seed, {0x7A11DA7E}));

  ConvergenceCurve curve;
  curve.config = config;
  curve.N = N;
  curve.m_values = config.m_values;
  const int n_m = static_cast<int>(config.m_values.size());
  curve.quartile1.resize(n_m);
  curve.median.resize(n_m);
  curve.quartile3.resize(n_m);
  curve.median_epsilon.resize(n_m);

  std::vector<double> errors(static_cast<std::size_t>(n_m) * config.trials);
  std::vector<double> epsilons(errors.size());
  std::vector<double> devs(errors.size(), 0.0);

  parallel_for(n_m * config.trials, config.threads, [&](int job) {
    const int mi = job / config.trials;
    const int trial = job % config.trials;
    const int M = config.m_values[mi];
    if (M < 1) throw std::invalid_argument("pde_study: M must be >= 1");

    SamplerSpec spec = SamplerSpec::iid(
        config.strategy, config.family, config.d, config.n,
        derive_stream(config.seed, {static_cast<std::uint64_t>(mi),
                                    static_cast<std::uint64_t>(trial), 1}));
    const SampleBatch batch = draw_samples(spec, M);
    const DesignMatrix design = build_design(families, indices, batch);
    Eigen::VectorXd f(M);
    for (int m = 0; m < M; ++m)
      f[m] = qoi(field, solver, batch.points.row(m));
    const WeightVector weights = strategy_weights(design, families);
    auto [A, b] = assemble_system(design, weights, f);
    if (config.strategy == Strategy::CSA) devs[job] = csa_rownorm_dev(A);

    double chosen = 0.0;
    const RecoveryResult fit =
        solve_with_cv(A, b, config.cv_tolerance_factors, &chosen);
    errors[job] = rms_error(fit.coefficients, families, indices, vset);
    epsilons[job] = chosen;
  });

  for (int mi = 0; mi < n_m; ++mi) {
    std::vector<double> errs(errors.begin() + static_cast<std::size_t>(mi) * config.trials,
                             errors.begin() + static_cast<std::size_t>(mi + 1) * config.trials);
    std::vector<double> epss(epsilons.begin() + static_cast<std::size_t>(mi) * config.trials,
                             epsilons.begin() + static_cast<std::size_t>(mi + 1) * config.trials);
    curve.quartile1[mi] = quantile(errs, 0.25);
    curve.median[mi] = quantile(errs, 0.5);
    curve.quartile3[mi] = quantile(errs, 0.75);
    curve.median_epsilon[mi] = quantile(epss, 0.5);
  }
  curve.max_rownorm_dev = *std::max_element(devs.begin(), devs.end());
  return curve;
}

void write_csv(const ConvergenceCurve& curve, std::ostream& os) {
  os << "M,quartile1,median,quartile3,median_epsilon\n";
  for (std::size_t i = 0; i < curve.m_values.size(); ++i)
    format_row(os, {static_cast<double>(curve.m_values[i]), curve.quartile1[i],
                    curve.median[i], curve.quartile3[i], curve.median_epsilon[i]});
}

}  // namespace csa
