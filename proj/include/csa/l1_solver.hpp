#ifndef CSA_L1_SOLVER_HPP
#define CSA_L1_SOLVER_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace csa {

/// Basis pursuit (denoising) instance: minimize |alpha|_1 subject to
/// |A alpha - b|_2 <= epsilon. A is expected to be preconditioned already;
/// columns enter as given (no internal normalization).
struct RecoveryProblem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double epsilon = 0.0;
  int max_steps = 0;   // 0 -> 10 * min(M, N)
  int max_active = 0;  // 0 -> min(M, N)
};

enum class SolveStatus { converged, step_limit, degenerate };

struct RecoveryResult {
  Eigen::VectorXd coefficients;
  double residual_norm = 0.0;
  int steps = 0;
  SolveStatus status = SolveStatus::converged;
  int active_size = 0;
};

/// One homotopy iterate, recorded after each step.
struct PathPoint {
  std::vector<int> active;
  Eigen::VectorXd coefficients;
  double residual_norm = 0.0;
  double max_correlation = 0.0;
};

/// Full LARS homotopy with the LASSO modification: at each step the variable
/// whose absolute correlation ties the maximum enters (lowest index on ties),
/// the coefficients move equiangularly, and any coefficient crossing zero is
/// dropped before the next insertion. Terminates when the residual reaches
/// epsilon, correlations vanish, or a limit is hit.
std::vector<PathPoint> lars_lasso_path(const RecoveryProblem& problem);

/// First iterate on the homotopy path meeting the residual constraint.
RecoveryResult bpdn(const RecoveryProblem& problem);

/// Transformed objective: minimize |T alpha|_1 subject to the same residual
/// constraint, for symmetric positive definite T; solved as a basis pursuit
/// in beta = T alpha and mapped back. Throws when T is ill-conditioned
/// (condition estimate > 1e12).
RecoveryResult bpdn_transformed(const RecoveryProblem& problem,
                                const Eigen::MatrixXd& transform);

}  // namespace csa

#endif
