#include "csa/l1_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace csa {

namespace {

constexpr double kCorrTol = 1e-10;       // vanishing-correlation termination
constexpr double kGammaTol = 1e-12;      // smallest admissible event step
constexpr double kRankTolFactor = 1e-12; // Cholesky pivot tolerance

// Incrementally maintained Cholesky factor of the active Gram matrix.
class ActiveGram {
 public:
  explicit ActiveGram(const Eigen::MatrixXd& A) : A_(A) {
    const int cap = static_cast<int>(std::min(A.rows(), A.cols()));
    L_.setZero(cap, cap);
  }

  int size() const { return k_; }

  // Append column j; returns false when the extended Gram is numerically
  // rank deficient.
  bool append(int j, const std::vector<int>& active) {
    const auto col = A_.col(j);
    const double d2 = col.squaredNorm();
    Eigen::VectorXd v(k_);
    for (int i = 0; i < k_; ++i) v[i] = A_.col(active[i]).dot(col);
    // Solve L x = v.
    Eigen::VectorXd x = L_.topLeftCorner(k_, k_)
                            .triangularView<Eigen::Lower>()
                            .solve(v);
    const double rem = d2 - x.squaredNorm();
    if (!(rem > kRankTolFactor * d2)) return false;
    L_.row(k_).head(k_) = x.transpose();
    L_(k_, k_) = std::sqrt(rem);
    ++k_;
    return true;
  }

  // Rebuild from scratch for the given active set (used after drops).
  bool rebuild(const std::vector<int>& active) {
    k_ = 0;
    std::vector<int> prefix;
    prefix.reserve(active.size());
    for (int j : active) {
      if (!append(j, prefix)) return false;
      prefix.push_back(j);
    }
    return true;
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd y =
        L_.topLeftCorner(k_, k_).triangularView<Eigen::Lower>().solve(rhs);
    return L_.topLeftCorner(k_, k_)
        .triangularView<Eigen::Lower>()
        .transpose()
        .solve(y);
  }

 private:
  const Eigen::MatrixXd& A_;
  Eigen::MatrixXd L_;
  int k_ = 0;
};

struct SolverState {
  std::vector<int> active;
  Eigen::VectorXd coef;     // full length N; zero outside active
  Eigen::VectorXd residual;
  double residual_norm = 0.0;
  double max_corr = 0.0;
  int steps = 0;
  SolveStatus status = SolveStatus::converged;
};

// Core homotopy. The observer is called after every completed step.
SolverState run_path(const RecoveryProblem& problem,
                     const std::function<void(const SolverState&)>& observer) {
  const Eigen::MatrixXd& A = problem.A;
  const Eigen::VectorXd& b = problem.b;
  const int M = static_cast<int>(A.rows());
  const int N = static_cast<int>(A.cols());
  if (M < 1 || N < 1 || b.size() != M)
    throw std::invalid_argument("bpdn: inconsistent problem dimensions");
  if (problem.epsilon < 0.0)
    throw std::invalid_argument("bpdn: epsilon must be >= 0");
  for (int j = 0; j < N; ++j)
    if (!(A.col(j).norm() > 0.0))
      throw std::invalid_argument("bpdn: zero column in system matrix");

  const int max_steps =
      problem.max_steps > 0 ? problem.max_steps : 10 * std::min(M, N);
  const int max_active =
      problem.max_active > 0 ? std::min(problem.max_active, std::min(M, N))
                             : std::min(M, N);
  const double eps = problem.epsilon;
  const double feas_tol = 1e-10 * std::max(1.0, b.norm());

  SolverState st;
  st.coef = Eigen::VectorXd::Zero(N);
  st.residual = b;
  st.residual_norm = b.norm();

  if (st.residual_norm <= eps + feas_tol) return st;  // alpha = 0 feasible

  ActiveGram gram(A);
  std::vector<double> signs;
  std::vector<char> is_active(N, 0);
  bool skip_insert = false;

  while (st.steps < max_steps) {
    Eigen::VectorXd c = A.transpose() * st.residual;
    st.max_corr = c.cwiseAbs().maxCoeff();
    if (st.max_corr < kCorrTol) {
      // Correlations vanished: residual is as small as the dictionary allows.
      st.status = st.residual_norm <= eps + feas_tol ? SolveStatus::converged
                                                     : SolveStatus::degenerate;
      return st;
    }

    if (!skip_insert && static_cast<int>(st.active.size()) < max_active) {
      // Enter the inactive variable tying the maximum correlation
      // (lowest index first on ties).
      int enter = -1;
      double best = -1.0;
      for (int j = 0; j < N; ++j) {
        if (is_active[j]) continue;
        const double v = std::abs(c[j]);
        if (v > best * (1.0 + 1e-14)) {
          best = v;
          enter = j;
        }
      }
      if (enter >= 0 && best >= st.max_corr * (1.0 - 1e-9)) {
        if (!gram.append(enter, st.active)) {
          st.status = SolveStatus::degenerate;
          return st;
        }
        st.active.push_back(enter);
        is_active[enter] = 1;
        signs.push_back(c[enter] >= 0.0 ? 1.0 : -1.0);
      }
    }
    skip_insert = false;

    const int k = static_cast<int>(st.active.size());
    if (k == 0) {  // no admissible direction
      st.status = SolveStatus::degenerate;
      return st;
    }

    // Equiangular direction: G w = s, u = A_active w. Active correlations
    // then decay uniformly, c_j(gamma) = s_j (C - gamma).
    Eigen::VectorXd s(k);
    for (int i = 0; i < k; ++i) s[i] = signs[i];
    const Eigen::VectorXd w = gram.solve(s);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(M);
    for (int i = 0; i < k; ++i) u += w[i] * A.col(st.active[i]);
    const Eigen::VectorXd a = A.transpose() * u;

    const double C = st.max_corr;
    // Full correlation decay (least-squares point of the active set) caps the
    // step; ties of entering columns at this point resolve by continuing the
    // path, so it is not itself terminal.
    double gamma = C;
    enum class Event { full, enter, drop, residual } event = Event::full;
    int event_index = -1;

    // Entering events.
    if (static_cast<int>(st.active.size()) < max_active) {
      for (int j = 0; j < N; ++j) {
        if (is_active[j]) continue;
        const double cands[2] = {(C - c[j]) / (1.0 - a[j]),
                                 (C + c[j]) / (1.0 + a[j])};
        for (double g : cands) {
          if (g > kGammaTol && g < gamma * (1.0 - 1e-14)) {
            gamma = g;
            event = Event::enter;
            event_index = j;
          }
        }
      }
    }

    // Drop events (LASSO modification): coefficient sign crossings.
    for (int i = 0; i < k; ++i) {
      const double ci = st.coef[st.active[i]];
      if (w[i] != 0.0) {
        const double g = -ci / w[i];
        if (g > kGammaTol && g < gamma * (1.0 - 1e-14)) {
          gamma = g;
          event = Event::drop;
          event_index = i;
        }
      }
    }

    // Residual event: first gamma with |r - gamma u|_2 = eps. When the
    // discriminant is negative the constraint is unreachable along this
    // direction unless the best achievable residual already meets it.
    {
      const double uu = u.squaredNorm();
      const double ru = st.residual.dot(u);
      const double rr = st.residual.squaredNorm();
      const double disc = ru * ru - uu * (rr - eps * eps);
      double g = -1.0;
      if (disc >= 0.0) {
        g = (ru - std::sqrt(disc)) / uu;
      } else {
        const double best2 = rr - ru * ru / uu;  // residual at the minimizer
        if (std::sqrt(std::max(best2, 0.0)) <= eps + feas_tol) g = ru / uu;
      }
      if (g > 0.0 && g <= gamma) {
        gamma = g;
        event = Event::residual;
        event_index = -1;
      }
    }

    // Apply the step and refresh the residual from the coefficients.
    for (int i = 0; i < k; ++i) st.coef[st.active[i]] += gamma * w[i];
    st.residual = b;
    for (int i = 0; i < k; ++i)
      st.residual -= st.coef[st.active[i]] * A.col(st.active[i]);
    st.residual_norm = st.residual.norm();
    ++st.steps;

    switch (event) {
      case Event::drop: {
        const int pos = event_index;
        st.coef[st.active[pos]] = 0.0;
        is_active[st.active[pos]] = 0;
        st.active.erase(st.active.begin() + pos);
        signs.erase(signs.begin() + pos);
        if (!gram.rebuild(st.active)) {
          st.status = SolveStatus::degenerate;
          observer(st);
          return st;
        }
        skip_insert = true;  // drops are processed before the next insertion
        break;
      }
      case Event::residual:
        st.status = SolveStatus::converged;
        observer(st);
        return st;
      case Event::full:
      case Event::enter:
        break;
    }
    observer(st);
    if (st.residual_norm <= eps + feas_tol) {
      st.status = SolveStatus::converged;
      return st;
    }
  }
  st.status = SolveStatus::step_limit;
  return st;
}

}  // namespace

std::vector<PathPoint> lars_lasso_path(const RecoveryProblem& problem) {
  std::vector<PathPoint> path;
  auto record = [&](const SolverState& st) {
    PathPoint p;
    p.active = st.active;
    p.coefficients = st.coef;
    p.residual_norm = st.residual_norm;
    p.max_correlation = st.max_corr;
    path.push_back(std::move(p));
  };
  run_path(problem, record);
  return path;
}

RecoveryResult bpdn(const RecoveryProblem& problem) {
  SolverState st = run_path(problem, [](const SolverState&) {});
  // Basis pursuit terminates at the interpolation point of the final active
  // set; a least-squares refit on that support removes the accumulated
  // homotopy roundoff.
  if (problem.epsilon == 0.0 && st.status == SolveStatus::converged &&
      !st.active.empty()) {
    Eigen::MatrixXd sub(problem.A.rows(), st.active.size());
    for (std::size_t i = 0; i < st.active.size(); ++i)
      sub.col(i) = problem.A.col(st.active[i]);
    const Eigen::VectorXd refit = sub.colPivHouseholderQr().solve(problem.b);
    const double resid = (sub * refit - problem.b).norm();
    if (resid <= st.residual_norm) {
      for (std::size_t i = 0; i < st.active.size(); ++i)
        st.coef[st.active[i]] = refit[i];
      st.residual_norm = resid;
    }
  }
  RecoveryResult res;
  res.coefficients = st.coef;
  res.residual_norm = st.residual_norm;
  res.steps = st.steps;
  res.status = st.status;
  res.active_size = static_cast<int>(st.active.size());
  return res;
}

RecoveryResult bpdn_transformed(const RecoveryProblem& problem,
                                const Eigen::MatrixXd& transform) {
  const int N = static_cast<int>(problem.A.cols());
  if (transform.rows() != N || transform.cols() != N)
    throw std::invalid_argument("bpdn_transformed: transform size mismatch");
  if (transform == Eigen::MatrixXd::Identity(N, N)) return bpdn(problem);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(transform);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12)
    throw std::invalid_argument("bpdn_transformed: ill-conditioned transform");

  // min |beta|_1 s.t. |A T^{-1} beta - b| <= eps, then alpha = T^{-1} beta.
  const Eigen::MatrixXd Tinv =
      es.eigenvectors() *
      es.eigenvalues().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();
  RecoveryProblem sub = problem;
  sub.A = problem.A * Tinv;
  RecoveryResult res = bpdn(sub);
  res.coefficients = Tinv * res.coefficients;
  res.residual_norm = (problem.A * res.coefficients - problem.b).norm();
  return res;
}

}  // namespace csa
