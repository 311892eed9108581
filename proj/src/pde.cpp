#include "csa/pde.hpp"

#include <cmath>
#include <stdexcept>

#include "csa/sampling.hpp"

namespace csa {

CollocationSolver CollocationSolver::make(int P) {
  if (P < 2) throw std::invalid_argument("collocation: P must be >= 2");
  CollocationSolver s;
  s.P = P;
  s.x.resize(P + 1);
  s.bary.resize(P + 1);
  for (int j = 0; j <= P; ++j) {
    s.x[j] = 0.5 * (1.0 - std::cos(M_PI * j / P));
    s.bary[j] = (j % 2 == 0 ? 1.0 : -1.0);
  }
  s.bary[0] *= 0.5;
  s.bary[P] *= 0.5;

  s.D.resize(P + 1, P + 1);
  for (int i = 0; i <= P; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j <= P; ++j) {
      if (j == i) continue;
      s.D(i, j) = (s.bary[j] / s.bary[i]) / (s.x[i] - s.x[j]);
      row_sum += s.D(i, j);
    }
    s.D(i, i) = -row_sum;  // derivative of constants vanishes
  }
  return s;
}

double CollocationSolver::interpolate(const Eigen::VectorXd& values,
                                      double xq) const {
  double num = 0.0, den = 0.0;
  for (int j = 0; j <= P; ++j) {
    const double dx = xq - x[j];
    if (std::abs(dx) < 1e-14) return values[j];
    const double t = bary[j] / dx;
    num += t * values[j];
    den += t;
  }
  return num / den;
}

KLField kl_decompose(double l_c, int d, const Eigen::VectorXd& grid,
                     double sigma_a, double mean_a) {
  if (!(l_c > 0.0)) throw std::invalid_argument("kl_decompose: l_c must be > 0");
  if (d < 1) throw std::invalid_argument("kl_decompose: d must be >= 1");
  const int G = std::max(4 * d, 256);
  if (d > G) throw std::invalid_argument("kl_decompose: d exceeds grid size");

  // Gauss-Legendre quadrature mapped to [0,1].
  const QuadRule gl = gauss_legendre(G);
  Eigen::VectorXd xs(G), ws(G);
  for (int i = 0; i < G; ++i) {
    xs[i] = 0.5 * (gl.nodes[i] + 1.0);
    ws[i] = 0.5 * gl.weights[i];
  }

  auto kernel = [l_c](double x1, double x2) {
    const double r = (x1 - x2) / l_c;
    return std::exp(-r * r);
  };

  Eigen::MatrixXd B(G, G);
  const Eigen::VectorXd sqw = ws.cwiseSqrt();
  for (int i = 0; i < G; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = sqw[i] * kernel(xs[i], xs[j]) * sqw[j];
      B(i, j) = v;
      B(j, i) = v;
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);  // ascending
  KLField field;
  field.d = d;
  field.corr_len = l_c;
  field.sigma_a = sigma_a;
  field.mean_a = mean_a;
  field.eigenvalues.resize(d);
  field.modes.resize(grid.size(), d);

  const double top = es.eigenvalues()(G - 1);
  for (int k = 0; k < d; ++k) {
    const double gamma = es.eigenvalues()(G - 1 - k);
    if (!(gamma > 1e-14 * top))
      throw std::runtime_error(
          "kl_decompose: requested dimension exceeds numerically positive spectrum");
    field.eigenvalues[k] = gamma;
    // phi on the quadrature grid; sign fixed by the largest-magnitude entry.
    Eigen::VectorXd phi = es.eigenvectors().col(G - 1 - k).cwiseQuotient(sqw);
    int arg = 0;
    phi.cwiseAbs().maxCoeff(&arg);
    if (phi[arg] < 0.0) phi = -phi;
    // Nystrom extension to the requested grid.
    for (int i = 0; i < grid.size(); ++i) {
      double acc = 0.0;
      for (int j = 0; j < G; ++j) acc += ws[j] * kernel(grid[i], xs[j]) * phi[j];
      field.modes(i, k) = acc / gamma;
    }
  }
  return field;
}

Eigen::VectorXd diffusivity(const KLField& field, const Eigen::VectorXd& z) {
  if (z.size() != field.d)
    throw std::invalid_argument("diffusivity: parameter dimension mismatch");
  Eigen::VectorXd log_a =
      Eigen::VectorXd::Constant(field.modes.rows(), field.mean_a);
  for (int k = 0; k < field.d; ++k)
    log_a += field.sigma_a * std::sqrt(field.eigenvalues[k]) * z[k] *
             field.modes.col(k);
  Eigen::VectorXd a = log_a.array().exp();
  if (!a.allFinite())
    throw std::runtime_error("diffusivity: field overflows for extreme sample");
  return a;
}

Eigen::VectorXd solve_sample(const KLField& field, const CollocationSolver& solver,
                             const Eigen::VectorXd& z) {
  if (field.modes.rows() != solver.x.size())
    throw std::invalid_argument("solve_sample: field tabulated on a different grid");
  const int P = solver.P;
  const Eigen::VectorXd a = diffusivity(field, z);

  Eigen::MatrixXd op = -solver.D * a.asDiagonal() * solver.D;
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(P + 1);
  op.row(0).setZero();
  op(0, 0) = 1.0;
  rhs[0] = 0.0;
  op.row(P).setZero();
  op(P, P) = 1.0;
  rhs[P] = 0.0;
  return op.partialPivLu().solve(rhs);
}

double qoi(const KLField& field, const CollocationSolver& solver,
           const Eigen::VectorXd& z) {
  return solver.interpolate(solve_sample(field, solver, z), 0.5);
}

ValidationSet validation_set(const KLField& field, const CollocationSolver& solver,
                             const std::vector<BasisFamily>& families, int Q,
                             std::uint64_t seed) {
  if (Q < 1) throw std::invalid_argument("validation_set: Q must be >= 1");
  std::vector<FamilyKind> kinds;
  kinds.reserve(families.size());
  for (const auto& f : families) kinds.push_back(f.kind());
  const SampleBatch batch =
      sample_mc(kinds, static_cast<int>(families.size()), Q, seed);
  ValidationSet vset;
  vset.points = batch.points;
  vset.truth.resize(Q);
  for (int j = 0; j < Q; ++j)
    vset.truth[j] = qoi(field, solver, batch.points.row(j));
  return vset;
}

double rms_error(const Eigen::VectorXd& coefficients,
                 const std::vector<BasisFamily>& families,
                 const MultiIndexSet& indices, const ValidationSet& vset) {
  if (coefficients.size() != indices.size())
    throw std::invalid_argument("rms_error: coefficient/dictionary size mismatch");
  const int Q = static_cast<int>(vset.points.rows());
  double acc = 0.0;
  for (int j = 0; j < Q; ++j) {
    const WeightedEval e = tensor_eval(families, indices, vset.points.row(j));
    const double pred = std::exp(e.log_scale) * e.values.dot(coefficients);
    const double diff = pred - vset.truth[j];
    acc += diff * diff;
  }
  return std::sqrt(acc / Q);
}

double validation_error(const Eigen::VectorXd& coefficients,
                        const std::vector<BasisFamily>& families,
                        const MultiIndexSet& indices, const KLField& field,
                        const CollocationSolver& solver, int Q,
                        std::uint64_t seed) {
  return rms_error(coefficients, families, indices,
                   validation_set(field, solver, families, Q, seed));
}

}  // namespace csa
