#include "csa/diagnostics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace csa {

namespace {

// One quadrature node: abscissa and the weight carrying v_n dz (and, for the
// bounded case, the arcsine density).
struct Node {
  double z;
  double weight;
};

std::vector<Node> gramian_nodes(const FamilyKind& kind, int n, int K) {
  std::vector<Node> nodes;
  nodes.reserve(K);
  switch (kind.type) {
    case FamilyType::Jacobi: {
      // Gauss-Chebyshev: equal weights absorb the arcsine density exactly.
      for (int i = 1; i <= K; ++i)
        nodes.push_back({std::cos((2.0 * i - 1.0) * M_PI / (2.0 * K)), 1.0 / K});
      break;
    }
    case FamilyType::HermiteExp: {
      // v_n(z) = 2/(pi r^2) sqrt(r^2 - z^2) on [-r, r], r = sqrt(2n);
      // z = r sin(theta) turns the edge square roots into smooth factors.
      const double r = std::sqrt(2.0 * std::max(n, 1));
      const QuadRule gl = gauss_legendre(K);
      for (int i = 0; i < K; ++i) {
        const double theta = 0.5 * M_PI * gl.nodes[i];
        const double z = r * std::sin(theta);
        const double vn = 2.0 / (M_PI * r * r) * std::sqrt(std::max(0.0, r * r - z * z));
        const double jac = r * std::cos(theta) * 0.5 * M_PI;
        nodes.push_back({z, gl.weights[i] * vn * jac});
      }
      break;
    }
    case FamilyType::LaguerreExp: {
      // v_n(z) = 2/(pi a) sqrt((a - z)/z) on [0, a], a = 4n;
      // z = a sin^2(theta/2) regularizes both endpoint singularities.
      const double a = 4.0 * std::max(n, 1);
      const QuadRule gl = gauss_legendre(K);
      for (int i = 0; i < K; ++i) {
        const double theta = 0.5 * M_PI * (gl.nodes[i] + 1.0);  // (0, pi)
        const double sh = std::sin(0.5 * theta);
        const double z = a * sh * sh;
        const double vn = 2.0 / (M_PI * a) * std::sqrt((a - z) / z);
        const double jac = 0.5 * a * std::sin(theta) * 0.5 * M_PI;
        nodes.push_back({z, gl.weights[i] * vn * jac});
      }
      break;
    }
  }
  return nodes;
}

Eigen::MatrixXd gramian_pass(const BasisFamily& family, int n, int K) {
  const int N = n + 1;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(N, N);
  for (const Node& node : gramian_nodes(family.kind(), n, K)) {
    const WeightedEval e = eval_basis(family, n, node.z);
    const double ratio = static_cast<double>(N) / e.sum_squares();
    R.selfadjointView<Eigen::Lower>().rankUpdate(e.values,
                                                 node.weight * ratio);
  }
  return R.selfadjointView<Eigen::Lower>();
}

}  // namespace

GramianReport gramian(const BasisFamily& family, int n) {
  if (n < 0) throw std::invalid_argument("gramian: n must be >= 0");
  if (n > family.n_max())
    throw std::invalid_argument("gramian: n exceeds recurrence table");

  GramianReport report;
  report.family = family.kind();
  report.n = n;

  const int kNodeCap = 1 << 20;
  Eigen::MatrixXd prev = gramian_pass(family, n, 64);
  for (int K = 128; K <= kNodeCap; K *= 2) {
    Eigen::MatrixXd cur = gramian_pass(family, n, K);
    const double diff = (cur - prev).cwiseAbs().maxCoeff();
    if (diff < 1e-11) {
      report.R = cur;
      report.quad_points_used = K;
      report.converged = true;
      break;
    }
    prev = cur;
  }
  if (!report.converged) {
    std::ostringstream os;
    os << "gramian: quadrature did not converge at node cap for "
       << family.kind().name() << ", n=" << n;
    throw std::runtime_error(os.str());
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(report.R);
  report.lambda_min = es.eigenvalues().minCoeff();
  if (!(report.lambda_min > 0.0))
    throw std::runtime_error("gramian: R is not positive definite");
  const Eigen::VectorXd sq = es.eigenvalues().cwiseSqrt();
  report.sqrt_R =
      es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
  report.inv_sqrt_R = es.eigenvectors() * sq.cwiseInverse().asDiagonal() *
                      es.eigenvectors().transpose();
  report.norm1_inv_sqrt = report.inv_sqrt_R.cwiseAbs().colwise().sum().maxCoeff();
  return report;
}

namespace {

// (n+1) lambda_{n+1}(z) max_k phi_k^2(z), scale-safe.
double coherence_value(const BasisFamily& family, int n, double z) {
  const WeightedEval e = eval_basis(family, n, z);
  const double peak = e.values.cwiseAbs2().maxCoeff();
  return (n + 1.0) * peak / e.sum_squares();
}

double scan_domain_lo(const FamilyKind& kind, int n) {
  switch (kind.type) {
    case FamilyType::Jacobi: return -1.0;
    case FamilyType::HermiteExp: return -std::sqrt(2.0 * n);
    case FamilyType::LaguerreExp: return 0.0;
  }
  return 0.0;
}

double scan_domain_hi(const FamilyKind& kind, int n) {
  switch (kind.type) {
    case FamilyType::Jacobi: return 1.0;
    case FamilyType::HermiteExp: return std::sqrt(2.0 * n);
    case FamilyType::LaguerreExp: return 4.0 * n;
  }
  return 1.0;
}

}  // namespace

CoherenceReport coherence_scan(const FamilyKind& kind,
                               const std::vector<int>& degrees,
                               int points_per_degree) {
  if (degrees.empty())
    throw std::invalid_argument("coherence_scan: empty degree list");
  if (points_per_degree < 10)
    throw std::invalid_argument(
        "coherence_scan: grid too coarse (need at least 10 points per degree)");

  int n_top = 0;
  for (int n : degrees) {
    if (n < 1) throw std::invalid_argument("coherence_scan: degrees must be >= 1");
    n_top = std::max(n_top, n);
  }
  const BasisFamily family = recurrence_table(kind, n_top);

  CoherenceReport report;
  report.family = kind;
  report.degrees = degrees;
  report.grid_points_per_degree = points_per_degree;
  report.L_values.reserve(degrees.size());

  for (int n : degrees) {
    const double lo = scan_domain_lo(kind, n);
    const double hi = scan_domain_hi(kind, n);
    const int K = points_per_degree * (n + 1);
    // Chebyshev-spaced interior points plus both endpoints (the sup is
    // attained at the MRS endpoint for the exponential families).
    std::vector<double> zs;
    zs.reserve(K + 2);
    zs.push_back(lo);
    for (int i = K; i >= 1; --i)
      zs.push_back(0.5 * (lo + hi) +
                   0.5 * (hi - lo) * std::cos((2.0 * i - 1.0) * M_PI / (2.0 * K)));
    zs.push_back(hi);

    double best = 0.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const double g = coherence_value(family, n, zs[i]);
      if (g > best) {
        best = g;
        best_i = i;
      }
    }
    // Golden-section refinement inside the bracketing neighbors.
    {
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double a = zs[best_i > 0 ? best_i - 1 : 0];
      double b = zs[std::min(best_i + 1, zs.size() - 1)];
      double c = b - gr * (b - a), d = a + gr * (b - a);
      double fc = coherence_value(family, n, c);
      double fd = coherence_value(family, n, d);
      for (int it = 0; it < 80 && b - a > 1e-14 * (hi - lo); ++it) {
        if (fc > fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - gr * (b - a);
          fc = coherence_value(family, n, c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + gr * (b - a);
          fd = coherence_value(family, n, d);
        }
      }
      best = std::max({best, fc, fd});
    }
    report.L_values.push_back(best);
  }

  // Least squares slope of log L against log n.
  const std::size_t m = degrees.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(degrees[i]));
    const double y = std::log(report.L_values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  report.fitted_exponent = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
  return report;
}

long long sample_count_bound(double L, double norm1_inv_sqrt, int s, int N) {
  if (!(L > 0.0) || !(norm1_inv_sqrt > 0.0) || s < 1 || N < 1)
    throw std::invalid_argument("sample_count_bound: inputs must be positive");
  const double logs = std::log(std::max(s, 2));
  const double value =
      L * norm1_inv_sqrt * norm1_inv_sqrt * s * logs * logs * logs * std::log(N);
  return static_cast<long long>(std::ceil(value));
}

std::string to_json(const GramianReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"family\":\"" << r.family.name() << "\",\"n\":" << r.n
     << ",\"norm1_inv_sqrt\":" << r.norm1_inv_sqrt
     << ",\"lambda_min\":" << r.lambda_min
     << ",\"quad_points_used\":" << r.quad_points_used
     << ",\"converged\":" << (r.converged ? "true" : "false") << ",\"R\":[";
  for (int i = 0; i < r.R.rows(); ++i) {
    if (i) os << ',';
    os << '[';
    for (int j = 0; j < r.R.cols(); ++j) {
      if (j) os << ',';
      os << r.R(i, j);
    }
    os << ']';
  }
  os << "]}";
  return os.str();
}

std::string to_json(const CoherenceReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"family\":\"" << r.family.name() << "\",\"degrees\":[";
  for (std::size_t i = 0; i < r.degrees.size(); ++i) {
    if (i) os << ',';
    os << r.degrees[i];
  }
  os << "],\"L_values\":[";
  for (std::size_t i = 0; i < r.L_values.size(); ++i) {
    if (i) os << ',';
    os << r.L_values[i];
  }
  os << "],\"fitted_exponent\":" << r.fitted_exponent
     << ",\"grid_points_per_degree\":" << r.grid_points_per_degree << "}";
  return os.str();
}

}  // namespace csa
