#include "csa/orthopoly.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace csa {

namespace {
constexpr double kRescaleThreshold = 1e150;
}

std::string FamilyKind::name() const {
  switch (type) {
    case FamilyType::Jacobi: {
      std::ostringstream os;
      if (jacobi_a == 0.0 && jacobi_b == 0.0) return "legendre";
      os << "jacobi(" << jacobi_a << "," << jacobi_b << ")";
      return os.str();
    }
    case FamilyType::HermiteExp:
      return "hermite";
    case FamilyType::LaguerreExp:
      return "laguerre";
  }
  return "?";
}

BasisFamily::BasisFamily(FamilyKind kind, int n_max) : kind_(kind), n_max_(n_max) {
  if (n_max < 0) throw std::invalid_argument("recurrence_table: n_max must be >= 0");
  a_.assign(n_max + 1, 0.0);
  b_.assign(n_max + 1, 0.0);
  switch (kind.type) {
    case FamilyType::Jacobi: {
      const double a = kind.jacobi_a, b = kind.jacobi_b;
      if (!(a >= -0.5) || !(b >= -0.5))
        throw std::domain_error(
            "out of supported family: Jacobi parameters must be >= -1/2");
      // Monic Jacobi recurrence coefficients for weight (1-z)^a (1+z)^b;
      // the orthonormal table stores b_k = sqrt(beta_k).
      a_[0] = (b - a) / (a + b + 2.0);
      for (int k = 1; k <= n_max; ++k) {
        const double den = (2.0 * k + a + b) * (2.0 * k + a + b + 2.0);
        a_[k] = (b * b - a * a) / den;
      }
      if (n_max >= 1) {
        const double apb = a + b;
        b_[1] = std::sqrt(4.0 * (a + 1.0) * (b + 1.0) /
                          ((apb + 2.0) * (apb + 2.0) * (apb + 3.0)));
        for (int k = 2; k <= n_max; ++k) {
          const double num = 4.0 * k * (k + a) * (k + b) * (k + apb);
          const double den = (2.0 * k + apb) * (2.0 * k + apb) *
                             (2.0 * k + apb + 1.0) * (2.0 * k + apb - 1.0);
          b_[k] = std::sqrt(num / den);
        }
      }
      break;
    }
    case FamilyType::HermiteExp:
      // weight exp(-z^2): monic beta_k = k/2.
      for (int k = 1; k <= n_max; ++k) b_[k] = std::sqrt(0.5 * k);
      break;
    case FamilyType::LaguerreExp:
      // weight exp(-z): monic alpha_k = 2k+1, beta_k = k^2.
      for (int k = 0; k <= n_max; ++k) a_[k] = 2.0 * k + 1.0;
      for (int k = 1; k <= n_max; ++k) b_[k] = static_cast<double>(k);
      break;
  }
}

double BasisFamily::support_lo() const {
  switch (kind_.type) {
    case FamilyType::Jacobi: return -1.0;
    case FamilyType::HermiteExp: return -std::numeric_limits<double>::infinity();
    case FamilyType::LaguerreExp: return 0.0;
  }
  return 0.0;
}

double BasisFamily::support_hi() const {
  switch (kind_.type) {
    case FamilyType::Jacobi: return 1.0;
    default: return std::numeric_limits<double>::infinity();
  }
}

bool BasisFamily::in_support(double z) const {
  return std::isfinite(z) && z >= support_lo() && z <= support_hi();
}

BasisFamily recurrence_table(FamilyKind kind, int n_max) {
  return BasisFamily(kind, n_max);
}

WeightedEval eval_basis(const BasisFamily& family, int n, double z) {
  if (n < 0) throw std::invalid_argument("eval_basis: n must be >= 0");
  if (n > family.n_max())
    throw std::invalid_argument("eval_basis: n exceeds precomputed table cap");
  if (!family.in_support(z))
    throw std::domain_error("eval_basis: point outside family support");

  WeightedEval out;
  out.values.resize(n + 1);
  out.log_scale = 0.0;
  out.values[0] = 1.0;
  if (n == 0) return out;
  out.values[1] = (z - family.a(0)) / family.b(1);
  for (int k = 1; k < n; ++k) {
    out.values[k + 1] =
        ((z - family.a(k)) * out.values[k] - family.b(k) * out.values[k - 1]) /
        family.b(k + 1);
    const double m = std::max(std::abs(out.values[k + 1]), std::abs(out.values[k]));
    if (m > kRescaleThreshold) {
      out.values.head(k + 2) /= m;
      out.log_scale += std::log(m);
    }
  }
  return out;
}

WeightedEval tensor_eval(const std::vector<BasisFamily>& families,
                         const MultiIndexSet& indices,
                         const Eigen::VectorXd& z) {
  const int d = indices.dimension();
  if (static_cast<int>(families.size()) != d || z.size() != d)
    throw std::invalid_argument("tensor_eval: dimension mismatch");

  // Per-dimension values, renormalized so the largest magnitude is 1; the
  // discarded per-dimension factors accumulate into a single log scale.
  double log_scale = 0.0;
  std::vector<Eigen::VectorXd> per_dim(d);
  for (int j = 0; j < d; ++j) {
    WeightedEval e = eval_basis(families[j], indices.max_degree(), z[j]);
    const double m = e.values.cwiseAbs().maxCoeff();
    per_dim[j] = e.values / m;
    log_scale += e.log_scale + std::log(m);
  }

  WeightedEval out;
  out.log_scale = log_scale;
  out.values.resize(indices.size());
  for (int i = 0; i < indices.size(); ++i) {
    double prod = 1.0;
    const auto& idx = indices[i];
    for (int j = 0; j < d; ++j) prod *= per_dim[j][idx[j]];
    out.values[i] = prod;
  }
  return out;
}

QuadRule gauss_rule(const BasisFamily& family, int K) {
  if (K < 1) throw std::invalid_argument("gauss_rule: K must be >= 1");
  if (K - 1 > family.n_max())
    throw std::invalid_argument("gauss_rule: K exceeds recurrence table");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(K, K);
  for (int k = 0; k < K; ++k) J(k, k) = family.a(k);
  for (int k = 1; k < K; ++k) {
    J(k, k - 1) = family.b(k);
    J(k - 1, k) = family.b(k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(K);
  for (int i = 0; i < K; ++i) {
    const double v = es.eigenvectors()(0, i);
    rule.weights[i] = v * v;
  }
  return rule;
}

QuadRule gauss_legendre(int K) {
  if (K < 1) throw std::invalid_argument("gauss_legendre: K must be >= 1");
  QuadRule rule;
  rule.nodes.resize(K);
  rule.weights.resize(K);
  const int mid = (K + 1) / 2;
  for (int i = 0; i < mid; ++i) {
    // Chebyshev-based initial guess, then Newton on P_K.
    double x = std::cos(M_PI * (i + 0.75) / (K + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= K; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = K * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[K - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[K - 1 - i] = w;
  }
  return rule;
}

}  // namespace csa
