#ifndef CSA_ORTHOPOLY_HPP
#define CSA_ORTHOPOLY_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "csa/index_set.hpp"

namespace csa {

enum class FamilyType { Jacobi, HermiteExp, LaguerreExp };

/// Descriptor of an orthonormal polynomial family. The density is always
/// normalized to a probability density, so phi_0 == 1 for every family.
///
///   Jacobi(a, b):  density prop. to (1-z)^a (1+z)^b on [-1, 1], a, b >= -1/2
///   HermiteExp:    density prop. to exp(-z^2) on R
///   LaguerreExp:   density prop. to exp(-z)  on [0, inf)
struct FamilyKind {
  FamilyType type = FamilyType::Jacobi;
  double jacobi_a = 0.0;
  double jacobi_b = 0.0;

  static FamilyKind jacobi(double a, double b) {
    return FamilyKind{FamilyType::Jacobi, a, b};
  }
  static FamilyKind legendre() { return jacobi(0.0, 0.0); }
  static FamilyKind hermite() { return FamilyKind{FamilyType::HermiteExp, 0, 0}; }
  static FamilyKind laguerre() { return FamilyKind{FamilyType::LaguerreExp, 0, 0}; }

  bool bounded() const { return type == FamilyType::Jacobi; }
  std::string name() const;
  bool operator==(const FamilyKind& o) const {
    return type == o.type && jacobi_a == o.jacobi_a && jacobi_b == o.jacobi_b;
  }
};

/// Default precompute cap for recurrence tables.
inline constexpr int kDefaultRecurrenceCap = 512;

/// Basis values at a point up to a common positive scale factor, with the
/// natural log of the discarded factor tracked separately. Any ratio of the
/// stored values (Christoffel ratios, row normalization) is independent of
/// log_scale; expand() reconstructs raw values when they fit in a double.
struct WeightedEval {
  Eigen::VectorXd values;
  double log_scale = 0.0;

  double sum_squares() const { return values.squaredNorm(); }
  /// Raw phi_k(z); may overflow to +-inf for extreme arguments.
  double expand(int k) const { return values[k] * std::exp(log_scale); }
};

/// Orthonormal polynomial family with precomputed recurrence coefficients
///   phi_{k+1}(z) = ((z - a_k) phi_k(z) - b_k phi_{k-1}(z)) / b_{k+1}
/// for the probability-normalized density. Immutable after construction and
/// safe to share across threads.
class BasisFamily {
 public:
  BasisFamily(FamilyKind kind, int n_max);

  const FamilyKind& kind() const { return kind_; }
  int n_max() const { return n_max_; }
  double a(int k) const { return a_[k]; }
  double b(int k) const { return b_[k]; }

  double support_lo() const;
  double support_hi() const;
  bool in_support(double z) const;

 private:
  FamilyKind kind_;
  int n_max_;
  std::vector<double> a_, b_;
};

/// Build the recurrence table for a family; throws std::domain_error for
/// parameters outside the supported families.
BasisFamily recurrence_table(FamilyKind kind, int n_max);

/// Evaluate phi_0..phi_n at z with dynamic rescaling. Throws
/// std::domain_error when z is outside the support and std::invalid_argument
/// when n exceeds the family's table.
WeightedEval eval_basis(const BasisFamily& family, int n, double z);

/// Tensor-product evaluation over a multi-index set: values proportional to
/// phi_lambda(z) = prod_j phi_{lambda_j}(z_j), one entry per index of the
/// set, with per-dimension scales summed in log space.
WeightedEval tensor_eval(const std::vector<BasisFamily>& families,
                         const MultiIndexSet& indices,
                         const Eigen::VectorXd& z);

struct QuadRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;  // sums to 1 (probability-normalized density)
};

/// K-node Gauss rule for the family's density via Golub-Welsch on the
/// recurrence table; exact for polynomials of degree <= 2K-1.
QuadRule gauss_rule(const BasisFamily& family, int K);

/// Gauss-Legendre rule on [-1, 1] with weight 1 (weights sum to 2),
/// computed by Newton iteration; usable at large K.
QuadRule gauss_legendre(int K);

}  // namespace csa

#endif
