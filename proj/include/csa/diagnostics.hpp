#ifndef CSA_DIAGNOSTICS_HPP
#define CSA_DIAGNOSTICS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "csa/orthopoly.hpp"

namespace csa {

/// Gramian of the Christoffel-weighted basis under the CSA sampling density:
///   R_{k,l} = int_{S_n} phi_{k-1} phi_{l-1} (N lambda_N) v_n dz,
/// with derived square roots and norms.
struct GramianReport {
  FamilyKind family;
  int n = 0;
  Eigen::MatrixXd R;
  Eigen::MatrixXd sqrt_R;      // R^{1/2}
  Eigen::MatrixXd inv_sqrt_R;  // R^{-1/2}
  double norm1_inv_sqrt = 0.0; // |R^{-1/2}|_1 (max column l1 norm)
  double lambda_min = 0.0;
  int quad_points_used = 0;
  bool converged = false;
};

/// Node-doubling quadrature of R: Gauss-Chebyshev abscissae absorb the
/// arcsine density in the bounded case; trigonometrically mapped
/// Gauss-Legendre with the explicit v_n factor covers the unbounded cases.
/// Doubles the node count until the max entry change is < 1e-11.
GramianReport gramian(const BasisFamily& family, int n);

/// Coherence-bound scan: L(n) = max_k sup_z (n+1) lambda_{n+1}(z) phi_k^2(z)
/// over the theorem's domain, evaluated on a Chebyshev-spaced grid
/// (endpoints included) with golden-section refinement of the argmax.
struct CoherenceReport {
  FamilyKind family;
  std::vector<int> degrees;
  std::vector<double> L_values;
  double fitted_exponent = 0.0;  // least-squares slope of log L vs log n
  int grid_points_per_degree = 0;
};

CoherenceReport coherence_scan(const FamilyKind& family,
                               const std::vector<int>& degrees,
                               int points_per_degree = 50);

/// Sample-count recommendation from the recovery condition:
/// ceil(L * |R^{-1/2}|_1^2 * s * log^3(max(s,2)) * log N); natural logs.
long long sample_count_bound(double L, double norm1_inv_sqrt, int s, int N);

/// JSON bodies for report serialization.
std::string to_json(const GramianReport& report);
std::string to_json(const CoherenceReport& report);

}  // namespace csa

#endif
