#ifndef CSA_PDE_HPP
#define CSA_PDE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "csa/index_set.hpp"
#include "csa/orthopoly.hpp"

namespace csa {

/// Chebyshev-Gauss-Lobatto collocation grid on [0,1] with the barycentric
/// differentiation matrix; Dirichlet conditions u(0) = u(1) = 0 are imposed
/// by row replacement in the solver.
struct CollocationSolver {
  int P = 0;             // P+1 grid points
  Eigen::VectorXd x;     // ascending nodes on [0,1]
  Eigen::VectorXd bary;  // barycentric weights
  Eigen::MatrixXd D;     // differentiation matrix

  static CollocationSolver make(int P);
  /// Barycentric interpolation of grid values to an arbitrary point.
  double interpolate(const Eigen::VectorXd& values, double xq) const;
};

/// Karhunen-Loeve expansion of the squared-exponential kernel
/// exp(-(x1-x2)^2 / l_c^2) on [0,1], truncated to d terms; eigenfunctions are
/// tabulated on a collocation grid and normalized to unit L2(0,1) norm.
struct KLField {
  int d = 0;
  double corr_len = 0.1;
  double sigma_a = 1.0;
  double mean_a = 0.0;
  Eigen::VectorXd eigenvalues;  // descending
  Eigen::MatrixXd modes;        // (P+1) x d eigenfunction values on the grid
};

/// Nystrom discretization (Gauss-Legendre grid of max(4d, 256) points),
/// dense symmetric eigensolve, top-d pairs extended to `grid`.
KLField kl_decompose(double l_c, int d, const Eigen::VectorXd& grid,
                     double sigma_a, double mean_a);

/// Log-diffusivity field values on the grid for a parameter point z.
Eigen::VectorXd diffusivity(const KLField& field, const Eigen::VectorXd& z);

/// Solve -(a u')' = 1 with u(0) = u(1) = 0 for the sample z.
Eigen::VectorXd solve_sample(const KLField& field, const CollocationSolver& solver,
                             const Eigen::VectorXd& z);

/// Quantity of interest q(z) = u(1/2, z).
double qoi(const KLField& field, const CollocationSolver& solver,
           const Eigen::VectorXd& z);

/// Q germ samples with the matching true QoI values, reusable across
/// surrogates for cross-validated comparisons.
struct ValidationSet {
  Eigen::MatrixXd points;  // Q x d
  Eigen::VectorXd truth;   // q(z_j)
};

ValidationSet validation_set(const KLField& field, const CollocationSolver& solver,
                             const std::vector<BasisFamily>& families, int Q,
                             std::uint64_t seed);

/// Root-mean-square surrogate error over a validation set.
double rms_error(const Eigen::VectorXd& coefficients,
                 const std::vector<BasisFamily>& families,
                 const MultiIndexSet& indices, const ValidationSet& vset);

/// eps_{l2(w)}: RMS of |surrogate - truth| over Q iid draws from w.
double validation_error(const Eigen::VectorXd& coefficients,
                        const std::vector<BasisFamily>& families,
                        const MultiIndexSet& indices, const KLField& field,
                        const CollocationSolver& solver, int Q,
                        std::uint64_t seed);

}  // namespace csa

#endif
