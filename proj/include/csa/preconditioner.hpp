#ifndef CSA_PRECONDITIONER_HPP
#define CSA_PRECONDITIONER_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "csa/index_set.hpp"
#include "csa/orthopoly.hpp"
#include "csa/sampling.hpp"

namespace csa {

/// Vandermonde-type design matrix Phi_{m,i} = phi_i(Z^(m)), columns ordered
/// by the index set.
struct DesignMatrix {
  Eigen::MatrixXd entries;  // M x N
  MultiIndexSet indices;
  SampleBatch samples;

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }
};

/// Assemble the design matrix. Throws if any entry fails to fit in a double
/// (use the scale-tracked paths for diagnostics at extreme degrees instead).
DesignMatrix build_design(const std::vector<BasisFamily>& families,
                          const MultiIndexSet& indices,
                          const SampleBatch& samples);

/// Christoffel function lambda_Lambda(z) = 1 / sum_i phi_i(z)^2, computed
/// from scale-tracked evaluations so the result is finite even where the raw
/// phi_i overflow. Satisfies 0 < lambda <= 1.
double christoffel_lambda(const std::vector<BasisFamily>& families,
                          const MultiIndexSet& indices,
                          const Eigen::VectorXd& z);

struct WeightVector {
  Eigen::VectorXd w;  // diagonal of W, all entries finite and > 0
  Strategy strategy = Strategy::CSA;
};

/// Christoffel preconditioner weights w_m = N * lambda(Z^(m)) = N / |row_m|^2.
/// Every row of sqrt(W) * Phi then has Euclidean norm exactly sqrt(N).
WeightVector csa_weights(const DesignMatrix& design);

/// Unit weights (plain Monte Carlo).
WeightVector unit_weights(int M);

/// Asymptotic-strategy weights: k(z) = prod_j (1-z_j^2)^{1/2} w(z) for the
/// bounded strategy, k(z) = exp(-|z|^2/2) for the Gaussian strategy.
WeightVector asymptotic_weights(Strategy strategy,
                                const std::vector<BasisFamily>& families,
                                const SampleBatch& samples);

/// Weights for whatever strategy produced the batch.
WeightVector strategy_weights(const DesignMatrix& design,
                              const std::vector<BasisFamily>& families);

/// (A, b) = (sqrt(W) Phi, sqrt(W) f): row scaling by sqrt(w_m).
std::pair<Eigen::MatrixXd, Eigen::VectorXd> assemble_system(
    const DesignMatrix& design, const WeightVector& weights,
    const Eigen::VectorXd& f);

/// Probability-normalized orthogonality density of one family at z.
double family_density(const FamilyKind& kind, double z);

}  // namespace csa

#endif
