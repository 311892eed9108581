#include "csa/preconditioner.hpp"

#include <cmath>
#include <stdexcept>

namespace csa {

DesignMatrix build_design(const std::vector<BasisFamily>& families,
                          const MultiIndexSet& indices,
                          const SampleBatch& samples) {
  const int d = indices.dimension();
  if (static_cast<int>(samples.points.cols()) != d)
    throw std::invalid_argument("build_design: sample dimension mismatch");
  const int M = samples.count();
  const int N = indices.size();
  DesignMatrix design{Eigen::MatrixXd(M, N), indices, samples};
  for (int m = 0; m < M; ++m) {
    const WeightedEval e = tensor_eval(families, indices, samples.points.row(m));
    const double factor = std::exp(e.log_scale);
    for (int i = 0; i < N; ++i) {
      const double v = e.values[i] * factor;
      if (!std::isfinite(v))
        throw std::overflow_error("build_design: basis value overflows double");
      design.entries(m, i) = v;
    }
  }
  return design;
}

double christoffel_lambda(const std::vector<BasisFamily>& families,
                          const MultiIndexSet& indices,
                          const Eigen::VectorXd& z) {
  const WeightedEval e = tensor_eval(families, indices, z);
  // 1 / sum phi_i^2 = exp(-2 ls) / sum v_i^2; the ratio keeps the sum finite.
  const double s = e.sum_squares();
  return std::exp(-2.0 * e.log_scale) / s;
}

WeightVector csa_weights(const DesignMatrix& design) {
  const int M = design.rows();
  const double N = design.cols();
  WeightVector wv{Eigen::VectorXd(M), Strategy::CSA};
  for (int m = 0; m < M; ++m) {
    const double row2 = design.entries.row(m).squaredNorm();
    if (!(row2 > 0.0))
      throw std::runtime_error("csa_weights: zero design row");
    wv.w[m] = N / row2;
  }
  return wv;
}

WeightVector unit_weights(int M) {
  return WeightVector{Eigen::VectorXd::Ones(M), Strategy::MC};
}

double family_density(const FamilyKind& kind, double z) {
  switch (kind.type) {
    case FamilyType::Jacobi: {
      if (std::abs(z) > 1.0) return 0.0;
      const double a = kind.jacobi_a, b = kind.jacobi_b;
      // (1-z)^a (1+z)^b / (2^{a+b+1} B(a+1, b+1))
      const double logB = std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                          std::lgamma(a + b + 2.0);
      const double logc = -(a + b + 1.0) * std::log(2.0) - logB;
      return std::exp(logc + a * std::log1p(-z) + b * std::log1p(z));
    }
    case FamilyType::HermiteExp:
      return std::exp(-z * z) / std::sqrt(M_PI);
    case FamilyType::LaguerreExp:
      return z < 0.0 ? 0.0 : std::exp(-z);
  }
  return 0.0;
}

WeightVector asymptotic_weights(Strategy strategy,
                                const std::vector<BasisFamily>& families,
                                const SampleBatch& samples) {
  const int M = samples.count();
  const int d = static_cast<int>(samples.points.cols());
  WeightVector wv{Eigen::VectorXd(M), strategy};
  switch (strategy) {
    case Strategy::AsymptoticBounded: {
      for (const auto& f : families)
        if (!f.kind().bounded())
          throw std::invalid_argument(
              "asymptotic_bounded weights require bounded families");
      for (int m = 0; m < M; ++m) {
        double k = 1.0;
        for (int j = 0; j < d; ++j) {
          const double z = samples.points(m, j);
          k *= std::sqrt(std::max(0.0, 1.0 - z * z)) *
               family_density(families[j].kind(), z);
        }
        wv.w[m] = k;
      }
      break;
    }
    case Strategy::AsymptoticGaussian: {
      for (const auto& f : families)
        if (f.kind().type != FamilyType::HermiteExp)
          throw std::invalid_argument(
              "asymptotic_gaussian weights require Hermite families");
      for (int m = 0; m < M; ++m)
        wv.w[m] = std::exp(-0.5 * samples.points.row(m).squaredNorm());
      break;
    }
    default:
      throw std::invalid_argument("asymptotic_weights: not an asymptotic strategy");
  }
  for (int m = 0; m < M; ++m)
    if (!(wv.w[m] > 0.0) || !std::isfinite(wv.w[m]))
      throw std::runtime_error("asymptotic_weights: non-positive weight");
  return wv;
}

WeightVector strategy_weights(const DesignMatrix& design,
                              const std::vector<BasisFamily>& families) {
  switch (design.samples.spec.strategy) {
    case Strategy::CSA:
      return csa_weights(design);
    case Strategy::MC:
      return unit_weights(design.rows());
    default:
      return asymptotic_weights(design.samples.spec.strategy, families,
                                design.samples);
  }
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> assemble_system(
    const DesignMatrix& design, const WeightVector& weights,
    const Eigen::VectorXd& f) {
  const int M = design.rows();
  if (weights.w.size() != M || f.size() != M)
    throw std::invalid_argument("assemble_system: dimension mismatch");
  const Eigen::VectorXd sw = weights.w.cwiseSqrt();
  return {sw.asDiagonal() * design.entries, sw.cwiseProduct(f)};
}

}  // namespace csa
