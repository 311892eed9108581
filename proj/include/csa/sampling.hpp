#ifndef CSA_SAMPLING_HPP
#define CSA_SAMPLING_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "csa/orthopoly.hpp"

namespace csa {

enum class Strategy { MC, CSA, AsymptoticBounded, AsymptoticGaussian };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

/// Expanded support interval S_n of an equilibrium measure, with the
/// Mhaskar-Rakhmanov-Saff endpoint scaled to degree n.
struct EquilibriumSupport {
  enum class Kind { whole, half, bounded };
  Kind kind = Kind::bounded;
  double alpha = 0.0;   // exponent of the weight exp(-|z|^alpha)
  double mrs_unit = 1;  // a^W or a^H at n = 1
  double a_n = 1;       // n^{1/alpha} * mrs_unit
  double lo = -1, hi = 1;

  static EquilibriumSupport whole(double alpha, int n);
  static EquilibriumSupport half(double alpha, int n);
  static EquilibriumSupport bounded();

  /// a^W = (sqrt(pi) Gamma(alpha/2) / Gamma(alpha/2 + 1/2))^{1/alpha}
  static double mrs_whole(double alpha);
  /// a^H = (2 sqrt(pi) Gamma(alpha) / Gamma(alpha + 1/2))^{1/alpha}
  static double mrs_half(double alpha);
};

struct SamplerSpec {
  Strategy strategy = Strategy::MC;
  std::vector<FamilyKind> families;  // one per dimension (iid when identical)
  int d = 1;
  int n = 1;  // max degree of the dictionary; used by unbounded CSA and
              // asymptotic Gaussian sampling
  std::uint64_t seed = 0;

  static SamplerSpec iid(Strategy strategy, FamilyKind family, int d, int n,
                         std::uint64_t seed);
  void validate() const;
  std::string to_json() const;
};

struct SampleBatch {
  Eigen::MatrixXd points;  // M x d
  SamplerSpec spec;
  int count() const { return static_cast<int>(points.rows()); }
};

/// Unit-scale (n = 1) whole-line equilibrium density for weight
/// exp(-|z|^alpha), alpha > 1, tabulated by singularity-splitting quadrature
/// of the equilibrium-measure integral and normalized to a probability
/// density on [-a^W, a^W]. Inverse-CDF sampling uses monotone cubic
/// interpolation of the tabulated CDF.
class WholeLineEquilibrium {
 public:
  explicit WholeLineEquilibrium(double alpha);

  double alpha() const { return alpha_; }
  double edge() const { return edge_; }  // a^W
  /// Normalized density; exact quadrature evaluation (not interpolated).
  double density(double z) const;
  double cdf(double z) const;
  double quantile(double u) const;

  /// Shared tabulation cache keyed by alpha.
  static std::shared_ptr<const WholeLineEquilibrium> cached(double alpha);

 private:
  double raw_density(double z) const;
  double alpha_, edge_, norm_;
  std::vector<double> grid_, cdf_grid_, slope_fz_, slope_zf_;
};

// --- samplers -------------------------------------------------------------

/// Tensor-product arcsine (Chebyshev) samples on [-1,1]^d.
SampleBatch sample_arcsine(int M, int d, std::uint64_t seed);
/// Whole-line equilibrium samples on S^W_n, weight exp(-|z|^alpha), alpha>1.
SampleBatch sample_whole_equilibrium(double alpha, int n, int M, std::uint64_t seed);
/// Half-line equilibrium samples on S^H_n, weight exp(-|z|^alpha), alpha>1/2.
SampleBatch sample_half_equilibrium(double alpha, int n, int M, std::uint64_t seed);
/// Equilibrium samples of the unit ball, density prop. to (1-|z|^2)^{-1/2}.
SampleBatch sample_ball_equilibrium(int d, int M, std::uint64_t seed);
/// Equilibrium samples of the unit simplex (Dirichlet(1/2,...,1/2) truncated).
SampleBatch sample_simplex_equilibrium(int d, int M, std::uint64_t seed);
/// Conjectured Gaussian-weight equilibrium samples on the ball of radius
/// sqrt(2n).
SampleBatch sample_gaussian_csa(int d, int n, int M, std::uint64_t seed);
/// Conjectured exponential-weight equilibrium samples on {|z|_1 <= 4n, z >= 0}.
SampleBatch sample_exponential_csa(int d, int n, int M, std::uint64_t seed);
/// iid samples from the orthogonality density w itself.
SampleBatch sample_mc(const std::vector<FamilyKind>& families, int d, int M,
                      std::uint64_t seed);
/// Uniform samples of the ball of radius sqrt(2n+1).
SampleBatch sample_asymptotic_gaussian(int d, int n, int M, std::uint64_t seed);

/// Strategy dispatcher used by the experiment drivers.
SampleBatch draw_samples(const SamplerSpec& spec, int M);

/// CSV with a JSON header line describing the spec.
void write_csv(const SampleBatch& batch, std::ostream& os);

}  // namespace csa

#endif
