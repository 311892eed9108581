#ifndef CSA_RNG_HPP
#define CSA_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace csa {

/// splitmix64 finalizer; used for seed mixing and stream derivation.
std::uint64_t mix64(std::uint64_t x);

/// Derive an independent stream seed from a master seed and a list of
/// integer identifiers (cell index, trial index, ...). Different id lists
/// give statistically independent streams.
std::uint64_t derive_stream(std::uint64_t master,
                            std::initializer_list<std::uint64_t> ids);

/// xoshiro256** generator with explicit transforms to common distributions.
///
/// All distributions are implemented from uniform bits so that a given seed
/// produces the same sequence on every platform; nothing here depends on
/// implementation-defined std::*_distribution behavior.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform();
  /// Uniform on [a, b).
  double uniform(double a, double b);
  /// Standard normal (Box-Muller).
  double normal();
  /// Exponential with rate 1.
  double exponential();
  /// Gamma(shape, scale 1), Marsaglia-Tsang; any shape > 0.
  double gamma(double shape);
  /// Beta(a, b) on [0, 1].
  double beta(double a, double b);
  /// Dirichlet with concentration vector alpha; out has alpha.size() entries.
  void dirichlet(const std::vector<double>& alpha, double* out);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace csa

#endif
