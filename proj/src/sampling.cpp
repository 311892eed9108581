#include "csa/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "csa/rng.hpp"

namespace csa {

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::MC: return "mc";
    case Strategy::CSA: return "csa";
    case Strategy::AsymptoticBounded: return "asymptotic_bounded";
    case Strategy::AsymptoticGaussian: return "asymptotic_gaussian";
  }
  return "?";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "mc") return Strategy::MC;
  if (name == "csa") return Strategy::CSA;
  if (name == "asymptotic_bounded") return Strategy::AsymptoticBounded;
  if (name == "asymptotic_gaussian") return Strategy::AsymptoticGaussian;
  throw std::invalid_argument("unknown strategy: " + name);
}

double EquilibriumSupport::mrs_whole(double alpha) {
  const double lg = 0.5 * std::log(M_PI) + std::lgamma(0.5 * alpha) -
                    std::lgamma(0.5 * alpha + 0.5);
  return std::exp(lg / alpha);
}

double EquilibriumSupport::mrs_half(double alpha) {
  const double lg = std::log(2.0) + 0.5 * std::log(M_PI) + std::lgamma(alpha) -
                    std::lgamma(alpha + 0.5);
  return std::exp(lg / alpha);
}

EquilibriumSupport EquilibriumSupport::whole(double alpha, int n) {
  if (!(alpha > 1.0)) throw std::domain_error("whole-line exponent must satisfy alpha > 1");
  if (n < 1) throw std::invalid_argument("degree n must be >= 1");
  EquilibriumSupport s;
  s.kind = Kind::whole;
  s.alpha = alpha;
  s.mrs_unit = mrs_whole(alpha);
  s.a_n = std::pow(n, 1.0 / alpha) * s.mrs_unit;
  s.lo = -s.a_n;
  s.hi = s.a_n;
  return s;
}

EquilibriumSupport EquilibriumSupport::half(double alpha, int n) {
  if (!(alpha > 0.5)) throw std::domain_error("half-line exponent must satisfy alpha > 1/2");
  if (n < 1) throw std::invalid_argument("degree n must be >= 1");
  EquilibriumSupport s;
  s.kind = Kind::half;
  s.alpha = alpha;
  s.mrs_unit = mrs_half(alpha);
  s.a_n = std::pow(n, 1.0 / alpha) * s.mrs_unit;
  s.lo = 0.0;
  s.hi = s.a_n;
  return s;
}

EquilibriumSupport EquilibriumSupport::bounded() {
  EquilibriumSupport s;
  s.kind = Kind::bounded;
  s.lo = -1.0;
  s.hi = 1.0;
  s.mrs_unit = 1.0;
  s.a_n = 1.0;
  return s;
}

SamplerSpec SamplerSpec::iid(Strategy strategy, FamilyKind family, int d, int n,
                             std::uint64_t seed) {
  SamplerSpec spec;
  spec.strategy = strategy;
  spec.families.assign(d, family);
  spec.d = d;
  spec.n = n;
  spec.seed = seed;
  return spec;
}

void SamplerSpec::validate() const {
  if (d < 1) throw std::invalid_argument("sampler spec: d must be >= 1");
  if (static_cast<int>(families.size()) != d)
    throw std::invalid_argument("sampler spec: one family per dimension required");
  const bool all_bounded = std::all_of(families.begin(), families.end(),
                                       [](const FamilyKind& f) { return f.bounded(); });
  const bool all_hermite =
      std::all_of(families.begin(), families.end(), [](const FamilyKind& f) {
        return f.type == FamilyType::HermiteExp;
      });
  switch (strategy) {
    case Strategy::AsymptoticBounded:
      if (!all_bounded)
        throw std::invalid_argument(
            "asymptotic_bounded sampling requires bounded (Jacobi) families");
      break;
    case Strategy::AsymptoticGaussian:
      if (!all_hermite)
        throw std::invalid_argument(
            "asymptotic_gaussian sampling requires Hermite families");
      if (n < 1) throw std::invalid_argument("sampler spec: n must be >= 1");
      break;
    case Strategy::CSA:
      if (!all_bounded && n < 1)
        throw std::invalid_argument("sampler spec: unbounded CSA requires n >= 1");
      break;
    case Strategy::MC:
      break;
  }
}

std::string SamplerSpec::to_json() const {
  std::ostringstream os;
  os << "{\"strategy\":\"" << strategy_name(strategy) << "\",\"families\":[";
  for (std::size_t i = 0; i < families.size(); ++i) {
    if (i) os << ',';
    os << '"' << families[i].name() << '"';
  }
  os << "],\"d\":" << d << ",\"n\":" << n << ",\"seed\":" << seed << "}";
  return os.str();
}

// --- general-alpha whole-line equilibrium tabulation ------------------------

namespace {

// Adaptive 7-point Gauss-Legendre quadrature; nodes are interior, so
// integrable endpoint singularities are tolerated.
const double kGL7x[7] = {-0.9491079123427585, -0.7415311855993945,
                         -0.4058451513773972, 0.0,
                         0.4058451513773972,  0.7415311855993945,
                         0.9491079123427585};
const double kGL7w[7] = {0.1294849661688697, 0.2797053914892766,
                         0.3818300505051189, 0.4179591836734694,
                         0.3818300505051189, 0.2797053914892766,
                         0.1294849661688697};

template <typename F>
double gl7(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 7; ++i) sum += kGL7w[i] * f(c + h * kGL7x[i]);
  return sum * h;
}

template <typename F>
double adaptive_gl(const F& f, double a, double b, double tol, int depth) {
  const double whole = gl7(f, a, b);
  const double m = 0.5 * (a + b);
  const double split = gl7(f, a, m) + gl7(f, m, b);
  if (std::abs(whole - split) < tol || depth >= 48) return split;
  return adaptive_gl(f, a, m, 0.5 * tol, depth + 1) +
         adaptive_gl(f, m, b, 0.5 * tol, depth + 1);
}

// Monotone cubic (Fritsch-Carlson) slopes for tabulated data.
std::vector<double> pchip_slopes(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  d[0] = delta[0];
  d[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
      const double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  return d;
}

double pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& d, double xi) {
  if (xi <= x.front()) return y.front();
  if (xi >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), xi);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double h = x[i + 1] - x[i];
  const double t = (xi - x[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
}

}  // namespace

WholeLineEquilibrium::WholeLineEquilibrium(double alpha) : alpha_(alpha) {
  if (!(alpha > 1.0))
    throw std::domain_error("whole-line exponent must satisfy alpha > 1");
  edge_ = EquilibriumSupport::mrs_whole(alpha);

  // Tabulate on the grid z = -edge cos(theta), theta uniform; the CDF is
  // accumulated by Simpson in theta, where the edge square roots of the
  // density turn into smooth trigonometric factors.
  const int G = 2048;
  grid_.resize(G);
  for (int i = 0; i < G; ++i)
    grid_[i] = -edge_ * std::cos(M_PI * i / (G - 1));
  grid_.front() = -edge_;
  grid_.back() = edge_;

  auto theta_integrand = [&](double theta) {
    return raw_density(-edge_ * std::cos(theta)) * edge_ * std::sin(theta);
  };
  std::vector<double> dens_theta(G);
  for (int i = 0; i < G; ++i) dens_theta[i] = theta_integrand(M_PI * i / (G - 1));

  cdf_grid_.assign(G, 0.0);
  const double dtheta = M_PI / (G - 1);
  for (int i = 0; i + 1 < G; ++i) {
    const double fm = theta_integrand(dtheta * (i + 0.5));
    cdf_grid_[i + 1] = cdf_grid_[i] + dtheta / 6.0 *
                       (dens_theta[i] + 4.0 * fm + dens_theta[i + 1]);
  }
  norm_ = cdf_grid_.back();
  for (auto& v : cdf_grid_) v /= norm_;
  // Exact endpoints; strictly increasing interior by positivity of the density.
  cdf_grid_.front() = 0.0;
  cdf_grid_.back() = 1.0;

  slope_fz_ = pchip_slopes(grid_, cdf_grid_);   // z -> F
  slope_zf_ = pchip_slopes(cdf_grid_, grid_);   // F -> z
}

double WholeLineEquilibrium::raw_density(double z) const {
  if (std::abs(z) >= edge_) return 0.0;
  const double a = alpha_;
  // g(u) = |u|^{alpha-1} sgn(u); the integrand is the divided difference of g
  // against the Chebyshev weight, mapped through u = edge * sin(theta).
  auto g = [a](double u) {
    return std::copysign(std::pow(std::abs(u), a - 1.0), u);
  };
  const double gz = g(z);
  auto integrand = [&](double theta) {
    const double u = edge_ * std::sin(theta);
    const double du = u - z;
    if (std::abs(du) < 1e-9 * (std::abs(u) + std::abs(z)) + 1e-300) {
      const double m = 0.5 * (u + z);
      if (m == 0.0) return 0.0;
      return (a - 1.0) * std::pow(std::abs(m), a - 2.0);
    }
    return (g(u) - gz) / du;
  };
  // Split at the kink of g (u = 0) and at u = z.
  const double t0 = 0.0;
  const double tz = std::asin(std::clamp(z / edge_, -1.0, 1.0));
  double breaks[4] = {-M_PI / 2, std::min(t0, tz), std::max(t0, tz), M_PI / 2};
  double total = 0.0;
  for (int p = 0; p < 3; ++p) {
    if (breaks[p + 1] - breaks[p] < 1e-14) continue;
    total += adaptive_gl(integrand, breaks[p], breaks[p + 1], 1e-11, 0);
  }
  return std::sqrt(edge_ * edge_ - z * z) * total;
}

double WholeLineEquilibrium::density(double z) const {
  return raw_density(z) / norm_;
}

double WholeLineEquilibrium::cdf(double z) const {
  return pchip_eval(grid_, cdf_grid_, slope_fz_, z);
}

double WholeLineEquilibrium::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("quantile: u outside [0,1]");
  return pchip_eval(cdf_grid_, grid_, slope_zf_, u);
}

std::shared_ptr<const WholeLineEquilibrium> WholeLineEquilibrium::cached(double alpha) {
  static std::mutex mtx;
  static std::map<double, std::shared_ptr<const WholeLineEquilibrium>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(alpha);
  if (it != cache.end()) return it->second;
  auto ptr = std::make_shared<const WholeLineEquilibrium>(alpha);
  cache.emplace(alpha, ptr);
  return ptr;
}

// --- samplers ---------------------------------------------------------------

namespace {

SampleBatch make_batch(Strategy strategy, int d, int n, std::uint64_t seed, int M) {
  SampleBatch batch;
  batch.spec.strategy = strategy;
  batch.spec.d = d;
  batch.spec.n = n;
  batch.spec.seed = seed;
  batch.points.resize(M, d);
  return batch;
}

void check_m(int M) {
  if (M < 1) throw std::invalid_argument("sample count M must be >= 1");
}

}  // namespace

SampleBatch sample_arcsine(int M, int d, std::uint64_t seed) {
  check_m(M);
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  auto batch = make_batch(Strategy::CSA, d, 0, seed, M);
  Rng rng(seed);
  for (int m = 0; m < M; ++m)
    for (int j = 0; j < d; ++j)
      batch.points(m, j) = std::cos(M_PI * rng.uniform());
  return batch;
}

SampleBatch sample_whole_equilibrium(double alpha, int n, int M, std::uint64_t seed) {
  check_m(M);
  const auto support = EquilibriumSupport::whole(alpha, n);  // validates alpha, n
  auto batch = make_batch(Strategy::CSA, 1, n, seed, M);
  Rng rng(seed);
  const double scale = std::pow(n, 1.0 / alpha);
  if (alpha == 2.0) {
    // Semicircle on [-sqrt(2n), sqrt(2n)] via a symmetric Beta(3/2, 3/2).
    const double r = support.a_n;
    for (int m = 0; m < M; ++m)
      batch.points(m, 0) = r * (2.0 * rng.beta(1.5, 1.5) - 1.0);
  } else {
    auto tab = WholeLineEquilibrium::cached(alpha);
    for (int m = 0; m < M; ++m)
      batch.points(m, 0) = scale * tab->quantile(rng.uniform());
  }
  return batch;
}

SampleBatch sample_half_equilibrium(double alpha, int n, int M, std::uint64_t seed) {
  check_m(M);
  const auto support = EquilibriumSupport::half(alpha, n);
  auto batch = make_batch(Strategy::CSA, 1, n, seed, M);
  Rng rng(seed);
  if (alpha == 1.0) {
    // Explicit Beta(1/2, 3/2) shape on [0, 4n].
    for (int m = 0; m < M; ++m)
      batch.points(m, 0) = support.a_n * rng.beta(0.5, 1.5);
  } else {
    // Transform of the whole-line measure with exponent 2*alpha:
    // Z = n^{1/alpha} 2^{1/alpha} Y^2.
    auto tab = WholeLineEquilibrium::cached(2.0 * alpha);
    const double scale = std::pow(2.0, 1.0 / alpha) * std::pow(n, 1.0 / alpha);
    for (int m = 0; m < M; ++m) {
      const double y = tab->quantile(rng.uniform());
      batch.points(m, 0) = scale * y * y;
    }
  }
  return batch;
}

SampleBatch sample_ball_equilibrium(int d, int M, std::uint64_t seed) {
  check_m(M);
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  auto batch = make_batch(Strategy::CSA, d, 0, seed, M);
  Rng rng(seed);
  Eigen::VectorXd w(d);
  for (int m = 0; m < M; ++m) {
    for (int j = 0; j < d; ++j) w[j] = rng.normal();
    const double r = std::sqrt(rng.beta(0.5 * d, 0.5));
    batch.points.row(m) = (r / w.norm()) * w.transpose();
  }
  return batch;
}

SampleBatch sample_simplex_equilibrium(int d, int M, std::uint64_t seed) {
  check_m(M);
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  auto batch = make_batch(Strategy::CSA, d, 0, seed, M);
  Rng rng(seed);
  const std::vector<double> alpha(d + 1, 0.5);
  std::vector<double> w(d + 1);
  for (int m = 0; m < M; ++m) {
    rng.dirichlet(alpha, w.data());
    for (int j = 0; j < d; ++j) batch.points(m, j) = w[j];
  }
  return batch;
}

SampleBatch sample_gaussian_csa(int d, int n, int M, std::uint64_t seed) {
  check_m(M);
  if (d < 1 || n < 1) throw std::invalid_argument("need d >= 1 and n >= 1");
  auto batch = make_batch(Strategy::CSA, d, n, seed, M);
  Rng rng(seed);
  Eigen::VectorXd y(d);
  for (int m = 0; m < M; ++m) {
    for (int j = 0; j < d; ++j) y[j] = rng.normal();
    const double u = rng.beta(0.5 * d, 0.5 * d + 1.0);
    batch.points.row(m) = (std::sqrt(2.0 * n * u) / y.norm()) * y.transpose();
  }
  return batch;
}

SampleBatch sample_exponential_csa(int d, int n, int M, std::uint64_t seed) {
  check_m(M);
  if (d < 1 || n < 1) throw std::invalid_argument("need d >= 1 and n >= 1");
  auto batch = make_batch(Strategy::CSA, d, n, seed, M);
  Rng rng(seed);
  std::vector<double> alpha(d + 1, 0.5);
  alpha[d] = 0.5 * d + 1.0;
  std::vector<double> w(d + 1);
  for (int m = 0; m < M; ++m) {
    rng.dirichlet(alpha, w.data());
    for (int j = 0; j < d; ++j) batch.points(m, j) = 4.0 * n * w[j];
  }
  return batch;
}

SampleBatch sample_mc(const std::vector<FamilyKind>& families, int d, int M,
                      std::uint64_t seed) {
  check_m(M);
  if (static_cast<int>(families.size()) != d)
    throw std::invalid_argument("sample_mc: one family per dimension required");
  auto batch = make_batch(Strategy::MC, d, 0, seed, M);
  batch.spec.families = families;
  Rng rng(seed);
  for (int m = 0; m < M; ++m) {
    for (int j = 0; j < d; ++j) {
      const auto& f = families[j];
      switch (f.type) {
        case FamilyType::Jacobi:
          // density prop. to (1-z)^a (1+z)^b <=> 2*Beta(b+1, a+1) - 1.
          batch.points(m, j) = 2.0 * rng.beta(f.jacobi_b + 1.0, f.jacobi_a + 1.0) - 1.0;
          break;
        case FamilyType::HermiteExp:
          // density prop. to exp(-z^2): Normal(0, 1/sqrt(2)).
          batch.points(m, j) = rng.normal() / std::sqrt(2.0);
          break;
        case FamilyType::LaguerreExp:
          batch.points(m, j) = rng.exponential();
          break;
      }
    }
  }
  return batch;
}

SampleBatch sample_asymptotic_gaussian(int d, int n, int M, std::uint64_t seed) {
  check_m(M);
  if (d < 1 || n < 1) throw std::invalid_argument("need d >= 1 and n >= 1");
  auto batch = make_batch(Strategy::AsymptoticGaussian, d, n, seed, M);
  Rng rng(seed);
  const double r = std::sqrt(2.0 * n + 1.0);
  Eigen::VectorXd y(d);
  for (int m = 0; m < M; ++m) {
    for (int j = 0; j < d; ++j) y[j] = rng.normal();
    const double radius = r * std::pow(rng.uniform(), 1.0 / d);
    batch.points.row(m) = (radius / y.norm()) * y.transpose();
  }
  return batch;
}

SampleBatch draw_samples(const SamplerSpec& spec, int M) {
  spec.validate();
  check_m(M);
  SampleBatch batch;
  const bool all_bounded =
      std::all_of(spec.families.begin(), spec.families.end(),
                  [](const FamilyKind& f) { return f.bounded(); });
  switch (spec.strategy) {
    case Strategy::MC:
      batch = sample_mc(spec.families, spec.d, M, spec.seed);
      break;
    case Strategy::AsymptoticBounded:
      batch = sample_arcsine(M, spec.d, spec.seed);
      break;
    case Strategy::AsymptoticGaussian:
      batch = sample_asymptotic_gaussian(spec.d, spec.n, M, spec.seed);
      break;
    case Strategy::CSA: {
      const bool all_hermite =
          std::all_of(spec.families.begin(), spec.families.end(),
                      [](const FamilyKind& f) { return f.type == FamilyType::HermiteExp; });
      const bool all_laguerre =
          std::all_of(spec.families.begin(), spec.families.end(),
                      [](const FamilyKind& f) { return f.type == FamilyType::LaguerreExp; });
      if (all_bounded) {
        batch = sample_arcsine(M, spec.d, spec.seed);
      } else if (all_hermite) {
        batch = spec.d == 1
                    ? sample_whole_equilibrium(2.0, spec.n, M, spec.seed)
                    : sample_gaussian_csa(spec.d, spec.n, M, spec.seed);
      } else if (all_laguerre) {
        batch = spec.d == 1
                    ? sample_half_equilibrium(1.0, spec.n, M, spec.seed)
                    : sample_exponential_csa(spec.d, spec.n, M, spec.seed);
      } else {
        throw std::invalid_argument("unsupported family mix for CSA sampling");
      }
      break;
    }
  }
  batch.spec = spec;
  return batch;
}

void write_csv(const SampleBatch& batch, std::ostream& os) {
  os << "# " << batch.spec.to_json() << "\n";
  const int d = static_cast<int>(batch.points.cols());
  for (int j = 0; j < d; ++j) os << (j ? "," : "") << "z" << (j + 1);
  os << "\n";
  char buf[32];
  for (int m = 0; m < batch.points.rows(); ++m) {
    for (int j = 0; j < d; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", batch.points(m, j));
      os << (j ? "," : "") << buf;
    }
    os << "\n";
  }
}

}  // namespace csa
