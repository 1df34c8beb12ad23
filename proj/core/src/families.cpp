#include "gibbsrate/families.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/negative_binomial.hpp>

#include "gibbsrate/errors.hpp"

namespace gibbsrate {

namespace {

constexpr double kTruncationTolerance = 1e-12;

double log_beta(double p, double q) { return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q); }

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log P(K = k) for K ~ NegativeBinomial(size, prob): failures before `size` successes.
double nb_log_pmf(int k, double size, double prob) {
  return std::lgamma(k + size) - std::lgamma(size) - std::lgamma(k + 1.0) + size * std::log(prob) +
         k * std::log1p(-prob);
}

double nb_upper_tail(int cut, double size, double prob) {
  boost::math::negative_binomial_distribution<double> nb(size, prob);
  return boost::math::cdf(boost::math::complement(nb, static_cast<double>(cut)));
}

void require_uniform_prior(const BetaBinomialFamily& f) {
  if (!f.uniform_prior()) {
    throw Error(Errc::unsupported_prior, "closed-form constants are available only for a = b = 1");
  }
}

// Posterior of theta given x is Gamma(shape + x, rate + 1); the next x is
// Poisson(theta), so x' | x is negative binomial with this success probability.
double pg_row_prob(const PoissonGammaFamily& f) { return (f.rate() + 1.0) / (f.rate() + 2.0); }

std::vector<SpectralLevel> numeric_levels(const std::vector<double>& spectrum, std::size_t first_k) {
  std::vector<SpectralLevel> out;
  for (std::size_t k = first_k; k < spectrum.size(); ++k) {
    double p = spectrum[k];
    if (p < 0.0 && p > -1e-10) p = 0.0;
    if (p > 1.0 && p < 1.0 + 1e-10) p = 1.0;
    out.push_back({static_cast<int>(k), p, std::nullopt, std::nullopt});
  }
  return out;
}

}  // namespace

DriftMinorization::DriftMinorization(double lambda_, double b_, LogMagnitude epsilon_, double v_x0_)
    : lambda(lambda_), b(b_), epsilon(epsilon_), v_x0(v_x0_) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw Error(Errc::domain, "drift rate lambda must lie in [0, 1)");
  if (!(b >= 0.0) || !std::isfinite(b)) throw Error(Errc::domain, "drift constant b must be >= 0");
  if (epsilon.is_zero() || epsilon.log() > 0.0) throw Error(Errc::domain, "minorization mass must lie in (0, 1]");
  if (!(v_x0 >= 0.0) || !std::isfinite(v_x0)) throw Error(Errc::domain, "V(x0) must be >= 0");
}

BetaBinomialFamily::BetaBinomialFamily(int trials, double a, double b) : n_(trials), a_(a), b_(b) {
  if (n_ < 1) throw Error(Errc::invalid_argument, "beta/binomial needs n >= 1");
  if (!(a_ > 0.0) || !(b_ > 0.0) || !std::isfinite(a_) || !std::isfinite(b_)) {
    throw Error(Errc::invalid_argument, "beta prior shapes must be positive");
  }
}

PoissonGammaFamily::PoissonGammaFamily(double shape, double rate, int x_max, std::optional<int> start_limit)
    : shape_(shape), rate_(rate), x_max_(x_max), start_limit_(start_limit.value_or(0)) {
  if (!(shape_ > 0.0) || !(rate_ > 0.0) || !std::isfinite(shape_) || !std::isfinite(rate_)) {
    throw Error(Errc::invalid_argument, "gamma shape and rate must be positive");
  }
  if (x_max_ < 1) throw Error(Errc::invalid_argument, "truncation level must be >= 1");
  if (!start_limit) {
    // Largest start whose row still fits; the row tail grows with x.
    int lo = 0;
    int hi = x_max_;
    while (lo < hi) {
      const int mid = lo + (hi - lo + 1) / 2;
      if (row_tail_mass(mid) < kTruncationTolerance) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    start_limit_ = lo;
  }
  if (start_limit_ < 0 || start_limit_ > x_max_) {
    throw Error(Errc::invalid_argument, "start limit must lie in [0, x_max]");
  }
  if (const double t = stationary_tail_mass(); !(t < kTruncationTolerance)) {
    throw Error(Errc::truncation_too_small, "stationary tail beyond x_max is " + std::to_string(t));
  }
  if (const double t = row_tail_mass(start_limit_); !(t < kTruncationTolerance)) {
    throw Error(Errc::truncation_too_small,
                "row from state " + std::to_string(start_limit_) + " loses " + std::to_string(t));
  }
}

double PoissonGammaFamily::row_tail_mass(int x) const {
  if (x < 0) throw Error(Errc::invalid_state, "negative Poisson state");
  return nb_upper_tail(x_max_, shape_ + x, pg_row_prob(*this));
}

double PoissonGammaFamily::stationary_tail_mass() const {
  return nb_upper_tail(x_max_, shape_, rate_ / (rate_ + 1.0));
}

void SpectralData::validate() const {
  double prev = 1.0 + 1e-12;
  for (const auto& level : levels) {
    if (!(level.product >= 0.0 && level.product <= 1.0)) {
      throw Error(Errc::domain, "spectral product outside [0, 1] at level " + std::to_string(level.k));
    }
    if (level.product > prev + 1e-12) {
      throw Error(Errc::domain, "spectral products increase at level " + std::to_string(level.k));
    }
    prev = level.product;
  }
}

XChain bb_xchain(const BetaBinomialFamily& family) {
  const int n = family.trials();
  const double a = family.prior_a();
  const double b = family.prior_b();
  Eigen::MatrixXd k(n + 1, n + 1);
  for (int x = 0; x <= n; ++x) {
    const double log_norm = log_beta(x + a, n - x + b);
    for (int y = 0; y <= n; ++y) {
      k(x, y) = std::exp(log_choose(n, y) + log_beta(x + y + a, 2.0 * n - x - y + b) - log_norm);
    }
  }
  std::vector<double> m(static_cast<std::size_t>(n) + 1);
  const double log_prior = log_beta(a, b);
  for (int x = 0; x <= n; ++x) {
    m[static_cast<std::size_t>(x)] = std::exp(log_choose(n, x) + log_beta(x + a, n - x + b) - log_prior);
  }
  return {StochasticMatrix::with_normalized_rows(std::move(k)), Distribution::normalized(std::move(m))};
}

DriftMinorization bb_drift_minorization(const BetaBinomialFamily& family, int x0) {
  require_uniform_prior(family);
  const int n = family.trials();
  if (x0 < 0 || x0 > n) throw Error(Errc::invalid_state, "x0 outside {0, ..., n}");
  const double rate = static_cast<double>(n) / (n + 2.0);
  return DriftMinorization(rate, rate, LogMagnitude::from_log(-n * std::log(2.0)), static_cast<double>(x0));
}

SpectralData bb_spectral_data(const BetaBinomialFamily& family) {
  require_uniform_prior(family);
  const int n = family.trials();
  const XChain chain = bb_xchain(family);
  const auto spectrum = reversible_spectrum(chain.kernel, chain.stationary);

  SpectralData data;
  data.cutoff = n + 1;
  data.basis_note =
      "p1(x) = x - n/2, q1(theta) = theta - 1/2; E[q1(theta') | x] = mu1 p1(x), "
      "E[p1(x') | theta] = eta1 q1(theta); levels k >= 2 carry the product only";
  data.levels.push_back({1, n / (n + 2.0), 1.0 / (n + 2.0), static_cast<double>(n)});
  for (auto& level : numeric_levels(spectrum, 2)) data.levels.push_back(level);
  data.validate();
  return data;
}

double bb_eigenfunction_phi(const BetaBinomialFamily& family, double x, double theta) {
  require_uniform_prior(family);
  const double n = family.trials();
  if (!(theta >= 0.0 && theta <= 1.0)) throw Error(Errc::domain, "theta must lie in [0, 1]");
  if (!(x >= 0.0 && x <= n)) throw Error(Errc::domain, "x must lie in [0, n]");
  return (x - n / 2.0) + std::sqrt(n * (n + 2.0)) * (theta - 0.5);
}

double pg_transition_pmf(const PoissonGammaFamily& family, int x, int x_next) {
  if (x < 0 || x_next < 0) throw Error(Errc::invalid_state, "negative Poisson state");
  return std::exp(nb_log_pmf(x_next, family.shape() + x, pg_row_prob(family)));
}

XChain pg_xchain(const PoissonGammaFamily& family) {
  const int d = family.x_max() + 1;
  const double prob = pg_row_prob(family);
  Eigen::MatrixXd k(d, d);
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) k(x, y) = std::exp(nb_log_pmf(y, family.shape() + x, prob));
  }
  StochasticMatrix kernel = StochasticMatrix::with_normalized_rows(std::move(k));
  Distribution stationary = stationary_distribution(kernel);
  return {std::move(kernel), std::move(stationary)};
}

SpectralData pg_spectral_data(const PoissonGammaFamily& family, const XChain& chain) {
  if (chain.kernel.dim() != static_cast<std::size_t>(family.x_max()) + 1) {
    throw Error(Errc::dimension_mismatch, "chain does not belong to this family");
  }
  const auto spectrum = reversible_spectrum(chain.kernel, chain.stationary);
  SpectralData data;
  data.basis_note = "numeric spectrum of the truncated x-chain; products only";
  data.levels = numeric_levels(spectrum, 1);
  data.validate();
  return data;
}

SpectralData pg_spectral_data(const PoissonGammaFamily& family) { return pg_spectral_data(family, pg_xchain(family)); }

}  // namespace gibbsrate
