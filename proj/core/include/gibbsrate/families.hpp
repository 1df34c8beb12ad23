#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gibbsrate/drift_minorization.hpp"
#include "gibbsrate/stochastic.hpp"

namespace gibbsrate {

/// Binomial(n, theta) data with a Beta(a, b) prior on theta.
class BetaBinomialFamily {
 public:
  explicit BetaBinomialFamily(int trials, double a = 1.0, double b = 1.0);

  int trials() const noexcept { return n_; }
  double prior_a() const noexcept { return a_; }
  double prior_b() const noexcept { return b_; }
  bool uniform_prior() const noexcept { return a_ == 1.0 && b_ == 1.0; }

 private:
  int n_;
  double a_;
  double b_;
};

/// Poisson(theta) data with a Gamma(shape, rate) prior, x-chain truncated to
/// {0, ..., x_max}. start_limit is the largest start state the caller will
/// use; the row from it and the stationary law must each lose < 1e-12 mass
/// to truncation. Without an explicit limit it is the largest state whose row
/// fits.
class PoissonGammaFamily {
 public:
  PoissonGammaFamily(double shape, double rate, int x_max, std::optional<int> start_limit = std::nullopt);

  double shape() const noexcept { return shape_; }
  double rate() const noexcept { return rate_; }
  int x_max() const noexcept { return x_max_; }
  int start_limit() const noexcept { return start_limit_; }
  bool unit_parameters() const noexcept { return shape_ == 1.0 && rate_ == 1.0; }

  /// Mass lost beyond x_max by the transition row from state x.
  double row_tail_mass(int x) const;
  /// Mass of the untruncated stationary law beyond x_max.
  double stationary_tail_mass() const;

 private:
  double shape_;
  double rate_;
  int x_max_;
  int start_limit_;
};

using ConjugateFamily = std::variant<BetaBinomialFamily, PoissonGammaFamily>;

/// Marginal x-chain of a full systematic sweep and its stationary law.
struct XChain {
  StochasticMatrix kernel;
  Distribution stationary;
};

/// One level of the two-component spectral data. mu and eta are present only
/// where the basis normalization pins them; product is always present.
struct SpectralLevel {
  int k = 0;
  double product = 0.0;
  std::optional<double> mu;
  std::optional<double> eta;
};

struct SpectralData {
  std::vector<SpectralLevel> levels;  // k = 1, 2, ...
  std::optional<int> cutoff;          // nullopt: unbounded
  std::string basis_note;

  /// Products in [0,1] and non-increasing in k (1e-12 slack).
  void validate() const;
};

XChain bb_xchain(const BetaBinomialFamily& family);
DriftMinorization bb_drift_minorization(const BetaBinomialFamily& family, int x0);
SpectralData bb_spectral_data(const BetaBinomialFamily& family);
double bb_eigenfunction_phi(const BetaBinomialFamily& family, double x, double theta);

/// Untruncated P(x' | x) of the Poisson-gamma x-chain (a negative binomial).
double pg_transition_pmf(const PoissonGammaFamily& family, int x, int x_next);
XChain pg_xchain(const PoissonGammaFamily& family);
SpectralData pg_spectral_data(const PoissonGammaFamily& family, const XChain& chain);
SpectralData pg_spectral_data(const PoissonGammaFamily& family);

}  // namespace gibbsrate
