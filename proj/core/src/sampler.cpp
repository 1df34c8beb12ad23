#include "gibbsrate/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "gibbsrate/errors.hpp"

// Variates come from libstdc++'s std::gamma_distribution (Marsaglia-Tsang),
// std::binomial_distribution and std::poisson_distribution driven by
// SplitMix64; Beta(a, b) is G_a / (G_a + G_b). Streams are reproducible for a
// fixed standard library.

namespace gibbsrate {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double draw_gamma(double shape, double scale, SplitMix64& rng) {
  return std::gamma_distribution<double>(shape, scale)(rng);
}

double draw_beta(double a, double b, SplitMix64& rng) {
  const double g1 = draw_gamma(a, 1.0, rng);
  const double g2 = draw_gamma(b, 1.0, rng);
  return g1 / (g1 + g2);
}

}  // namespace

ScanStrategy ScanStrategy::random(double scan_weight) {
  if (!(scan_weight >= 0.0 && scan_weight <= 1.0)) {
    throw Error(Errc::invalid_argument, "scan weight must lie in [0, 1]");
  }
  return {Kind::random, scan_weight};
}

void validate_state(const ConjugateFamily& family, const JointState& s) {
  std::visit(overloaded{
                 [&](const BetaBinomialFamily& f) {
                   if (s.x < 0 || s.x > f.trials()) throw Error(Errc::invalid_state, "x outside {0, ..., n}");
                   if (!(s.theta >= 0.0 && s.theta <= 1.0)) {
                     throw Error(Errc::invalid_state, "theta outside [0, 1]");
                   }
                 },
                 [&](const PoissonGammaFamily&) {
                   if (s.x < 0) throw Error(Errc::invalid_state, "negative count");
                   if (!(s.theta > 0.0) || !std::isfinite(s.theta)) {
                     throw Error(Errc::invalid_state, "theta must be positive");
                   }
                 },
             },
             family);
}

JointState refresh_theta(const ConjugateFamily& family, JointState s, SplitMix64& rng) {
  s.theta = std::visit(overloaded{
                           [&](const BetaBinomialFamily& f) {
                             const double x = static_cast<double>(s.x);
                             return draw_beta(x + f.prior_a(), f.trials() - x + f.prior_b(), rng);
                           },
                           [&](const PoissonGammaFamily& f) {
                             return draw_gamma(static_cast<double>(s.x) + f.shape(), 1.0 / (f.rate() + 1.0), rng);
                           },
                       },
                       family);
  return s;
}

JointState refresh_x(const ConjugateFamily& family, JointState s, SplitMix64& rng) {
  s.x = std::visit(overloaded{
                       [&](const BetaBinomialFamily& f) -> long long {
                         return std::binomial_distribution<long long>(f.trials(), s.theta)(rng);
                       },
                       [&](const PoissonGammaFamily&) -> long long {
                         return std::poisson_distribution<long long>(s.theta)(rng);
                       },
                   },
                   family);
  return s;
}

JointState step(const ConjugateFamily& family, JointState s, const ScanStrategy& strategy, SplitMix64& rng) {
  validate_state(family, s);
  switch (strategy.kind) {
    case ScanStrategy::Kind::systematic_ktilde:
      return refresh_x(family, refresh_theta(family, s, rng), rng);
    case ScanStrategy::Kind::systematic_k:
      return refresh_theta(family, refresh_x(family, s, rng), rng);
    case ScanStrategy::Kind::random: {
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      return u < strategy.scan_weight ? refresh_theta(family, s, rng) : refresh_x(family, s, rng);
    }
  }
  throw Error(Errc::invalid_argument, "unknown scan strategy");
}

std::vector<JointState> simulate_trajectory(const ConjugateFamily& family, JointState start,
                                            const ScanStrategy& strategy, std::size_t steps, std::uint64_t seed) {
  validate_state(family, start);
  SplitMix64 rng = substream(seed, 0);
  std::vector<JointState> path;
  path.reserve(steps + 1);
  path.push_back(start);
  for (std::size_t l = 0; l < steps; ++l) path.push_back(step(family, path.back(), strategy, rng));
  return path;
}

DecayEstimate eigenfunction_decay(const BetaBinomialFamily& family, JointState s0, double scan_weight,
                                  std::size_t steps, std::size_t samples, std::uint64_t seed, unsigned threads) {
  if (!family.uniform_prior()) throw Error(Errc::unsupported_prior, "eigenfunction decay needs a = b = 1");
  if (samples < 1000) throw Error(Errc::invalid_argument, "at least 1000 samples are required");
  const ConjugateFamily fam = family;
  validate_state(fam, s0);
  const ScanStrategy strategy = ScanStrategy::random(scan_weight);
  const double phi0 = bb_eigenfunction_phi(family, static_cast<double>(s0.x), s0.theta);
  if (steps == 0) return {phi0, 0.0};

  std::vector<double> values(samples);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      SplitMix64 rng = substream(seed, t);
      JointState s = s0;
      for (std::size_t l = 0; l < steps; ++l) s = step(fam, s, strategy, rng);
      values[t] = bb_eigenfunction_phi(family, static_cast<double>(s.x), s.theta);
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(samples)));
  if (workers == 1) {
    run(0, samples);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (samples + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(samples, begin + chunk);
      if (begin < end) pool.emplace_back(run, begin, end);
    }
  }

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(samples);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double variance = ss / static_cast<double>(samples - 1);
  return {mean, std::sqrt(variance / static_cast<double>(samples))};
}

}  // namespace gibbsrate
