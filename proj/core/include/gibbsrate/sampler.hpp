#pragma once

#include <cstdint>
#include <vector>

#include "gibbsrate/families.hpp"
#include "gibbsrate/random.hpp"

namespace gibbsrate {

/// (x, theta): integer data coordinate and real parameter coordinate.
struct JointState {
  long long x = 0;
  double theta = 0.0;

  friend bool operator==(const JointState&, const JointState&) = default;
};

/// Update order. P1 refreshes theta given x; P2 refreshes x given theta.
/// systematic_ktilde runs P1 then P2, systematic_k runs P2 then P1, and
/// random runs P1 with probability scan_weight and P2 otherwise.
struct ScanStrategy {
  enum class Kind { systematic_k, systematic_ktilde, random };

  Kind kind = Kind::systematic_ktilde;
  double scan_weight = 0.5;

  static ScanStrategy systematic_k() { return {Kind::systematic_k, 0.5}; }
  static ScanStrategy systematic_ktilde() { return {Kind::systematic_ktilde, 0.5}; }
  static ScanStrategy random(double scan_weight);
};

void validate_state(const ConjugateFamily& family, const JointState& s);

JointState refresh_theta(const ConjugateFamily& family, JointState s, SplitMix64& rng);
JointState refresh_x(const ConjugateFamily& family, JointState s, SplitMix64& rng);

JointState step(const ConjugateFamily& family, JointState s, const ScanStrategy& strategy, SplitMix64& rng);

/// States s_0, ..., s_steps of one trajectory.
std::vector<JointState> simulate_trajectory(const ConjugateFamily& family, JointState start,
                                            const ScanStrategy& strategy, std::size_t steps, std::uint64_t seed);

struct DecayEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo mean of phi(X_l, Theta_l) over independent random-scan
/// trajectories from s0, one substream per trajectory. Results do not depend
/// on `threads`.
DecayEstimate eigenfunction_decay(const BetaBinomialFamily& family, JointState s0, double scan_weight,
                                  std::size_t steps, std::size_t samples, std::uint64_t seed,
                                  unsigned threads = 1);

}  // namespace gibbsrate
