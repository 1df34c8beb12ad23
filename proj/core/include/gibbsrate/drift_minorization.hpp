#pragma once

#include "gibbsrate/log_magnitude.hpp"

namespace gibbsrate {

/// Drift/minorization certificate: E[V(next) | x] <= lambda V(x) + b and a
/// one-step minorization with mass epsilon. v_x0 is V at the start state.
struct DriftMinorization {
  DriftMinorization(double lambda, double b, LogMagnitude epsilon, double v_x0);

  double lambda;
  double b;
  LogMagnitude epsilon;
  double v_x0;
};

}  // namespace gibbsrate
