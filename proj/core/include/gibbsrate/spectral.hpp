#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gibbsrate/families.hpp"
#include "gibbsrate/step_count.hpp"

namespace gibbsrate {

// Random-scan operator with scan weight a (probability of refreshing theta)
// restricted to span{p_k(x), q_k(theta)}: p_k + u q_k is an eigenfunction when
//   a u (1 + mu_k u) = (1 - a)(eta_k + u),
// with eigenvalue (1 +- sqrt((1 - 2a)^2 + 4a(1 - a) mu_k eta_k)) / 2.
// Levels beyond a finite cutoff contribute the eigenvalue 1 - a.

struct CouplingRoots {
  double u_plus = 0.0;
  double u_minus = 0.0;
  /// mu = 0: the quadratic degenerates to a linear equation with one root.
  bool degenerate = false;
};

CouplingRoots coupling_u(double scan_weight, double mu, double eta);

/// a u (1 + mu u) - (1 - a)(eta + u)
double coupling_residual(double scan_weight, double mu, double eta, double u);

struct ScanLevel {
  int k = 0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  std::optional<double> u_plus;
  std::optional<double> u_minus;
};

struct ScanSpectrum {
  std::vector<ScanLevel> levels;
  std::optional<double> tail_eigenvalue;
  double scan_weight = 0.5;
};

/// (lambda_plus, lambda_minus) for a level with product q = mu_k eta_k.
std::pair<double, double> scan_eigenvalue_pair(double scan_weight, double product);

ScanSpectrum alpha_scan_eigenvalues(double scan_weight, const SpectralData& data);

/// (1 - sqrt((1 - 2a)^2 + 4a(1 - a) q)) / 2
double spectral_gap(double scan_weight, double product);

struct GapMaximum {
  double scan_weight = 0.5;  // golden-section result
  double gap = 0.0;
  double analytic_scan_weight = 0.5;
  double analytic_gap = 0.0;
};

/// Golden-section search over [0, 1] (tolerance 1e-9), with the closed-form
/// optimum alongside for cross-checking.
GapMaximum argmax_gap(double product);

/// constant * lambda^l, computed through logs.
double eigen_lower_bound(double lambda, const StepCount& steps, double constant = 1.0 / 3.0);

/// Test-function lower bound for a reversible chain: if K f = lambda f and
/// pi(f) = 0, then TV(K^l(x, .), pi) >= |lambda|^l |f(x)| / (2 sup|f|).
/// `normalized_value` is |f(x)| / sup|f|.
double test_function_lower_bound(double lambda, const StepCount& steps, double normalized_value);

}  // namespace gibbsrate
