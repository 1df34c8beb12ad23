#include "gibbsrate/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "gibbsrate/errors.hpp"

namespace gibbsrate {

namespace {

void require_weight(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw Error(Errc::invalid_argument, "scan weight must lie in [0, 1]");
}

void require_product(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw Error(Errc::domain, "mu * eta must lie in [0, 1]");
}

double discriminant(double a, double q) {
  const double disc = (1.0 - 2.0 * a) * (1.0 - 2.0 * a) + 4.0 * a * (1.0 - a) * q;
  if (disc < 0.0) {
    if (disc > -1e-15) return 0.0;
    throw Error(Errc::domain, "negative discriminant");
  }
  return disc;
}

}  // namespace

CouplingRoots coupling_u(double scan_weight, double mu, double eta) {
  const double a = scan_weight;
  if (!(a > 0.0 && a < 1.0)) throw Error(Errc::alpha_boundary, "coupling needs a scan weight in (0, 1)");
  if (!std::isfinite(mu) || !std::isfinite(eta)) throw Error(Errc::domain, "mu and eta must be finite");
  if (mu == 0.0) {
    if (a == 0.5) throw Error(Errc::domain, "mu = 0 and scan weight 1/2 leave u undetermined");
    const double u = (1.0 - a) * eta / (2.0 * a - 1.0);
    return {u, u, true};
  }
  const double disc = (1.0 - 2.0 * a) * (1.0 - 2.0 * a) + 4.0 * a * (1.0 - a) * mu * eta;
  if (disc < -1e-15) throw Error(Errc::domain, "coupling roots are complex");
  const double root = std::sqrt(std::max(0.0, disc));
  return {((1.0 - 2.0 * a) + root) / (2.0 * a * mu), ((1.0 - 2.0 * a) - root) / (2.0 * a * mu), false};
}

double coupling_residual(double scan_weight, double mu, double eta, double u) {
  const double a = scan_weight;
  return a * u * (1.0 + mu * u) - (1.0 - a) * (eta + u);
}

std::pair<double, double> scan_eigenvalue_pair(double scan_weight, double product) {
  require_weight(scan_weight);
  require_product(product);
  const double root = std::sqrt(discriminant(scan_weight, product));
  return {0.5 * (1.0 + root), 0.5 * (1.0 - root)};
}

ScanSpectrum alpha_scan_eigenvalues(double scan_weight, const SpectralData& data) {
  require_weight(scan_weight);
  ScanSpectrum out;
  out.scan_weight = scan_weight;
  for (const auto& level : data.levels) {
    ScanLevel s;
    s.k = level.k;
    std::tie(s.lambda_plus, s.lambda_minus) = scan_eigenvalue_pair(scan_weight, level.product);
    if (level.mu && level.eta && *level.mu != 0.0 && scan_weight > 0.0 && scan_weight < 1.0) {
      const auto roots = coupling_u(scan_weight, *level.mu, *level.eta);
      s.u_plus = roots.u_plus;
      s.u_minus = roots.u_minus;
    }
    out.levels.push_back(s);
  }
  if (data.cutoff) out.tail_eigenvalue = 1.0 - scan_weight;
  return out;
}

double spectral_gap(double scan_weight, double product) {
  require_weight(scan_weight);
  require_product(product);
  const double a = scan_weight;
  // 1 - sqrt(D) = (1 - D) / (1 + sqrt(D)) with 1 - D = 4a(1 - a)(1 - q).
  return 2.0 * a * (1.0 - a) * (1.0 - product) / (1.0 + std::sqrt(discriminant(a, product)));
}

GapMaximum argmax_gap(double product) {
  require_product(product);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = spectral_gap(x1, product);
  double f2 = spectral_gap(x2, product);
  while (hi - lo > 1e-9) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = spectral_gap(x2, product);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = spectral_gap(x1, product);
    }
  }
  GapMaximum m;
  m.scan_weight = 0.5 * (lo + hi);
  m.gap = spectral_gap(m.scan_weight, product);
  m.analytic_scan_weight = 0.5;
  m.analytic_gap = 0.5 * (1.0 - std::sqrt(product));
  return m;
}

double eigen_lower_bound(double lambda, const StepCount& steps, double constant) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(Errc::domain, "eigenvalue must lie in [0, 1]");
  if (!(constant >= 0.0)) throw Error(Errc::domain, "constant must be >= 0");
  if (constant == 0.0 || steps == StepCount(0)) return constant;
  if (lambda == 0.0) return 0.0;
  return std::exp(std::log(constant) + static_cast<double>(steps.to_long_double() * std::log(lambda)));
}

double test_function_lower_bound(double lambda, const StepCount& steps, double normalized_value) {
  if (!(normalized_value >= 0.0 && normalized_value <= 1.0 + 1e-12)) {
    throw Error(Errc::domain, "normalized eigenfunction value must lie in [0, 1]");
  }
  if (!(std::abs(lambda) <= 1.0)) throw Error(Errc::domain, "eigenvalue must lie in [-1, 1]");
  return eigen_lower_bound(std::abs(lambda), steps, 0.5 * std::min(1.0, normalized_value));
}

}  // namespace gibbsrate
