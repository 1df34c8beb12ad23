#include "gibbsrate/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gibbsrate/errors.hpp"

namespace gibbsrate {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kNegativeClip = -1e-15;
constexpr double kInvarianceTolerance = 1e-10;
constexpr double kBalanceTolerance = 1e-10;

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(Errc::dimension_mismatch, "sizes " + std::to_string(a) + " and " + std::to_string(b));
  }
}

void require_compatible(const StochasticMatrix& k, const Distribution& pi) { require_same_size(k.dim(), pi.size()); }

}  // namespace

Distribution::Distribution(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(Errc::invalid_argument, "empty distribution");
  double sum = 0.0;
  for (double& w : weights_) {
    if (std::isnan(w) || w < kNegativeClip) throw Error(Errc::domain, "negative probability weight");
    w = std::max(w, 0.0);
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw Error(Errc::domain, "weights sum to " + std::to_string(sum) + ", not 1");
  }
}

Distribution Distribution::normalized(std::vector<double> weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0)) throw Error(Errc::domain, "cannot normalize a zero vector");
  for (double& w : weights) w /= sum;
  return Distribution(std::move(weights));
}

Distribution Distribution::uniform(std::size_t size) {
  if (size == 0) throw Error(Errc::invalid_argument, "empty distribution");
  return Distribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

Distribution Distribution::point_mass(std::size_t size, std::size_t index) {
  if (index >= size) throw Error(Errc::range, "point mass index outside the state space");
  std::vector<double> w(size, 0.0);
  w[index] = 1.0;
  return Distribution(std::move(w));
}

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw Error(Errc::dimension_mismatch, "stochastic matrix must be square and non-empty");
  }
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
      double& v = entries_(i, j);
      if (std::isnan(v) || v < kNegativeClip) {
        throw Error(Errc::domain, "negative transition probability at row " + std::to_string(i));
      }
      v = std::max(v, 0.0);
    }
    const double row_sum = entries_.row(i).sum();
    if (std::abs(row_sum - 1.0) > kSumTolerance) {
      throw Error(Errc::domain, "row " + std::to_string(i) + " sums to " + std::to_string(row_sum));
    }
  }
}

StochasticMatrix StochasticMatrix::with_normalized_rows(Eigen::MatrixXd entries) {
  for (Eigen::Index i = 0; i < entries.rows(); ++i) {
    const double s = entries.row(i).sum();
    if (!(s > 0.0)) throw Error(Errc::domain, "row " + std::to_string(i) + " has no mass");
    entries.row(i) /= s;
  }
  return StochasticMatrix(std::move(entries));
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  require_same_size(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return std::min(1.0, 0.5 * s);
}

double tv_distance(const Distribution& p, const Distribution& q) { return tv_distance(p.weights(), q.weights()); }

double invariance_defect(const StochasticMatrix& kernel, const Distribution& pi) {
  require_compatible(kernel, pi);
  const Eigen::RowVectorXd next = pi.row() * kernel.entries();
  return (next - pi.row()).cwiseAbs().maxCoeff();
}

double detailed_balance_defect(const StochasticMatrix& kernel, const Distribution& pi) {
  require_compatible(kernel, pi);
  const Eigen::VectorXd w = pi.row().transpose();
  const Eigen::MatrixXd flow = w.asDiagonal() * kernel.entries();
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

double matrix_power_tv(const StochasticMatrix& kernel, std::size_t start, const Distribution& stationary,
                       const StepCount& steps) {
  require_compatible(kernel, stationary);
  if (start >= kernel.dim()) throw Error(Errc::invalid_state, "start state outside the state space");
  const auto count = steps.to_u64();
  if (!count || *count > kMaxIteratedSteps) {
    throw Error(Errc::too_large, "step count " + steps.str() + " exceeds the iteration limit");
  }
  if (invariance_defect(kernel, stationary) > kInvarianceTolerance) {
    throw Error(Errc::non_invariant, "stationary vector is not invariant for the kernel");
  }
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(kernel.dim()));
  v(static_cast<Eigen::Index>(start)) = 1.0;
  Eigen::RowVectorXd next(v.size());
  for (std::uint64_t l = 0; l < *count; ++l) {
    next.noalias() = v * kernel.entries();
    v.swap(next);
  }
  return std::min(1.0, 0.5 * (v - stationary.row()).cwiseAbs().sum());
}

std::vector<double> start_tv_curve(const StochasticMatrix& kernel, std::size_t start, const Distribution& stationary,
                                   std::size_t max_steps) {
  require_compatible(kernel, stationary);
  if (start >= kernel.dim()) throw Error(Errc::invalid_state, "start state outside the state space");
  if (max_steps > kMaxIteratedSteps) throw Error(Errc::too_large, "curve longer than the iteration limit");
  if (invariance_defect(kernel, stationary) > kInvarianceTolerance) {
    throw Error(Errc::non_invariant, "stationary vector is not invariant for the kernel");
  }
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(kernel.dim()));
  v(static_cast<Eigen::Index>(start)) = 1.0;
  Eigen::RowVectorXd next(v.size());
  std::vector<double> curve;
  curve.reserve(max_steps + 1);
  for (std::size_t l = 0;; ++l) {
    curve.push_back(std::min(1.0, 0.5 * (v - stationary.row()).cwiseAbs().sum()));
    if (l == max_steps) break;
    next.noalias() = v * kernel.entries();
    v.swap(next);
  }
  return curve;
}

std::vector<double> worst_start_tv_curve(const StochasticMatrix& kernel, const Distribution& stationary,
                                         std::size_t max_steps) {
  require_compatible(kernel, stationary);
  if (max_steps > kMaxIteratedSteps) throw Error(Errc::too_large, "curve longer than the iteration limit");
  if (invariance_defect(kernel, stationary) > kInvarianceTolerance) {
    throw Error(Errc::non_invariant, "stationary vector is not invariant for the kernel");
  }
  const auto d = static_cast<Eigen::Index>(kernel.dim());
  Eigen::MatrixXd rows = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd next(d, d);
  std::vector<double> curve;
  curve.reserve(max_steps + 1);
  for (std::size_t l = 0;; ++l) {
    const double worst = 0.5 * (rows.rowwise() - stationary.row()).cwiseAbs().rowwise().sum().maxCoeff();
    curve.push_back(std::min(1.0, worst));
    if (l == max_steps) break;
    next.noalias() = rows * kernel.entries();
    rows.swap(next);
  }
  return curve;
}

Distribution stationary_distribution(const StochasticMatrix& kernel) {
  // Iterates to round-off: stops once the step size has not reached a new
  // minimum for kPatience iterations, or drops below kFloor.
  constexpr double kConverged = 1e-13;
  constexpr double kFloor = 1e-17;
  constexpr std::size_t kPatience = 100;
  constexpr std::size_t kMaxIterations = 1'000'000;
  const auto d = static_cast<Eigen::Index>(kernel.dim());
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Constant(d, 1.0 / static_cast<double>(d));
  Eigen::RowVectorXd next(d);
  double best = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  for (std::size_t it = 0; it < kMaxIterations; ++it) {
    next.noalias() = v * kernel.entries();
    next /= next.sum();
    const double change = 0.5 * (next - v).cwiseAbs().sum();
    v.swap(next);
    if (change < best) {
      best = change;
      since_best = 0;
    } else {
      ++since_best;
    }
    if (change < kFloor || (best < kConverged && since_best >= kPatience)) {
      std::vector<double> w(v.data(), v.data() + d);
      Distribution pi = Distribution::normalized(std::move(w));
      if (invariance_defect(kernel, pi) > kInvarianceTolerance) {
        throw Error(Errc::non_convergence, "power iteration settled on a non-invariant vector");
      }
      return pi;
    }
  }
  throw Error(Errc::non_convergence, "power iteration did not converge within 1e6 iterations");
}

ReversibleEigensystem reversible_eigensystem(const StochasticMatrix& kernel, const Distribution& pi) {
  require_compatible(kernel, pi);
  if (detailed_balance_defect(kernel, pi) > kBalanceTolerance) {
    throw Error(Errc::detailed_balance, "kernel is not reversible with respect to the given law");
  }
  const auto d = static_cast<Eigen::Index>(kernel.dim());
  Eigen::VectorXd sqrt_pi(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(pi[static_cast<std::size_t>(i)] > 0.0)) {
      throw Error(Errc::domain, "stationary law must have full support");
    }
    sqrt_pi(i) = std::sqrt(pi[static_cast<std::size_t>(i)]);
  }
  Eigen::MatrixXd sym = sqrt_pi.asDiagonal() * kernel.entries() * sqrt_pi.cwiseInverse().asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw Error(Errc::non_convergence, "symmetric eigensolver failed");

  ReversibleEigensystem out;
  out.values = solver.eigenvalues().reverse();
  out.right_vectors = sqrt_pi.cwiseInverse().asDiagonal() * solver.eigenvectors().rowwise().reverse();
  out.pi = sqrt_pi.cwiseAbs2();
  if (std::abs(out.values(0) - 1.0) > 1e-10) {
    throw Error(Errc::non_convergence, "leading eigenvalue is not 1");
  }
  return out;
}

std::vector<double> reversible_spectrum(const StochasticMatrix& kernel, const Distribution& pi) {
  const auto system = reversible_eigensystem(kernel, pi);
  return {system.values.data(), system.values.data() + system.values.size()};
}

double spectral_tv(const ReversibleEigensystem& system, std::size_t start, double steps) {
  const Eigen::Index d = system.values.size();
  if (static_cast<Eigen::Index>(start) >= d) throw Error(Errc::invalid_state, "start outside the state space");
  if (d == 1) return 0.0;
  const auto tail = d - 1;
  Eigen::VectorXd weights(tail);
  for (Eigen::Index k = 1; k < d; ++k) {
    weights(k - 1) = std::pow(system.values(k), steps) * system.right_vectors(static_cast<Eigen::Index>(start), k);
  }
  const Eigen::VectorXd deviation = system.right_vectors.rightCols(tail) * weights;
  return std::min(1.0, 0.5 * system.pi.cwiseProduct(deviation).cwiseAbs().sum());
}

double spectral_worst_start_tv(const ReversibleEigensystem& system, double steps) {
  const Eigen::Index d = system.values.size();
  if (d == 1) return 0.0;
  const auto tail = d - 1;
  const Eigen::MatrixXd f = system.right_vectors.rightCols(tail);
  Eigen::VectorXd powers(tail);
  for (Eigen::Index k = 1; k < d; ++k) powers(k - 1) = std::pow(system.values(k), steps);
  const Eigen::MatrixXd deviation = f * powers.asDiagonal() * f.transpose();
  const Eigen::VectorXd tv = 0.5 * (deviation.cwiseAbs() * system.pi);
  return std::min(1.0, tv.maxCoeff());
}

}  // namespace gibbsrate
