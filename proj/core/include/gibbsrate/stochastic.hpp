#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gibbsrate/step_count.hpp"

namespace gibbsrate {

/// Probability vector over {0, ..., size-1}; sums to 1 within 1e-12.
class Distribution {
 public:
  explicit Distribution(std::vector<double> weights);

  static Distribution normalized(std::vector<double> weights);
  static Distribution uniform(std::size_t size);
  static Distribution point_mass(std::size_t size, std::size_t index);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }
  Eigen::Map<const Eigen::RowVectorXd> row() const {
    return {weights_.data(), static_cast<Eigen::Index>(weights_.size())};
  }

 private:
  std::vector<double> weights_;
};

/// Dense row-stochastic matrix. Entries above -1e-15 but below zero are
/// clipped to zero; rows must sum to 1 within 1e-12.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Eigen::MatrixXd entries);

  /// Divides each row by its sum before validating.
  static StochasticMatrix with_normalized_rows(Eigen::MatrixXd entries);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Eigen::MatrixXd entries_;
};

double tv_distance(std::span<const double> p, std::span<const double> q);
double tv_distance(const Distribution& p, const Distribution& q);

/// max_j |(pi K)_j - pi_j|
double invariance_defect(const StochasticMatrix& kernel, const Distribution& pi);
/// max_ij |pi_i K_ij - pi_j K_ji|
double detailed_balance_defect(const StochasticMatrix& kernel, const Distribution& pi);

/// Largest step count matrix_power_tv will iterate.
inline constexpr std::uint64_t kMaxIteratedSteps = 10'000'000;

/// TV between row `start` of K^steps and `stationary`, by repeated
/// vector-matrix products. Stationarity is checked to 1e-10.
double matrix_power_tv(const StochasticMatrix& kernel, std::size_t start, const Distribution& stationary,
                       const StepCount& steps);

/// TV from one start for l = 0..max_steps.
std::vector<double> start_tv_curve(const StochasticMatrix& kernel, std::size_t start, const Distribution& stationary,
                                   std::size_t max_steps);

/// Worst-start TV for l = 0..max_steps, propagating all start rows together.
std::vector<double> worst_start_tv_curve(const StochasticMatrix& kernel, const Distribution& stationary,
                                         std::size_t max_steps);

/// Power iteration from the uniform vector until successive iterates are
/// within 1e-13 in TV (cap 10^6 iterations).
Distribution stationary_distribution(const StochasticMatrix& kernel);

/// All eigenvalues of a reversible kernel, descending.
std::vector<double> reversible_spectrum(const StochasticMatrix& kernel, const Distribution& pi);

/// Eigen-decomposition of a reversible kernel through the sqrt(pi) similarity.
/// Column k of right_vectors is f_k with K f_k = values[k] f_k and the
/// columns orthonormal in L2(pi). Column 0 is the constant function.
struct ReversibleEigensystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd right_vectors;
  Eigen::VectorXd pi;
};

ReversibleEigensystem reversible_eigensystem(const StochasticMatrix& kernel, const Distribution& pi);

/// TV of row `start` of K^steps to pi from the spectral expansion with the
/// stationary mode removed. Keeps relative accuracy far below the 1e-16
/// floor that direct iteration hits.
double spectral_tv(const ReversibleEigensystem& system, std::size_t start, double steps);

/// max over starts of spectral_tv.
double spectral_worst_start_tv(const ReversibleEigensystem& system, double steps);

}  // namespace gibbsrate
