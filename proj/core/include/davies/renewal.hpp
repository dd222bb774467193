#pragma once

#include <span>
#include <vector>

#include "davies/linalg.hpp"
#include "davies/model.hpp"
#include "davies/stats.hpp"
#include "davies/trajectory.hpp"

namespace davies {

// Side-channel waiting-time densities, forward channel unobserved:
//   z(x)       = |kappa_s|^2 (Z_x(P))_22
//   z_first(x) = Tr(rho Z_x(P))
//   z_last(x)  = |kappa_s|^2 (Z_x(I))_22
// z_first carries no |kappa_s|^2; the density of the first waiting time is
// |kappa_s|^2 z_first.
struct WaitingDensities {
  std::vector<double> grid;
  std::vector<double> z_vals;
  std::vector<double> z_first_vals;
  std::vector<double> z_last_vals;
};

enum class Interval { kFirst, kLater };

class WaitingTimeModel {
 public:
  WaitingTimeModel(const Model& m, const DensityMatrix& rho);

  double z(double x) const;
  double z_first(double x) const;
  double z_last(double x) const;
  // z for later intervals, |kappa_s|^2 z_first for the first.
  double density(Interval which, double x) const;

  // Adaptive Gauss-Kronrod integral of the density over [0, x].
  double cdf(Interval which, double x) const;
  // CDF at each point of an ascending sample, accumulated piece by piece.
  std::vector<double> cdf_sorted(Interval which, const std::vector<double>& sorted) const;
  // Smallest x with cdf(x) >= p, for p below the total mass.
  double quantile(Interval which, double p) const;

 private:
  double side_weight_;
  SemigroupEvaluator::Functional z_;
  SemigroupEvaluator::Functional z_first_;
  SemigroupEvaluator::Functional z_last_;
};

WaitingDensities waiting_densities(const Model& m, const DensityMatrix& rho,
                                   std::span<const double> grid);

// Density of side detections separated by x_1 .. x_{k+1} (k detections,
// forward channel unobserved): z_first(x_1) z(x_2) ... z(x_k) z_last(x_{k+1}),
// or Tr(rho Z_{x_1}(I)) when k = 0. Also evaluated as
// Tr(rho Z_{x_1} J_s ... J_s Z_{x_{k+1}}(I)); a disagreement beyond 1e-10
// throws std::logic_error. Negative x throws DomainError.
double factorized_probability(const Model& m, const DensityMatrix& rho, std::span<const double> xs);

double theoretical_cdf(const Model& m, const DensityMatrix& rho, Interval which, double x);

struct RenewalOptions {
  double significance = 0.01;
  std::size_t min_samples = 1000;
  std::vector<double> count_times{10.0, 25.0, 50.0};
  double antibunching_window = 0.05;
  int grid_bins = 10;
};

struct CountTail {
  double t = 0.0;
  // Empirical P[N_t <= n] for n = 0, 1, 2.
  double p_at_most[3] = {0.0, 0.0, 0.0};
};

struct RenewalReport {
  bool preconditions_met = true;
  bool underpowered = false;
  std::size_t n_traj = 0;

  // Interval X_i is observed only when it ends before the horizon. Each
  // observed value is mapped through the CDF of its law truncated at the
  // time left before the horizon, which is uniform under the renewal law.
  std::size_t n_first = 0;
  std::size_t no_first = 0;
  KsResult ks_first;

  std::size_t n_second = 0;
  std::size_t n_third = 0;
  KsResult ks_second;
  KsResult ks_third;
  double ks_stat_later = 0.0;
  KsResult ks_second_vs_third;
  // The same tests without the horizon correction, for reference.
  KsResult ks_second_raw;
  KsResult ks_third_raw;

  // Chi-square on the grid of transformed (X_2, X_3) values.
  std::size_t n_pairs = 0;
  ChiSquareResult independence;

  std::vector<CountTail> count_tails;

  std::size_t n_intervals = 0;
  double antibunching_empirical = 0.0;
  double antibunching_theoretical = 0.0;

  bool first_pass = false;
  bool later_pass = false;
  bool two_sample_pass = false;
  bool independence_pass = false;
  bool count_tail_pass = false;
  bool antibunching_pass = false;

  bool pass() const {
    return preconditions_met && !underpowered && first_pass && later_pass && two_sample_pass &&
           independence_pass && count_tail_pass && antibunching_pass;
  }
};

RenewalReport renewal_test(std::span<const Trajectory> batch, const Model& m,
                           const DensityMatrix& rho0, const RenewalOptions& opts = {});

}  // namespace davies
