#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "davies/errors.hpp"
#include "davies/renewal.hpp"
#include "davies/trajectory.hpp"

using namespace davies;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

// Inverse-CDF sampler on a dense tabulation of the theoretical law.
class TableSampler {
 public:
  TableSampler(const WaitingTimeModel& w, Interval which) {
    for (double x = 0.0; x <= 120.0; x += 0.002) grid_.push_back(x);
    cdf_ = w.cdf_sorted(which, grid_);
  }
  double draw(double u) const {
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) return grid_.back();
    const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
    if (i == 0) return 0.0;
    const double f = (u - cdf_[i - 1]) / (cdf_[i] - cdf_[i - 1]);
    return grid_[i - 1] + f * (grid_[i] - grid_[i - 1]);
  }

 private:
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

std::vector<Trajectory> synthetic_batch(std::size_t n, double horizon, std::uint64_t seed,
                                        bool copy_second) {
  const Model m = symmetric_model();
  const WaitingTimeModel w(m, DensityMatrix::ground());
  const TableSampler first(w, Interval::kFirst), later(w, Interval::kLater);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Trajectory> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].index = i;
    out[i].horizon = horizon;
    double t = first.draw(u(rng));
    double second = 0.0;
    while (t < horizon) {
      out[i].records.push_back({t, Channel::kSide});
      double gap = later.draw(u(rng));
      if (out[i].records.size() == 1) second = gap;
      if (copy_second && out[i].records.size() == 2) gap = second;
      t += gap;
    }
  }
  return out;
}

}  // namespace

TEST(WaitingDensities, EndpointsAndInvariants) {
  const Model m = symmetric_model();
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(0.1 * i);
  const WaitingDensities d = waiting_densities(m, DensityMatrix::ground(), grid);
  EXPECT_EQ(d.z_vals[0], 0.0);
  EXPECT_EQ(d.z_first_vals[0], 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_GE(d.z_vals[i], 0.0);
    EXPECT_GE(d.z_first_vals[i], 0.0);
    EXPECT_GE(d.z_last_vals[i], 0.0);
    EXPECT_LE(d.z_last_vals[i], 1.0);
  }
}

TEST(WaitingDensities, ZeroSlopeAtOrigin) {
  const WaitingTimeModel w(symmetric_model(), DensityMatrix::ground());
  const double h = 1e-5;
  EXPECT_EQ(w.z(0.0), 0.0);
  EXPECT_LT(std::abs(-3.0 * w.z(0.0) + 4.0 * w.z(h) - w.z(2.0 * h)) / (2.0 * h), 1e-6);
}

TEST(WaitingDensities, LaterLawIsNormalized) {
  const WaitingTimeModel w(symmetric_model(), DensityMatrix::ground());
  EXPECT_NEAR(w.cdf(Interval::kLater, 200.0), 1.0, 1e-8);
  EXPECT_NEAR(w.cdf(Interval::kFirst, 200.0), 1.0, 1e-8);
}

TEST(WaitingDensities, GroundStartMakesFirstEqualLater) {
  const WaitingTimeModel w(symmetric_model(), DensityMatrix::ground());
  for (double x : {0.5, 2.0, 7.0}) EXPECT_NEAR(w.density(Interval::kFirst, x), w.density(Interval::kLater, x), 1e-14);
}

TEST(FactorizedProbability, MatchesDirectWord) {
  const Model m = symmetric_model();
  const DensityMatrix rho = DensityMatrix::maximally_mixed();
  const std::vector<double> xs{0.7, 1.9, 0.4};
  const Complex2x2 word =
      (z_map(m, 0.7) * jump_s(m) * z_map(m, 1.9) * jump_s(m) * z_map(m, 0.4))(
          Complex2x2::Identity());
  EXPECT_NEAR(factorized_probability(m, rho, xs), (rho.matrix() * word).trace().real(), 1e-12);
}

TEST(FactorizedProbability, AntibunchingZero) {
  const std::vector<double> xs{1.0, 0.0, 0.5};
  EXPECT_EQ(factorized_probability(symmetric_model(), DensityMatrix::ground(), xs), 0.0);
  const std::vector<double> bad{1.0, -0.1};
  EXPECT_THROW(factorized_probability(symmetric_model(), DensityMatrix::ground(), bad),
               DomainError);
}

TEST(Cdf, Examples) {
  const WaitingTimeModel w(symmetric_model(), DensityMatrix::ground());
  EXPECT_EQ(w.cdf(Interval::kLater, 0.0), 0.0);
  const double med = w.quantile(Interval::kLater, 0.5);
  EXPECT_NEAR(w.cdf(Interval::kLater, med), 0.5, 1e-9);
  EXPECT_THROW(w.cdf(Interval::kLater, -1.0), DomainError);
  double prev = 0.0;
  for (double x = 0.5; x < 40.0; x += 0.5) {
    const double f = w.cdf(Interval::kLater, x);
    EXPECT_GE(f, prev);
    prev = f;
  }
}

TEST(Cdf, SortedSweepMatchesPointwise) {
  const WaitingTimeModel w(symmetric_model(), DensityMatrix::ground());
  const std::vector<double> xs{0.0, 0.3, 1.0, 4.0, 9.5, 30.0};
  const std::vector<double> sweep = w.cdf_sorted(Interval::kLater, xs);
  for (std::size_t i = 0; i < xs.size(); ++i)
    EXPECT_NEAR(sweep[i], w.cdf(Interval::kLater, xs[i]), 1e-10);
}

TEST(RenewalTest, NullCalibrationPasses) {
  const auto batch = synthetic_batch(3000, 50.0, 2024, false);
  const RenewalReport r = renewal_test(batch, symmetric_model(), DensityMatrix::ground());
  ASSERT_TRUE(r.preconditions_met);
  ASSERT_FALSE(r.underpowered);
  EXPECT_TRUE(r.first_pass) << r.ks_first.pvalue;
  EXPECT_TRUE(r.later_pass) << r.ks_second.pvalue << " " << r.ks_third.pvalue;
  EXPECT_TRUE(r.two_sample_pass);
  EXPECT_TRUE(r.independence_pass) << r.independence.pvalue;
  EXPECT_TRUE(r.count_tail_pass);
}

TEST(RenewalTest, CopiedIntervalsFailIndependence) {
  const auto batch = synthetic_batch(3000, 50.0, 2025, true);
  const RenewalReport r = renewal_test(batch, symmetric_model(), DensityMatrix::ground());
  ASSERT_FALSE(r.underpowered);
  EXPECT_FALSE(r.independence_pass);
  EXPECT_LT(r.independence.pvalue, 1e-6);
}

TEST(RenewalTest, SmallBatchIsUnderpowered) {
  const auto batch = synthetic_batch(50, 50.0, 1, false);
  const RenewalReport r = renewal_test(batch, symmetric_model(), DensityMatrix::ground());
  EXPECT_TRUE(r.underpowered);
  EXPECT_FALSE(r.pass());
}

TEST(RenewalTest, UndrivenModelFailsPreconditions) {
  const auto batch = synthetic_batch(10, 50.0, 1, false);
  const RenewalReport r =
      renewal_test(batch, build_model(kR, kR, 0.0), DensityMatrix::ground());
  EXPECT_FALSE(r.preconditions_met);
}
