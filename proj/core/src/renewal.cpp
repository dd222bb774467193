#include "davies/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "davies/errors.hpp"

namespace davies {
namespace {

Vec4 trace_left(const DensityMatrix& rho) { return vec(rho.matrix().transpose()); }

Vec4 entry22() { return vec(unit(1, 1)); }

double integrate(const std::function<double(double)>& f, double a, double b,
                 unsigned max_depth = 10) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, 1e-11);
}

}  // namespace

WaitingTimeModel::WaitingTimeModel(const Model& m, const DensityMatrix& rho)
    : side_weight_(m.side_weight()) {
  const SemigroupEvaluator eval(z_generator(m));
  z_ = eval.functional(entry22(), vec(Model::P()));
  z_first_ = eval.functional(trace_left(rho), vec(Model::P()));
  z_last_ = eval.functional(entry22(), vec(Complex2x2::Identity()));
}

double WaitingTimeModel::z(double x) const {
  // (Z_0(P))_22 = P_22 = 0 exactly.
  if (x == 0.0) return 0.0;
  return std::max(0.0, side_weight_ * z_(x).real());
}
double WaitingTimeModel::z_first(double x) const { return std::max(0.0, z_first_(x).real()); }
double WaitingTimeModel::z_last(double x) const { return side_weight_ * z_last_(x).real(); }

double WaitingTimeModel::density(Interval which, double x) const {
  return which == Interval::kLater ? z(x) : side_weight_ * z_first(x);
}

double WaitingTimeModel::cdf(Interval which, double x) const {
  if (!(x >= 0.0)) throw DomainError("CDF needs x >= 0");
  return integrate([&](double s) { return density(which, s); }, 0.0, x);
}

std::vector<double> WaitingTimeModel::cdf_sorted(Interval which,
                                                 const std::vector<double>& sorted) const {
  std::vector<double> out(sorted.size());
  double prev = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < prev) throw ValidationError("cdf_sorted needs an ascending sample");
    // Pieces between neighbouring samples are short; shallow refinement suffices.
    acc += integrate([&](double s) { return density(which, s); }, prev, sorted[i], 3);
    out[i] = acc;
    prev = sorted[i];
  }
  return out;
}

double WaitingTimeModel::quantile(Interval which, double p) const {
  double lo = 0.0, hi = 1.0;
  double f_hi = cdf(which, hi);
  while (f_hi < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) return std::numeric_limits<double>::infinity();
    f_hi = cdf(which, hi);
  }
  while (hi - lo > 1e-12 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(which, mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

WaitingDensities waiting_densities(const Model& m, const DensityMatrix& rho,
                                   std::span<const double> grid) {
  const WaitingTimeModel w(m, rho);
  WaitingDensities out;
  out.grid.assign(grid.begin(), grid.end());
  for (double x : grid) {
    if (!(x >= 0.0)) throw DomainError("density grid must be non-negative");
    if (x == 0.0) {
      // Z_0 is the identity: P_22 = 0, I_22 = 1.
      out.z_vals.push_back(0.0);
      out.z_first_vals.push_back((rho.matrix() * Model::P()).trace().real());
      out.z_last_vals.push_back(m.side_weight());
      continue;
    }
    out.z_vals.push_back(w.z(x));
    out.z_first_vals.push_back(w.z_first(x));
    out.z_last_vals.push_back(w.z_last(x));
  }
  return out;
}

double factorized_probability(const Model& m, const DensityMatrix& rho, std::span<const double> xs) {
  if (xs.empty()) throw ValidationError("factorized_probability needs at least one interval");
  for (double x : xs)
    if (!(x >= 0.0)) throw DomainError("inter-arrival times must be non-negative");
  const WaitingTimeModel w(m, rho);
  const std::size_t k = xs.size() - 1;

  double product;
  if (k == 0) {
    product = (rho.matrix() * z_map(m, xs[0])(Complex2x2::Identity())).trace().real();
  } else {
    product = w.z_first(xs[0]) * w.z_last(xs[k]);
    for (std::size_t l = 1; l < k; ++l) product *= w.z(xs[l]);
  }

  const Superop js = jump_s(m);
  Superop word = z_map(m, xs[0]);
  for (std::size_t l = 1; l <= k; ++l) word = word * js * z_map(m, xs[l]);
  const double trace = (rho.matrix() * word(Complex2x2::Identity())).trace().real();

  if (std::abs(product - trace) > 1e-10 * std::max(1.0, std::abs(trace)))
    throw std::logic_error("factorized and trace forms disagree");
  return product;
}

double theoretical_cdf(const Model& m, const DensityMatrix& rho, Interval which, double x) {
  return WaitingTimeModel(m, rho).cdf(which, x);
}

namespace {

// CDF at arbitrary points, evaluated through one ascending sweep.
std::vector<double> cdf_many(const WaitingTimeModel& w, Interval which, const std::vector<double>& xs) {
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> sorted(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = xs[order[i]];
  const std::vector<double> f = w.cdf_sorted(which, sorted);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[order[i]] = f[i];
  return out;
}

// F(x) / F(bound) per sample.
std::vector<double> truncated_pit(const WaitingTimeModel& w, Interval which,
                                  const std::vector<double>& xs, const std::vector<double>& bounds) {
  std::vector<double> all(xs);
  all.insert(all.end(), bounds.begin(), bounds.end());
  const std::vector<double> f = cdf_many(w, which, all);
  std::vector<double> u(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double mass = f[xs.size() + i];
    u[i] = mass > 0.0 ? std::clamp(f[i] / mass, 0.0, 1.0) : 1.0;
  }
  return u;
}

KsResult uniform_ks(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  return ks_test_sorted(u, u);
}

}  // namespace

RenewalReport renewal_test(std::span<const Trajectory> batch, const Model& m,
                           const DensityMatrix& rho0, const RenewalOptions& opts) {
  RenewalReport r;
  r.n_traj = batch.size();
  r.preconditions_met = renewal_preconditions(m);
  if (!r.preconditions_met) return r;

  const WaitingTimeModel first(m, rho0);
  const WaitingTimeModel later(m, DensityMatrix::ground());

  std::vector<double> x1, b1, x2, b2, x3, b3;
  std::vector<std::size_t> pair2, pair3;
  std::size_t n_short = 0;
  for (const Trajectory& tr : batch) {
    const auto& rec = tr.records;
    if (rec.empty()) {
      ++r.no_first;
      continue;
    }
    x1.push_back(rec[0].time);
    b1.push_back(tr.horizon);
    for (std::size_t i = 1; i < rec.size(); ++i) {
      ++r.n_intervals;
      if (rec[i].time - rec[i - 1].time <= opts.antibunching_window) ++n_short;
    }
    if (rec.size() >= 2) {
      x2.push_back(rec[1].time - rec[0].time);
      b2.push_back(tr.horizon - rec[0].time);
    }
    if (rec.size() >= 3) {
      pair2.push_back(x2.size() - 1);
      pair3.push_back(x3.size());
      x3.push_back(rec[2].time - rec[1].time);
      b3.push_back(tr.horizon - rec[1].time);
    }
  }
  r.n_first = x1.size();
  r.n_second = x2.size();
  r.n_third = x3.size();
  r.n_pairs = pair2.size();
  r.underpowered = r.n_first < opts.min_samples || r.n_second < opts.min_samples ||
                   r.n_third < opts.min_samples;

  const std::vector<double> u1 = truncated_pit(first, Interval::kFirst, x1, b1);
  const std::vector<double> u2 = truncated_pit(later, Interval::kLater, x2, b2);
  const std::vector<double> u3 = truncated_pit(later, Interval::kLater, x3, b3);
  r.ks_first = uniform_ks(u1);
  r.ks_second = uniform_ks(u2);
  r.ks_third = uniform_ks(u3);
  r.ks_stat_later = std::max(r.ks_second.statistic, r.ks_third.statistic);
  r.ks_second_vs_third = ks_two_sample(u2, u3);

  auto raw_ks = [&](std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return ks_test_sorted(xs, later.cdf_sorted(Interval::kLater, xs));
  };
  r.ks_second_raw = raw_ks(x2);
  r.ks_third_raw = raw_ks(x3);

  const int bins = opts.grid_bins;
  auto bin_of = [&](double u) { return std::min(bins - 1, static_cast<int>(u * bins)); };
  std::vector<std::vector<double>> table(bins, std::vector<double>(bins, 0.0));
  for (std::size_t i = 0; i < pair2.size(); ++i)
    table[bin_of(u2[pair2[i]])][bin_of(u3[pair3[i]])] += 1.0;
  r.independence = chi_square_independence(table);

  double horizon = 0.0;
  for (const Trajectory& tr : batch) horizon = std::max(horizon, tr.horizon);
  for (double t : opts.count_times) {
    if (t > horizon) continue;
    CountTail ct;
    ct.t = t;
    for (const Trajectory& tr : batch) {
      const auto n = std::count_if(tr.records.begin(), tr.records.end(),
                                   [&](const JumpRecord& j) { return j.time < t; });
      for (int k = 0; k < 3; ++k)
        if (n <= k) ct.p_at_most[k] += 1.0;
    }
    for (double& p : ct.p_at_most) p /= std::max<std::size_t>(1, batch.size());
    r.count_tails.push_back(ct);
  }

  r.antibunching_theoretical = later.cdf(Interval::kLater, opts.antibunching_window);
  r.antibunching_empirical =
      r.n_intervals == 0 ? 0.0 : static_cast<double>(n_short) / r.n_intervals;

  r.first_pass = r.ks_first.pvalue > opts.significance;
  r.later_pass = r.ks_second.pvalue > opts.significance && r.ks_third.pvalue > opts.significance;
  r.two_sample_pass = r.ks_second_vs_third.pvalue > opts.significance;
  r.independence_pass = r.independence.pvalue > opts.significance;

  r.count_tail_pass = !r.count_tails.empty();
  for (std::size_t i = 1; i < r.count_tails.size(); ++i)
    for (int k = 0; k < 3; ++k) {
      const double prev = r.count_tails[i - 1].p_at_most[k];
      const double cur = r.count_tails[i].p_at_most[k];
      r.count_tail_pass = r.count_tail_pass && (prev > 0.0 ? cur < prev : cur == 0.0);
    }
  if (!r.count_tails.empty())
    r.count_tail_pass = r.count_tail_pass && r.count_tails.back().p_at_most[1] < opts.significance;

  r.antibunching_pass =
      r.n_intervals > 0 && r.antibunching_empirical < 2.0 * r.antibunching_theoretical;
  return r;
}

}  // namespace davies
