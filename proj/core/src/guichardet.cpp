#include "davies/guichardet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "davies/errors.hpp"
#include "davies/quadrature.hpp"

namespace davies {
namespace {

enum class Insertion { kSigmaF, kTauF, kSigmaS, kTauS };

Complex2x2 decay(double x) {
  Complex2x2 d = Complex2x2::Identity();
  d(0, 0) = std::exp(-0.5 * x);
  return d;
}

Complex ipow(Complex z, int n) {
  Complex r{1.0, 0.0};
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

struct Point {
  double time;
  bool side;
};

class AmplitudeEvaluator {
 public:
  AmplitudeEvaluator(const Model& m, const OracleOptions& opts, bool reduced)
      : z_(m.z()),
        vf_(m.Vf()),
        vs_(m.Vs()),
        minus_vf_adj_(-m.Vf().adjoint()),
        m_tau_(m.z() == Complex{} ? 0 : opts.m_tau),
        order_(opts.quad_order),
        reduced_(reduced) {}

  // Amplitude for time-ordered points on [0, t]; forward points are either
  // inserted (sigma_f) or contribute a factor z, side points are always inserted.
  Complex2x2 operator()(double t, const std::vector<Point>& pts) const {
    const std::size_t n = pts.size();
    auto time_of = [&](std::size_t i) { return i == 0 ? 0.0 : pts[i - 1].time; };

    // acc[i][c]: sum over inserted chains ending at point i with c tau points.
    std::vector<std::vector<Complex2x2>> acc(n + 1,
                                             std::vector<Complex2x2>(m_tau_ + 1, Complex2x2::Zero()));
    std::vector<std::vector<bool>> live(n + 1, std::vector<bool>(m_tau_ + 1, false));
    acc[0][0] = Complex2x2::Identity();
    live[0][0] = true;

    Complex2x2 result = Complex2x2::Zero();
    for (std::size_t j = 1; j <= n + 1; ++j) {
      const bool last = j == n + 1;
      const double tj = last ? t : time_of(j);
      std::vector<Complex2x2> incoming(m_tau_ + 1, Complex2x2::Zero());
      std::vector<bool> incoming_live(m_tau_ + 1, false);
      int skipped_forward = 0;
      for (std::size_t i = j; i-- > 0;) {
        // Points strictly between i and j are skipped; a skipped side point kills the chain.
        if (i + 1 < j) {
          if (pts[i].side) break;
          ++skipped_forward;
        }
        const std::vector<Complex2x2> gap = gap_integrals(tj - time_of(i));
        const Complex skip_factor = ipow(z_, skipped_forward);
        for (int c1 = 0; c1 <= m_tau_; ++c1) {
          if (!live[i][c1]) continue;
          for (int c2 = 0; c1 + c2 <= m_tau_; ++c2) {
            if (gap[c2].isZero(0.0)) continue;
            incoming[c1 + c2] += (skip_factor * ipow(z_, c2)) * gap[c2] * acc[i][c1];
            incoming_live[c1 + c2] = true;
          }
        }
      }
      if (last) {
        for (int c = 0; c <= m_tau_; ++c)
          if (incoming_live[c]) result += incoming[c];
        break;
      }
      const Complex2x2& ins = pts[j - 1].side ? vs_ : vf_;
      for (int c = 0; c <= m_tau_; ++c) {
        if (!incoming_live[c]) continue;
        acc[j][c] = ins * incoming[c];
        live[j][c] = true;
      }
    }
    return result;
  }

 private:
  // Index c: integral over c ordered tau_f points in a gap of length ell of
  // D(ell - r_c)(-V_f*) ... (-V_f*) D(r_1), without the z^c weight.
  std::vector<Complex2x2> gap_integrals(double ell) const {
    std::vector<Complex2x2> out(m_tau_ + 1, Complex2x2::Zero());
    gap_recurse(ell, 0, 0.0, Complex2x2::Identity(), out);
    return out;
  }

  void gap_recurse(double ell, int k, double start, const Complex2x2& partial,
                   std::vector<Complex2x2>& out) const {
    out[k] += decay(ell - start) * partial;
    if (k == m_tau_) return;
    // The decay factor is diag(e^{-x/2}, 1), so the next integrand is linear
    // in e^{-x/2}; when both coefficients vanish the whole subtree does.
    const Complex2x2 decaying = minus_vf_adj_ * unit(0, 0) * partial;
    const Complex2x2 constant = minus_vf_adj_ * unit(1, 1) * partial;
    if (decaying.isZero(0.0) && constant.isZero(0.0)) return;
    const int order = reduced_ ? reduced_order(order_, k + 1) : tapered_order(order_, k + 1);
    const GaussRule& rule = gauss_legendre(order);
    const double span = ell - start;
    for (int i = 0; i < order; ++i) {
      const double r = start + span * rule.nodes[i];
      const Complex2x2 next =
          (span * rule.weights[i]) * (std::exp(-0.5 * (r - start)) * decaying + constant);
      gap_recurse(ell, k + 1, r, next, out);
    }
  }

  Complex z_;
  Complex2x2 vf_, vs_, minus_vf_adj_;
  int m_tau_;
  int order_;
  bool reduced_;
};

std::vector<Point> merge_points(const GPoint& omega_f, const GPoint& omega_s) {
  std::vector<Point> pts;
  for (double x : omega_f.times) pts.push_back({x, false});
  for (double x : omega_s.times) pts.push_back({x, true});
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.time < b.time; });
  return pts;
}

// Sector-by-sector integration of Ad[amplitude] over a cylinder event.
class OracleIntegrator {
 public:
  OracleIntegrator(const Model& m, const Event& e, const OracleOptions& opts, bool reduced)
      : event_(e),
        opts_(opts),
        reduced_(reduced),
        amplitude_(m, opts, reduced),
        segs_(segments(e)) {}

  Mat4 integrate() {
    total_ = Mat4::Zero();
    std::vector<int> counts(event_.forward.windows.size() + event_.side.windows.size(), 0);
    pattern_.assign(segs_.size(), {0, 0});
    enumerate_counts(0, counts, 0);
    return total_;
  }

 private:
  int cap(const ChannelEvent& c, int window) const {
    if (window >= 0) return c.windows[window].count;
    return c.outside == Outside::kUnconstrained ? opts_.n_max : 0;
  }

  void enumerate_counts(std::size_t seg, std::vector<int>& counts, int total) {
    const std::size_t nf = event_.forward.windows.size();
    if (seg == segs_.size()) {
      for (std::size_t i = 0; i < nf; ++i)
        if (counts[i] != event_.forward.windows[i].count) return;
      for (std::size_t i = 0; i < event_.side.windows.size(); ++i)
        if (counts[nf + i] != event_.side.windows[i].count) return;
      integrate_pattern();
      return;
    }
    const Segment& s = segs_[seg];
    const int cf = cap(event_.forward, s.forward_window);
    const int cs = cap(event_.side, s.side_window);
    for (int a = 0; a <= cf; ++a) {
      for (int b = 0; b <= cs; ++b) {
        if (total + a + b > opts_.n_max) break;
        if (s.forward_window >= 0 &&
            counts[s.forward_window] + a > event_.forward.windows[s.forward_window].count)
          continue;
        if (s.side_window >= 0 &&
            counts[nf + s.side_window] + b > event_.side.windows[s.side_window].count)
          continue;
        if (s.forward_window >= 0) counts[s.forward_window] += a;
        if (s.side_window >= 0) counts[nf + s.side_window] += b;
        pattern_[seg] = {a, b};
        enumerate_counts(seg + 1, counts, total + a + b);
        if (s.forward_window >= 0) counts[s.forward_window] -= a;
        if (s.side_window >= 0) counts[nf + s.side_window] -= b;
      }
    }
  }

  // For a fixed per-segment count pattern, sum over channel interleavings.
  void integrate_pattern() {
    labels_.assign(segs_.size(), {});
    enumerate_interleavings(0);
  }

  void enumerate_interleavings(std::size_t seg) {
    if (seg == segs_.size()) {
      rules_.clear();
      for (std::size_t k = 0; k < segs_.size(); ++k)
        rules_.push_back(ordered_simplex_rule(static_cast<int>(labels_[k].size()),
                                              segs_[k].length(), opts_.quad_order, reduced_));
      points_.clear();
      integrate_nodes(0, 1.0);
      return;
    }
    const auto [a, b] = pattern_[seg];
    const int n = a + b;
    // Bitmask over n slots with exactly b side slots.
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != b) continue;
      labels_[seg].assign(n, false);
      for (int i = 0; i < n; ++i) labels_[seg][i] = (mask >> i) & 1u;
      enumerate_interleavings(seg + 1);
    }
  }

  void integrate_nodes(std::size_t seg, double weight) {
    if (seg == segs_.size()) {
      const Complex2x2 amp = amplitude_(event_.horizon, points_);
      total_ += weight * ad_map(amp).matrix();
      return;
    }
    const std::size_t base = points_.size();
    for (const SimplexNode& node : rules_[seg]) {
      points_.resize(base);
      for (std::size_t i = 0; i < node.points.size(); ++i)
        points_.push_back({segs_[seg].begin + node.points[i], labels_[seg][i]});
      integrate_nodes(seg + 1, weight * node.weight);
    }
    points_.resize(base);
  }

  const Event& event_;
  OracleOptions opts_;
  bool reduced_;
  AmplitudeEvaluator amplitude_;
  std::vector<Segment> segs_;
  std::vector<std::pair<int, int>> pattern_;
  std::vector<std::vector<bool>> labels_;
  std::vector<std::vector<SimplexNode>> rules_;
  std::vector<Point> points_;
  Mat4 total_;
};

void require_disjoint(const std::vector<const GPoint*>& sets) {
  std::vector<double> all;
  for (const GPoint* g : sets) all.insert(all.end(), g->times.begin(), g->times.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw ValidationError("kernel arguments must be pairwise disjoint");
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

void GPoint::validate() const {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw ValidationError("Guichardet point times must be finite");
    if (i > 0 && !(times[i - 1] < times[i]))
      throw ValidationError("Guichardet point times must be strictly increasing");
  }
}

Complex2x2 kernel_u(const Model& m, double t, const KernelArgs& args) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("kernel_u needs finite t >= 0");
  args.sigma_f.validate();
  args.sigma_s.validate();
  args.tau_f.validate();
  args.tau_s.validate();
  require_disjoint({&args.sigma_f, &args.sigma_s, &args.tau_f, &args.tau_s});

  std::vector<std::pair<double, Insertion>> pts;
  for (double x : args.sigma_f.times) pts.emplace_back(x, Insertion::kSigmaF);
  for (double x : args.tau_f.times) pts.emplace_back(x, Insertion::kTauF);
  for (double x : args.sigma_s.times) pts.emplace_back(x, Insertion::kSigmaS);
  for (double x : args.tau_s.times) pts.emplace_back(x, Insertion::kTauS);
  for (const auto& [x, kind] : pts)
    if (x < 0.0 || x > t) return Complex2x2::Zero();
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  Complex2x2 out = Complex2x2::Identity();
  double prev = 0.0;
  for (const auto& [x, kind] : pts) {
    Complex2x2 v;
    switch (kind) {
      case Insertion::kSigmaF: v = m.Vf(); break;
      case Insertion::kTauF: v = -m.Vf().adjoint(); break;
      case Insertion::kSigmaS: v = m.Vs(); break;
      case Insertion::kTauS: v = -m.Vs().adjoint(); break;
    }
    out = v * decay(x - prev) * out;
    prev = x;
  }
  return decay(t - prev) * out;
}

Complex2x2 u_on_coherent(const Model& m, double t, const GPoint& omega_f, const GPoint& omega_s,
                         const OracleOptions& opts) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("u_on_coherent needs finite t >= 0");
  omega_f.validate();
  omega_s.validate();
  require_disjoint({&omega_f, &omega_s});
  if (static_cast<int>(omega_f.size() + omega_s.size()) > opts.n_max)
    throw CapacityError("Guichardet point has " + std::to_string(omega_f.size() + omega_s.size()) +
                        " photons, above n_max = " + std::to_string(opts.n_max));
  const std::vector<Point> pts = merge_points(omega_f, omega_s);
  for (const Point& p : pts)
    if (p.time < 0.0 || p.time > t) return Complex2x2::Zero();
  return AmplitudeEvaluator(m, opts, false)(t, pts);
}

MapResult oracle_davies_map(const Model& m, const Event& e, const OracleOptions& opts) {
  e.validate();
  if (opts.n_max < 0 || opts.m_tau < 0) throw ValidationError("n_max and m_tau must be non-negative");
  if (opts.quad_order < 1) throw ValidationError("quad_order must be positive");
  if (e.total_count() > opts.n_max)
    throw CapacityError("event demands " + std::to_string(e.total_count()) +
                        " detections, above n_max = " + std::to_string(opts.n_max));

  MapResult result;
  if (e.impossible()) return result;

  const double weight = std::exp(-e.horizon * m.drive_intensity());
  result.map = Superop(weight * OracleIntegrator(m, e, opts, false).integrate());
  const Superop coarse(weight * OracleIntegrator(m, e, opts, true).integrate());
  result.quadrature_error = frobenius_dist(result.map, coarse);

  double free_len = 0.0;
  for (const Segment& s : segments(e)) {
    const bool free_f = s.forward_window < 0 && e.forward.outside == Outside::kUnconstrained;
    const bool free_s = s.side_window < 0 && e.side.outside == Outside::kUnconstrained;
    if (free_f || free_s) free_len += s.length();
  }
  if (free_len > 0.0) {
    const int room = opts.n_max - e.total_count();
    const double coherent_tail = poisson_upper_tail(e.horizon * m.drive_intensity(), room);
    const double rate_tail = poisson_upper_tail(detection_rate_bound(m) * free_len, room);
    result.truncation_error = std::max(coherent_tail, rate_tail);
  }
  return result;
}

JumpLimitReport jump_limit_check(const Model& m, std::span<const double> t_list,
                                 const OracleOptions& opts) {
  JumpLimitReport report;
  const Superop jf = jump_f(m);
  const Superop js = jump_s(m);
  std::vector<double> lt, lf, ls;
  for (double t : t_list) {
    JumpLimitEntry entry;
    entry.t = t;
    if (!(t > 0.0)) {
      entry.no_data = true;
      report.entries.push_back(entry);
      continue;
    }
    const Event forward{ChannelEvent::exactly(1, 0.0, t), ChannelEvent::none(), t};
    const Event side{ChannelEvent::none(), ChannelEvent::exactly(1, 0.0, t), t};
    const Superop qf = (1.0 / t) * oracle_davies_map(m, forward, opts).map;
    const Superop qs = (1.0 / t) * oracle_davies_map(m, side, opts).map;
    entry.forward_distance = frobenius_dist(qf, jf);
    entry.side_distance = frobenius_dist(qs, js);
    report.entries.push_back(entry);
    lt.push_back(std::log(t));
    lf.push_back(std::log(std::max(entry.forward_distance, 1e-300)));
    ls.push_back(std::log(std::max(entry.side_distance, 1e-300)));
  }
  report.forward_slope = fit_slope(lt, lf);
  report.side_slope = fit_slope(lt, ls);

  std::vector<const JumpLimitEntry*> data;
  for (const auto& en : report.entries)
    if (!en.no_data) data.push_back(&en);
  std::sort(data.begin(), data.end(), [](auto a, auto b) { return a->t > b->t; });
  for (std::size_t i = 1; i < data.size(); ++i) {
    report.forward_decreasing =
        report.forward_decreasing && data[i]->forward_distance <= data[i - 1]->forward_distance;
    report.side_decreasing =
        report.side_decreasing && data[i]->side_distance <= data[i - 1]->side_distance;
  }
  return report;
}

}  // namespace davies
