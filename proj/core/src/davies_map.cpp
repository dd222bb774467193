#include "davies/davies_map.hpp"

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "davies/errors.hpp"
#include "davies/quadrature.hpp"

namespace davies {
namespace {

// Word integrals over one segment, indexed by (forward count, side count).
// With `merged` both channels are free and only the total matters; the total
// is stored under the forward index.
struct SegmentTable {
  int cap_f = 0;
  int cap_s = 0;
  bool merged = false;
  std::vector<std::vector<std::optional<Mat4>>> entries;
};

class SegmentIntegrator {
 public:
  SegmentIntegrator(const Model& m, int base_order, bool reduced)
      : model_(m),
        base_order_(base_order),
        reduced_(reduced),
        jf_(jump_f(m).matrix()),
        js_(jump_s(m).matrix()),
        jsum_(jf_ + js_),
        generator_(no_jump_generator(m)) {}

  SegmentTable integrate(double length, int cap_f, int cap_s, bool merged, int n_max) {
    SegmentTable table;
    table.cap_f = cap_f;
    table.cap_s = cap_s;
    table.merged = merged;
    const int depth_max = std::min(n_max, merged ? n_max : cap_f + cap_s);
    table.entries.assign(depth_max + 1, std::vector<std::optional<Mat4>>(depth_max + 1));
    length_ = length;
    table_ = &table;
    cap_f_ = merged ? depth_max : cap_f;
    cap_s_ = merged ? 0 : cap_s;
    merged_ = merged;
    depth_max_ = depth_max;

    partial_.assign(depth_max + 1, std::vector<std::optional<Mat4>>(depth_max + 1));
    partial_[0][0] = Mat4::Identity();
    recurse(0, 0.0);
    return table;
  }

 private:
  Mat4 no_jump(double x) const { return ad_map(mat_exp(generator_, x)).matrix(); }

  static void accumulate(std::optional<Mat4>& slot, const Mat4& value) {
    if (slot)
      *slot += value;
    else
      slot = value;
  }

  // partial_[k][f]: weighted word integrand up to and including the k-th jump,
  // f of which are forward (or all of which, when merged).
  void recurse(int k, double start) {
    const Mat4 tail = no_jump(length_ - start);
    for (int f = 0; f <= k; ++f) {
      if (!partial_[k][f]) continue;
      const int s = k - f;
      if (merged_)
        accumulate(table_->entries[f][0], *partial_[k][f] * tail);
      else
        accumulate(table_->entries[f][s], *partial_[k][f] * tail);
    }
    if (k == depth_max_) return;

    const int order =
        reduced_ ? reduced_order(base_order_, k + 1) : tapered_order(base_order_, k + 1);
    const GaussRule& rule = gauss_legendre(order);
    const double span = length_ - start;
    for (int i = 0; i < order; ++i) {
      const double r = start + span * rule.nodes[i];
      const Mat4 y = (span * rule.weights[i]) * no_jump(r - start);
      auto& next = partial_[k + 1];
      for (auto& slot : next) slot.reset();
      for (int f = 0; f <= k; ++f) {
        if (!partial_[k][f]) continue;
        const Mat4 py = *partial_[k][f] * y;
        if (merged_) {
          accumulate(next[f + 1], py * jsum_);
          continue;
        }
        const int s = k - f;
        if (f + 1 <= cap_f_) accumulate(next[f + 1], py * jf_);
        if (s + 1 <= cap_s_) accumulate(next[f], py * js_);
      }
      recurse(k + 1, r);
    }
  }

  const Model& model_;
  int base_order_;
  bool reduced_;
  Mat4 jf_, js_, jsum_;
  Complex2x2 generator_;

  double length_ = 0.0;
  SegmentTable* table_ = nullptr;
  int cap_f_ = 0, cap_s_ = 0, depth_max_ = 0;
  bool merged_ = false;
  std::vector<std::vector<std::optional<Mat4>>> partial_;
};

int channel_cap(const ChannelEvent& c, int window, int n_max) {
  if (window >= 0) return c.windows[window].count;
  return c.outside == Outside::kUnconstrained ? n_max : 0;
}

Superop integrate_event(const Model& m, const Event& e, const DaviesOptions& opts, bool reduced) {
  const std::vector<Segment> segs = segments(e, opts.max_segment_length);
  const std::size_t nf = e.forward.windows.size();
  const std::size_t ns = e.side.windows.size();

  SegmentIntegrator integrator(m, opts.quad_order, reduced);
  std::map<std::tuple<double, int, int, bool>, SegmentTable> cache;

  // DP state: counts per forward window, per side window, then the total.
  using Key = std::vector<int>;
  std::map<Key, Mat4> states;
  states.emplace(Key(nf + ns + 1, 0), Mat4::Identity());

  for (const Segment& seg : segs) {
    const int cap_f = channel_cap(e.forward, seg.forward_window, opts.n_max);
    const int cap_s = channel_cap(e.side, seg.side_window, opts.n_max);
    const bool merged = seg.forward_window < 0 && seg.side_window < 0 && cap_f > 0 && cap_s > 0;
    const auto key = std::make_tuple(seg.length(), cap_f, cap_s, merged);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, integrator.integrate(seg.length(), cap_f, cap_s, merged, opts.n_max))
               .first;
    const SegmentTable& table = it->second;

    std::map<Key, Mat4> next;
    for (const auto& [state, value] : states) {
      for (std::size_t f = 0; f < table.entries.size(); ++f) {
        for (std::size_t s = 0; s < table.entries[f].size(); ++s) {
          if (!table.entries[f][s]) continue;
          Key k = state;
          k.back() += static_cast<int>(f + s);
          if (k.back() > opts.n_max) continue;
          if (seg.forward_window >= 0) {
            int& c = k[seg.forward_window];
            c += static_cast<int>(f);
            if (c > e.forward.windows[seg.forward_window].count) continue;
          }
          if (seg.side_window >= 0) {
            int& c = k[nf + seg.side_window];
            c += static_cast<int>(s);
            if (c > e.side.windows[seg.side_window].count) continue;
          }
          const Mat4 contribution = value * *table.entries[f][s];
          auto [pos, inserted] = next.emplace(std::move(k), contribution);
          if (!inserted) pos->second += contribution;
        }
      }
    }
    states = std::move(next);
  }

  Mat4 total = Mat4::Zero();
  for (const auto& [state, value] : states) {
    bool exact = true;
    for (std::size_t i = 0; i < nf; ++i) exact = exact && state[i] == e.forward.windows[i].count;
    for (std::size_t i = 0; i < ns; ++i) exact = exact && state[nf + i] == e.side.windows[i].count;
    if (exact) total += value;
  }
  return Superop(total);
}

double unconstrained_length(const Event& e) {
  double len = 0.0;
  for (const Segment& seg : segments(e)) {
    const bool free_f = seg.forward_window < 0 && e.forward.outside == Outside::kUnconstrained;
    const bool free_s = seg.side_window < 0 && e.side.outside == Outside::kUnconstrained;
    if (free_f || free_s) len += seg.length();
  }
  return len;
}

}  // namespace

MapResult davies_map(const Model& m, const Event& e, const DaviesOptions& opts) {
  e.validate();
  if (opts.n_max < 0) throw ValidationError("n_max must be non-negative");
  if (opts.quad_order < 1) throw ValidationError("quad_order must be positive");
  if (!(opts.max_segment_length > 0.0))
    throw ValidationError("max_segment_length must be positive");
  if (e.total_count() > opts.n_max)
    throw CapacityError("event demands " + std::to_string(e.total_count()) +
                        " detections, above n_max = " + std::to_string(opts.n_max));

  MapResult result;
  if (e.impossible()) return result;

  result.map = integrate_event(m, e, opts, false);
  const Superop coarse = integrate_event(m, e, opts, true);
  result.quadrature_error = frobenius_dist(result.map, coarse);

  const double free_len = unconstrained_length(e);
  if (free_len > 0.0)
    result.truncation_error =
        poisson_upper_tail(detection_rate_bound(m) * free_len, opts.n_max - e.total_count());
  return result;
}

double probability(const Model& m, const DensityMatrix& rho, const Event& e,
                   const DaviesOptions& opts) {
  const MapResult r = davies_map(m, e, opts);
  return (rho.matrix() * r.map(Complex2x2::Identity())).trace().real();
}

}  // namespace davies
