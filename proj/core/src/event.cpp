#include "davies/event.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "davies/errors.hpp"

namespace davies {
namespace {

void validate_channel(const ChannelEvent& c, double horizon, const char* name) {
  std::vector<Window> sorted = c.windows;
  for (const Window& w : sorted) {
    if (!std::isfinite(w.begin) || !std::isfinite(w.end))
      throw ValidationError(std::string(name) + ": window bounds must be finite");
    if (w.begin < 0.0 || w.end > horizon || w.begin > w.end)
      throw ValidationError(std::string(name) + ": window [" + std::to_string(w.begin) + ", " +
                            std::to_string(w.end) + ") not contained in [0, horizon)");
    if (w.count < 0) throw ValidationError(std::string(name) + ": negative window count");
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const Window& a, const Window& b) { return a.begin < b.begin; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].begin < sorted[i - 1].end)
      throw ValidationError(std::string(name) + ": overlapping windows");
}

int window_at(const ChannelEvent& c, double a, double b) {
  for (std::size_t i = 0; i < c.windows.size(); ++i)
    if (c.windows[i].begin <= a && b <= c.windows[i].end) return static_cast<int>(i);
  return -1;
}

}  // namespace

int ChannelEvent::total_count() const {
  int n = 0;
  for (const Window& w : windows) n += w.count;
  return n;
}

void Event::validate() const {
  if (!std::isfinite(horizon) || horizon < 0.0)
    throw ValidationError("event horizon must be finite and non-negative");
  validate_channel(forward, horizon, "forward");
  validate_channel(side, horizon, "side");
}

bool Event::impossible() const {
  for (const ChannelEvent* c : {&forward, &side})
    for (const Window& w : c->windows)
      if (w.count > 0 && !(w.end > w.begin)) return true;
  return false;
}

Event concatenate(const Event& first, const Event& second) {
  if (first.forward.outside != second.forward.outside ||
      first.side.outside != second.side.outside)
    throw ValidationError("concatenate: outside policies differ");
  Event out{first.forward, first.side, first.horizon + second.horizon};
  for (Window w : second.forward.windows) {
    w.begin += first.horizon;
    w.end += first.horizon;
    out.forward.windows.push_back(w);
  }
  for (Window w : second.side.windows) {
    w.begin += first.horizon;
    w.end += first.horizon;
    out.side.windows.push_back(w);
  }
  return out;
}

std::vector<Segment> segments(const Event& e, double max_length) {
  std::vector<double> cuts{0.0, e.horizon};
  for (const ChannelEvent* c : {&e.forward, &e.side})
    for (const Window& w : c->windows) {
      cuts.push_back(w.begin);
      cuts.push_back(w.end);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    const int fw = window_at(e.forward, a, b);
    const int sw = window_at(e.side, a, b);
    const int pieces =
        std::isfinite(max_length) ? std::max(1, static_cast<int>(std::ceil((b - a) / max_length)))
                                  : 1;
    for (int k = 0; k < pieces; ++k) {
      const double lo = a + (b - a) * k / pieces;
      const double hi = (k + 1 == pieces) ? b : a + (b - a) * (k + 1) / pieces;
      out.push_back({lo, hi, fw, sw});
    }
  }
  return out;
}

}  // namespace davies
