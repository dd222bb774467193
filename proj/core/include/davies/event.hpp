#pragma once

#include <limits>
#include <vector>

namespace davies {

enum class Channel { kForward, kSide };

// What a channel event says about detections outside its windows.
enum class Outside { kZero, kUnconstrained };

// Exactly `count` detections in the half-open interval [begin, end).
struct Window {
  double begin = 0.0;
  double end = 0.0;
  int count = 0;
};

// Cylinder event for one detector: disjoint windows with exact counts plus a
// policy for the remainder of [0, horizon).
struct ChannelEvent {
  std::vector<Window> windows;
  Outside outside = Outside::kZero;

  int total_count() const;

  static ChannelEvent none() { return {}; }
  static ChannelEvent any() { return {{}, Outside::kUnconstrained}; }
  static ChannelEvent exactly(int count, double begin, double end,
                              Outside outside = Outside::kZero) {
    return {{Window{begin, end, count}}, outside};
  }
};

// Joint forward x side event observed over [0, horizon). Internal times are
// emission times measured from the start of observation.
struct Event {
  ChannelEvent forward;
  ChannelEvent side;
  double horizon = 0.0;

  int total_count() const { return forward.total_count() + side.total_count(); }
  // Throws ValidationError for overlapping or out-of-range windows.
  void validate() const;
  // True when some zero-length window demands a detection.
  bool impossible() const;

  static Event no_photons(double horizon) { return {ChannelEvent::none(), ChannelEvent::none(), horizon}; }
  static Event full(double horizon) { return {ChannelEvent::any(), ChannelEvent::any(), horizon}; }
};

// `first` on [0, t1) followed by `second` shifted to [t1, t1 + t2). Both
// events must use the same outside policy per channel.
Event concatenate(const Event& first, const Event& second);

// Maximal subintervals of [0, horizon) on which each channel is either inside
// one window or outside all windows; long pieces are split to max_length.
struct Segment {
  double begin = 0.0;
  double end = 0.0;
  int forward_window = -1;  // index into forward.windows, -1 when outside
  int side_window = -1;

  double length() const { return end - begin; }
};

std::vector<Segment> segments(const Event& e,
                              double max_length = std::numeric_limits<double>::infinity());

}  // namespace davies
