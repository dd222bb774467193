#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "davies/davies_map.hpp"
#include "davies/errors.hpp"

using namespace davies;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

Event side_then_forward(double t) {
  Event e;
  e.horizon = t;
  e.side = ChannelEvent::exactly(1, 0.0, 0.4 * t);
  e.forward = ChannelEvent::exactly(1, 0.5 * t, t);
  return e;
}

}  // namespace

TEST(DaviesMap, NoPhotonsIsYMap) {
  const Model m = symmetric_model();
  for (double t : {0.3, 1.0, 2.5}) {
    const MapResult r = davies_map(m, Event::no_photons(t));
    EXPECT_LT(frobenius_dist(r.map, y_map(m, t)), 1e-10);
  }
}

TEST(DaviesMap, IdealityOnRandomModels) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const double theta = 0.5 * M_PI * u(rng);
    const Model m = build_model(std::polar(std::cos(theta), 6.0 * u(rng)),
                                std::polar(std::sin(theta), 6.0 * u(rng)),
                                std::polar(2.0 * u(rng), 6.0 * u(rng)));
    const double t = 2.0 * (1.0 - u(rng));
    EXPECT_LT(frobenius_dist(davies_map(m, Event::no_photons(t)).map, ad_map(no_jump_B(m, t))),
              1e-10);
  }
}

TEST(DaviesMap, Normalization) {
  const Model m = symmetric_model();
  const MapResult r = davies_map(m, Event::full(0.1));
  EXPECT_LT(frobenius_dist(r.map(Complex2x2::Identity()), Complex2x2::Identity()), 1e-8);
  EXPECT_LT(r.error_estimate(), 1e-8);
}

TEST(DaviesMap, FullEventMatchesMasterExponential) {
  const Model m = symmetric_model();
  EXPECT_LT(frobenius_dist(davies_map(m, Event::full(0.1)).map, master_map(m, 0.1)), 1e-8);
}

TEST(DaviesMap, CompletelyPositive) {
  const Model m = symmetric_model();
  for (const Event& e : {Event::no_photons(1.0), Event::full(0.5), side_then_forward(1.0)})
    EXPECT_GE(choi_min_eigenvalue(davies_map(m, e).map), -1e-10);
}

TEST(DaviesMap, SigmaAdditivityOverSideCounts) {
  const Model m = symmetric_model();
  const DaviesOptions opts;
  const double t = 0.5;
  Superop sum;
  for (int k = 0; k <= opts.n_max; ++k) {
    Event e{ChannelEvent::any(), ChannelEvent::exactly(k, 0.0, t), t};
    sum += davies_map(m, e, opts).map;
  }
  EXPECT_LT(frobenius_dist(sum, davies_map(m, Event::full(t), opts).map), 1e-8);
}

TEST(DaviesMap, SigmaAdditivityOverWindowSplit) {
  const Model m = symmetric_model();
  const double t = 1.0;
  Event whole{ChannelEvent::none(), ChannelEvent::exactly(1, 0.0, t), t};
  Event left{ChannelEvent::none(), {{Window{0.0, 0.3, 1}, Window{0.3, t, 0}}, Outside::kZero}, t};
  Event right{ChannelEvent::none(), {{Window{0.0, 0.3, 0}, Window{0.3, t, 1}}, Outside::kZero}, t};
  EXPECT_LT(frobenius_dist(davies_map(m, left).map + davies_map(m, right).map,
                           davies_map(m, whole).map),
            1e-10);
}

TEST(DaviesMap, ContinuityAtZeroIsLinear) {
  const Model m = symmetric_model();
  double prev = 0.0;
  for (double t : {1e-1, 1e-2, 1e-3}) {
    const double d = frobenius_dist(davies_map(m, Event::no_photons(t)).map, Superop::identity());
    EXPECT_LT(d, 5.0 * t);
    if (prev > 0.0) EXPECT_NEAR(std::log10(prev / d), 1.0, 0.1);
    prev = d;
  }
}

TEST(DaviesMap, CompositionOfOnePhotonWindows) {
  const Model m = symmetric_model();
  const Event a = side_then_forward(0.6);
  const Event b{ChannelEvent::exactly(1, 0.1, 0.5), ChannelEvent::exactly(1, 0.0, 0.7), 0.8};
  const Superop joined = davies_map(m, concatenate(a, b)).map;
  EXPECT_LT(frobenius_dist(joined, davies_map(m, a).map * davies_map(m, b).map), 1e-7);
  EXPECT_GT(frobenius_dist(joined, davies_map(m, b).map * davies_map(m, a).map), 1e-5);
}

TEST(Probability, Examples) {
  const Model undriven = build_model(kR, kR, 0.0);
  EXPECT_NEAR(probability(undriven, DensityMatrix::ground(), Event::no_photons(3.0)), 1.0, 1e-14);
  for (double t : {0.5, 2.0})
    EXPECT_NEAR(probability(undriven, DensityMatrix::excited(), Event::no_photons(t)),
                std::exp(-t), 1e-12);
  const Model m = build_model(0.6, 0.8, 0.0);
  Event one_side{ChannelEvent::none(), ChannelEvent::exactly(1, 0.0, 40.0), 40.0};
  EXPECT_NEAR(probability(m, DensityMatrix::excited(), one_side), 0.64, 1e-9);
}

TEST(DaviesMap, Errors) {
  const Model m = symmetric_model();
  Event too_many{ChannelEvent::exactly(4, 0.0, 1.0), ChannelEvent::exactly(3, 0.0, 1.0), 1.0};
  EXPECT_THROW(davies_map(m, too_many), CapacityError);
  Event overlap{ChannelEvent::none(),
                {{Window{0.0, 0.6, 1}, Window{0.5, 1.0, 0}}, Outside::kZero},
                1.0};
  EXPECT_THROW(davies_map(m, overlap), ValidationError);
  Event outside{ChannelEvent::exactly(1, 0.5, 2.0), ChannelEvent::none(), 1.0};
  EXPECT_THROW(davies_map(m, outside), ValidationError);
}

TEST(DaviesMap, ZeroLengthWindowWithCountIsZeroMap) {
  Event e{ChannelEvent::exactly(1, 0.5, 0.5), ChannelEvent::none(), 1.0};
  EXPECT_LT(frobenius_norm(davies_map(symmetric_model(), e).map), 1e-15);
}

TEST(Segments, CutsAtWindowsAndSplits) {
  const Event e = side_then_forward(1.0);
  const auto segs = segments(e);
  ASSERT_EQ(segs.size(), 3u);
  EXPECT_EQ(segs[0].side_window, 0);
  EXPECT_EQ(segs[0].forward_window, -1);
  EXPECT_EQ(segs[1].side_window, -1);
  EXPECT_EQ(segs[2].forward_window, 0);
  EXPECT_EQ(segments(Event::full(2.5), 1.0).size(), 3u);
}
