#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "trajeval/metric_efe.hpp"

using namespace trajeval;
using namespace trajeval::testing;

TEST(DSingleton, Cases) {
  EXPECT_EQ(d_singleton(Point2{0, 0}, Point2{3, 4}, 5.0), 5.0);
  EXPECT_EQ(d_singleton(Point2{0, 0}, Point2{3, 4}, 10.0), 5.0);
  EXPECT_EQ(d_singleton(std::nullopt, Point2{1, 1}, 5.0), 5.0);
  EXPECT_EQ(d_singleton(Point2{9, 9}, std::nullopt, 5.0), 0.0);
  EXPECT_EQ(d_singleton(Point2{0, 0}, Point2{0, 0}, 5.0), 0.0);
  EXPECT_EQ(d_singleton(std::nullopt, std::nullopt, 5.0), 0.0);
  EXPECT_EQ(d_singleton(Point2{0, 0}, Point2{30, 40}, 5.0), 5.0);
}

TEST(TrackDistance, HandEvaluated) {
  const Track full = make_track("p", {{1, {0, 0}}, {2, {1, 1}}, {3, {2, 2}}});
  const Track two = make_track("g", {{1, {0, 0}}, {2, {1, 1}}});
  EXPECT_EQ(track_distance(full, full, 5.0), 0.0);
  // Prediction overruns the ground truth: free.
  EXPECT_EQ(track_distance(full, two, 5.0), 0.0);
  // Ground truth overruns the prediction: one c over three steps.
  EXPECT_NEAR(track_distance(two, full, 5.0), 5.0 / 3.0, 1e-12);
}

TEST(TrackDistance, DisjointDomainsStillScored) {
  const Track a = make_track("a", {{1, {0, 0}}, {2, {0, 0}}});
  const Track b = make_track("b", {{3, {0, 0}}, {4, {0, 0}}});
  // Two prediction-only steps (0) and two gt-only steps (c).
  EXPECT_EQ(track_distance(a, b, 5.0), 2.5);
}

TEST(Efe, EmptyConventions) {
  const TrackSet s({make_track("a", {{1, {0, 0}}})});
  EXPECT_EQ(efe(TrackSet{}, TrackSet{}).value, 0.0);
  EXPECT_EQ(efe(s, TrackSet{}).value, 5.0);
  EXPECT_EQ(efe(TrackSet{}, s).value, 5.0);
  EXPECT_EQ(efe(s, TrackSet{}, 2.0).value, 2.0);
  EXPECT_EQ(efe(s, s).value, 0.0);
}

TEST(Efe, OnePredictionTwoGroundTruths) {
  const TrackSet preds({make_track("p", {{1, {0, 0}}, {2, {1, 0}}})});
  const TrackSet gts({make_track("g1", {{1, {0, 0}}, {2, {1, 0}}}), make_track("g2", {{1, {10, 0}}, {2, {11, 0}}})});
  const auto r = efe(preds, gts, 5.0);
  EXPECT_EQ(r.value, 2.5);
  EXPECT_EQ(r.cardinality_gap, 1u);
  EXPECT_EQ(r.localization_term, 0.0);
  EXPECT_EQ(r.cardinality_term, 2.5);
  ASSERT_EQ(r.matched.size(), 1u);
  EXPECT_EQ(r.matched[0], (std::pair<std::string, std::string>{"p", "g1"}));
}

TEST(Efe, ExtraGroundTruthTrack) {
  std::vector<Track> preds, gts;
  for (int i = 0; i < 4; ++i) {
    const double x = 3.0 * i;
    preds.push_back(make_track("p" + std::to_string(i), {{0, {x, 0}}, {1, {x, 1}}}));
    gts.push_back(make_track("g" + std::to_string(i), {{0, {x, 0}}, {1, {x, 1}}}));
  }
  gts.push_back(make_track("extra", {{0, {50, 50}}, {1, {50, 51}}}));
  EXPECT_EQ(efe(TrackSet(preds), TrackSet(gts), 5.0).value, 1.0);
}

TEST(Efe, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(31337);
  for (int iter = 0; iter < 300; ++iter) {
    const RawSet p = random_set(rng, 5, 6), g = random_set(rng, 5, 6);
    const auto r = efe(to_track_set(p), to_track_set(g), 5.0);
    EXPECT_NEAR(r.value, oracle_efe(p, g, 5.0), 1e-9);
    EXPECT_EQ(r.value, r.localization_term + r.cardinality_term);
    EXPECT_GE(r.value, 0.0);
    EXPECT_LE(r.value, 5.0);
  }
}

TEST(Efe, LabelAndRigidMotionInvariance) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> ang(-3.14, 3.14), shift(-100, 100);
  for (int iter = 0; iter < 200; ++iter) {
    const RawSet p = random_set(rng, 5, 6, false), g = random_set(rng, 5, 6, false);
    const double base = efe(to_track_set(p), to_track_set(g)).value;
    EXPECT_NEAR(efe(relabel(to_track_set(p), rng), relabel(to_track_set(g), rng)).value, base, 1e-9);
    const double a = ang(rng), tx = shift(rng), ty = shift(rng);
    EXPECT_NEAR(efe(to_track_set(rigid_motion(p, a, tx, ty)), to_track_set(rigid_motion(g, a, tx, ty))).value, base,
                1e-9);
  }
}

TEST(Efe, NotSymmetricInGeneral) {
  const TrackSet shorter({make_track("a", {{1, {0, 0}}})});
  const TrackSet longer({make_track("b", {{1, {0, 0}}, {2, {0, 0}}})});
  EXPECT_EQ(efe(longer, shorter).value, 0.0);
  EXPECT_EQ(efe(shorter, longer).value, 2.5);
}

TEST(Efe, RejectsNonPositiveCutoff) {
  EXPECT_THROW(efe(TrackSet{}, TrackSet{}, 0.0), Error);
}
