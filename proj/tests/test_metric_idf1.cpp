#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "trajeval/metric_idf1.hpp"

using namespace trajeval;
using namespace trajeval::testing;

namespace {
const TimeRange kWindow(TimeIndex(0), TimeIndex(5));
}

TEST(Idf1, PerfectPrediction) {
  const TrackSet g({make_track("g", {{0, {0, 0}}, {1, {1, 0}}}), make_track("h", {{2, {5, 5}}})});
  const auto r = idf1(g, g, 1.0, kWindow);
  EXPECT_EQ(r.value, 100.0);
  EXPECT_EQ(r.counts, (IdCounts{3, 0, 0}));
}

TEST(Idf1, EmptyPrediction) {
  const TrackSet g({make_track("g", {{0, {0, 0}}, {1, {1, 0}}, {2, {2, 0}}})});
  const auto r = idf1(TrackSet{}, g, 1.0, kWindow);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.counts.idfn, 3u);
  EXPECT_EQ(r.counts.idtp, 0u);
}

TEST(Idf1, BothEmpty) {
  const auto r = idf1(TrackSet{}, TrackSet{}, 1.0, kWindow);
  EXPECT_EQ(r.value, 100.0);
  EXPECT_EQ(r.counts, IdCounts{});
}

TEST(Idf1, HalfMatchedTrack) {
  const TrackSet g({make_track("g", {{0, {0, 0}}, {1, {1, 0}}, {2, {2, 0}}, {3, {3, 0}}})});
  const TrackSet p({make_track("p", {{0, {0, 0.5}}, {1, {1, 0}}, {2, {2, 3}}, {3, {3, -3}}})});
  const auto r = idf1(p, g, 1.0, kWindow);
  EXPECT_EQ(r.counts, (IdCounts{2, 2, 2}));
  EXPECT_EQ(r.value, 50.0);
}

TEST(Idf1, SingleGlobalIdentity) {
  // The prediction follows g1 for two frames then g2 for three frames; only
  // one identity may be credited.
  const TrackSet g({make_track("g1", {{0, {0, 0}}, {1, {0, 0}}, {2, {0, 0}}, {3, {0, 0}}, {4, {0, 0}}}),
                    make_track("g2", {{0, {9, 9}}, {1, {9, 9}}, {2, {9, 9}}, {3, {9, 9}}, {4, {9, 9}}})});
  const TrackSet p({make_track("p", {{0, {0, 0}}, {1, {0, 0}}, {2, {9, 9}}, {3, {9, 9}}, {4, {9, 9}}})});
  const auto r = idf1(p, g, 1.0, kWindow);
  EXPECT_EQ(r.counts, (IdCounts{3, 2, 7}));
}

TEST(Idf1, OutsideWindowIgnored) {
  const TrackSet g({make_track("g", {{0, {0, 0}}, {9, {0, 0}}})});
  const auto r = idf1(g, g, 1.0, kWindow);
  EXPECT_EQ(r.counts, (IdCounts{1, 0, 0}));
}

TEST(Idf1, MatchesOracleAndProperties) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> thr(0.5, 8.0);
  for (int iter = 0; iter < 300; ++iter) {
    const RawSet p = random_set(rng, 4, 6), g = random_set(rng, 4, 6);
    const TrackSet ps = to_track_set(p), gs = to_track_set(g);
    const double t = thr(rng);
    const auto r = idf1(ps, gs, t, kWindow);
    EXPECT_EQ(r.counts.idtp, oracle_idtp(p, g, t));
    EXPECT_EQ(r.counts.idtp + r.counts.idfp, ps.state_count());
    EXPECT_EQ(r.counts.idtp + r.counts.idfn, gs.state_count());
    EXPECT_GE(r.value, 0.0);
    EXPECT_LE(r.value, 100.0);

    const auto swapped = idf1(gs, ps, t, kWindow);
    EXPECT_EQ(swapped.value, r.value);
    EXPECT_EQ(swapped.counts.idfp, r.counts.idfn);

    EXPECT_LE(idf1(ps, gs, t * 0.5, kWindow).value, r.value);
    EXPECT_EQ(idf1(relabel(ps, rng), gs, t, kWindow).value, r.value);
  }
}

TEST(Idf1, RejectsNonPositiveThreshold) {
  EXPECT_THROW(idf1(TrackSet{}, TrackSet{}, 0.0, kWindow), Error);
}
