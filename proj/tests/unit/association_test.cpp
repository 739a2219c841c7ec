/* Copyright 2026 The TDAM Tracker Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "assignment_oracle.hpp"
#include "hmm_oracles.hpp"
#include "tdam/assoc/affinity.hpp"
#include "tdam/assoc/hungarian.hpp"
#include "tdam/hmm/learning.hpp"
#include "tdam/io/simulate.hpp"
#include "test_util.hpp"

namespace tdam::assoc {
namespace {

using testing::SimpleModel;
using testing::V;

const Matrix2 kLambda = (Matrix2() << 400.0, 0.0, 0.0, 2500.0).finished();

TrackSnapshot At(double x, double y, double h = 100.0, double w = 40.0) {
  TrackSnapshot t;
  t.tail_position = Vector2(x, y);
  t.shape_height = h;
  t.shape_width = w;
  return t;
}

DetectionObs Det(double x, double y, double h = 100.0, double w = 40.0) {
  DetectionObs d;
  d.position = Vector2(x, y);
  d.height = h;
  d.width = w;
  return d;
}

// --- motion -------------------------------------------------------------------

TEST(MotionAffinity, PeakDensity) {
  const double got = MotionAffinity(At(100, 200), Det(100, 200), kLambda);
  EXPECT_NEAR(std::exp(got), 1.0 / (2000.0 * std::numbers::pi), 1e-12);
  EXPECT_NEAR(got, std::log(1.5915494309189535e-4), 1e-9);
}

TEST(MotionAffinity, OneMahalanobisUnitOffset) {
  const double peak = MotionAffinity(At(0, 0), Det(0, 0), kLambda);
  EXPECT_NEAR(MotionAffinity(At(0, 0), Det(20, 0), kLambda), peak - 0.5, 1e-12);
  EXPECT_NEAR(MotionAffinity(At(0, 0), Det(0, 50), kLambda), peak - 0.5, 1e-12);
}

TEST(MotionAffinity, SymmetricOffsets) {
  EXPECT_EQ(MotionAffinity(At(0, 0), Det(13, -7), kLambda),
            MotionAffinity(At(0, 0), Det(-13, 7), kLambda));
}

TEST(MotionAffinity, UsesVelocityTimesGap) {
  TrackSnapshot t = At(10, 10);
  t.velocity = Vector2(3, -1);
  t.frame_gap = 4;
  const double peak = MotionAffinity(At(0, 0), Det(0, 0), kLambda);
  EXPECT_NEAR(MotionAffinity(t, Det(22, 6), kLambda), peak, 1e-12);
}

TEST(MotionAffinity, RejectsNonPositiveDefiniteLambda) {
  const Matrix2 bad = (Matrix2() << 1.0, 2.0, 2.0, 1.0).finished();
  EXPECT_THROW(MotionAffinity(At(0, 0), Det(0, 0), bad), InputError);
  EXPECT_THROW(MotionAffinity(At(0, 0), Det(0, 0), Matrix2::Zero()), InputError);
}

// --- shape ---------------------------------------------------------------------

TEST(ShapeAffinity, IdenticalIsZero) {
  EXPECT_EQ(ShapeAffinity(At(0, 0, 80, 30), Det(5, 5, 80, 30)), 0.0);
}

TEST(ShapeAffinity, HalfHeight) {
  const double got = ShapeAffinity(At(0, 0, 100, 40), Det(0, 0, 50, 40));
  EXPECT_NEAR(got, -1.0 / 6.0, 1e-15);
  EXPECT_NEAR(std::exp(got), std::exp(-1.0 / 6.0), 1e-12);
}

TEST(ShapeAffinity, SymmetricInSizes) {
  EXPECT_EQ(ShapeAffinity(At(0, 0, 120, 35), Det(0, 0, 90, 50)),
            ShapeAffinity(At(0, 0, 90, 50), Det(0, 0, 120, 35)));
}

TEST(ShapeAffinity, RejectsNonPositiveSizes) {
  EXPECT_THROW(ShapeAffinity(At(0, 0), Det(0, 0, 0, 10)), InputError);
  EXPECT_THROW(ShapeAffinity(At(0, 0, -1, 10), Det(0, 0)), InputError);
}

// --- appearance ------------------------------------------------------------------

TEST(AppearanceAffinity, SingleStateEqualsDensity) {
  std::mt19937_64 rng(1);
  const auto model = oracle::RandomModel(1, 2, 3, rng);
  const auto window = hmm::AppearanceWindow::FromSequence(oracle::RandomSequence(4, 3, rng));
  TrackSnapshot t = At(0, 0);
  t.appearance = MakeAppearanceCache(AppearanceMode::kTdam, model, window, Matrix(), 1.0);
  DetectionObs d = Det(0, 0);
  d.appearance = V({0.1, -0.3, 1.2});
  EXPECT_NEAR(AppearanceAffinity(t, d), model.densities()[0].LogDensity(d.appearance), 1e-12);
  // Pure: scoring twice gives bit-identical values.
  EXPECT_EQ(AppearanceAffinity(t, d), AppearanceAffinity(t, d));
}

TEST(AppearanceAffinity, EmptyCacheScoresZero) {
  DetectionObs d = Det(0, 0);
  d.appearance = V({1, 2});
  EXPECT_EQ(AppearanceAffinity(At(0, 0), d), 0.0);
}

TEST(AppearanceAffinity, SpatialOnlyIgnoresWindowOrder) {
  std::mt19937_64 rng(2);
  const auto model = oracle::RandomModel(3, 2, 2, rng);
  auto seq = oracle::RandomSequence(6, 2, rng);
  Matrix occ = Matrix::Constant(3, 2, 1.0);
  occ(0, 0) = 4.0;
  TrackSnapshot a = At(0, 0), b = At(0, 0);
  a.appearance = MakeAppearanceCache(AppearanceMode::kSpatialOnly, model,
                                     hmm::AppearanceWindow::FromSequence(seq), occ, 1.0);
  std::reverse(seq.begin(), seq.end());
  b.appearance = MakeAppearanceCache(AppearanceMode::kSpatialOnly, model,
                                     hmm::AppearanceWindow::FromSequence(seq), occ, 1.0);
  for (const auto& o : oracle::RandomSequence(10, 2, rng)) {
    DetectionObs d = Det(0, 0);
    d.appearance = o;
    EXPECT_EQ(AppearanceAffinity(a, d), AppearanceAffinity(b, d));
    // Occupancy-weighted mixture over every (state, component).
    double want = 0.0;
    for (int i = 0; i < 3; ++i) {
      want += occ.row(i).sum() / occ.sum() * oracle::StateDensity(model, i, o);
    }
    EXPECT_NEAR(AppearanceAffinity(a, d), std::log(want), 1e-12);
  }
}

TEST(AppearanceAffinity, FeatureDistanceUsesWindowMean) {
  const auto model = SimpleModel(Matrix::Identity(1, 1), {V({0, 0})});
  const auto window = hmm::AppearanceWindow::FromSequence({V({0, 0}), V({2, 4})});
  TrackSnapshot t = At(0, 0);
  t.appearance =
      MakeAppearanceCache(AppearanceMode::kFeatureDistance, model, window, Matrix(), 2.0);
  DetectionObs d = Det(0, 0);
  d.appearance = V({4, 6});
  EXPECT_NEAR(AppearanceAffinity(t, d), -5.0 / 2.0, 1e-15);
}

TEST(AppearanceMode, NamesRoundTrip) {
  for (auto m : {AppearanceMode::kTdam, AppearanceMode::kSpatialOnly,
                 AppearanceMode::kFeatureDistance}) {
    EXPECT_EQ(ParseAppearanceMode(ToString(m)), m);
  }
  EXPECT_THROW(ParseAppearanceMode("hmm"), InputError);
}

// Two targets share three emission states but cycle through them in opposite
// orders. A model adapted to each target's stream must prefer its own target's
// next appearance.
TEST(AppearanceAffinity, TemporalOrderSeparatesTargets) {
  const std::vector<Vector> means = {V({3, 0}), V({-1.5, 2.6}), V({-1.5, -2.6})};
  Matrix fwd(3, 3);
  fwd << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  const Matrix bwd = fwd.transpose();
  const auto truth_a = SimpleModel(fwd, means, 0.3);
  const auto truth_b = SimpleModel(bwd, means, 0.3);

  std::mt19937_64 rng(3);
  const auto train_a = io::SampleAppearances(truth_a, 150, rng);
  const auto train_b = io::SampleAppearances(truth_b, 150, rng);
  std::vector<Vector> pooled = train_a;
  pooled.insert(pooled.end(), train_b.begin(), train_b.end());
  hmm::GeneralModelOptions gm;
  gm.num_states = 3;
  gm.num_components = 1;
  const auto general = hmm::InitGeneralModel(pooled, gm);

  auto adapt = [&](const std::vector<Vector>& data) {
    hmm::TdamModel m = general;
    hmm::SufficientStats s = hmm::SufficientStats::Zero(3, 1, 2);
    hmm::AppearanceWindow w(8);
    hmm::LearningOptions opt;
    opt.variance_floor = 0.09;
    for (std::size_t t = 0; t < data.size(); ++t) {
      w.Push(data[t], static_cast<long>(t));
      auto up = hmm::IncrementalUpdate(m, s, w, opt);
      m = std::move(up.model);
      s = std::move(up.stats);
    }
    return m;
  };
  const auto model_a = adapt(train_a);
  const auto model_b = adapt(train_b);

  int wins = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const auto seq = io::SampleAppearances(truth_a, 9, rng);
    const auto window =
        hmm::AppearanceWindow::FromSequence(std::vector<Vector>(seq.begin(), seq.end() - 1));
    DetectionObs d = Det(0, 0);
    d.appearance = seq.back();
    TrackSnapshot ta = At(0, 0), tb = At(0, 0);
    ta.appearance = MakeAppearanceCache(AppearanceMode::kTdam, model_a, window, Matrix(), 1.0);
    tb.appearance = MakeAppearanceCache(AppearanceMode::kTdam, model_b, window, Matrix(), 1.0);
    if (AppearanceAffinity(ta, d) > AppearanceAffinity(tb, d)) ++wins;
  }
  EXPECT_GE(wins, 190);
}

// --- cost matrix ---------------------------------------------------------------------

TEST(CostMatrix, UnitAffinitiesGiveZeroCost) {
  // Identity affinities everywhere: lambda scaled so the motion peak is 1.
  const Matrix2 unit = Matrix2::Identity() / (2.0 * std::numbers::pi);
  const auto cm = BuildCostMatrix({At(0, 0), At(0, 0)}, {Det(0, 0), Det(0, 0), Det(0, 0)},
                                  unit, kDefaultGate);
  EXPECT_LT(cm.cost.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CostMatrix, EmptyDetectionsLeaveTracksUnmatched) {
  const auto cm = BuildCostMatrix({At(0, 0), At(5, 5)}, {}, kLambda, kDefaultGate);
  EXPECT_EQ(cm.cost.rows(), 2);
  EXPECT_EQ(cm.cost.cols(), 0);
  const auto a = Hungarian(cm.cost);
  EXPECT_TRUE(a.pairs.empty());
  EXPECT_EQ(a.unmatched_rows, (std::vector<int>{0, 1}));
}

std::vector<TrackSnapshot> RandomTracks(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> p(0, 200), s(40, 120);
  std::vector<TrackSnapshot> out;
  for (int i = 0; i < n; ++i) out.push_back(At(p(rng), p(rng), s(rng), s(rng) / 2));
  return out;
}

std::vector<DetectionObs> RandomDets(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> p(0, 200), s(40, 120);
  std::vector<DetectionObs> out;
  for (int i = 0; i < n; ++i) out.push_back(Det(p(rng), p(rng), s(rng), s(rng) / 2));
  return out;
}

TEST(CostMatrix, BreakdownReconstructsEntriesAndGateIsStrict) {
  std::mt19937_64 rng(4);
  const auto tracks = RandomTracks(4, rng);
  const auto dets = RandomDets(5, rng);
  const auto cm = BuildCostMatrix(tracks, dets, kLambda, 1e9);
  for (Eigen::Index r = 0; r < 4; ++r) {
    for (Eigen::Index c = 0; c < 5; ++c) {
      const auto& b = cm.at(r, c);
      EXPECT_NEAR(cm.cost(r, c), -(b.appearance + b.motion + b.shape), 1e-12);
    }
  }
  // A gate exactly at one entry forbids that entry.
  const double g = cm.cost(1, 2);
  const auto gated = BuildCostMatrix(tracks, dets, kLambda, g);
  EXPECT_TRUE(std::isinf(gated.cost(1, 2)));
  for (Eigen::Index r = 0; r < 4; ++r) {
    for (Eigen::Index c = 0; c < 5; ++c) {
      EXPECT_EQ(std::isinf(gated.cost(r, c)), !(cm.cost(r, c) < g));
    }
  }
}

TEST(CostMatrix, PermutationEquivariant) {
  std::mt19937_64 rng(5);
  auto tracks = RandomTracks(3, rng);
  auto dets = RandomDets(4, rng);
  const auto cm = BuildCostMatrix(tracks, dets, kLambda, kDefaultGate);
  std::vector<int> tp = {2, 0, 1}, dp = {3, 1, 0, 2};
  std::vector<TrackSnapshot> t2;
  std::vector<DetectionObs> d2;
  for (int i : tp) t2.push_back(tracks[static_cast<std::size_t>(i)]);
  for (int j : dp) d2.push_back(dets[static_cast<std::size_t>(j)]);
  const auto cm2 = BuildCostMatrix(t2, d2, kLambda, kDefaultGate);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) EXPECT_EQ(cm2.cost(r, c), cm.cost(tp[r], dp[c]));
  }
}

// --- hungarian ------------------------------------------------------------------------

void ExpectValid(const Assignment& a, const Matrix& cost) {
  std::set<int> rows, cols;
  for (auto [r, c] : a.pairs) {
    EXPECT_TRUE(rows.insert(r).second);
    EXPECT_TRUE(cols.insert(c).second);
    EXPECT_TRUE(std::isfinite(cost(r, c)));
  }
  for (int r : a.unmatched_rows) EXPECT_TRUE(rows.insert(r).second);
  for (int c : a.unmatched_cols) EXPECT_TRUE(cols.insert(c).second);
  EXPECT_EQ(static_cast<Eigen::Index>(rows.size()), cost.rows());
  EXPECT_EQ(static_cast<Eigen::Index>(cols.size()), cost.cols());
  EXPECT_TRUE(std::is_sorted(a.pairs.begin(), a.pairs.end()));
}

TEST(Hungarian, ZeroDiagonalGivesIdentity) {
  const Matrix c = Matrix::Ones(4, 4) - Matrix::Identity(4, 4);
  const auto a = Hungarian(c);
  ASSERT_EQ(a.pairs.size(), 4u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(a.pairs[static_cast<std::size_t>(i)], std::make_pair(i, i));
}

TEST(Hungarian, TwoByTwo) {
  Matrix c(2, 2);
  c << 1, 2, 2, 1;
  const auto a = Hungarian(c);
  EXPECT_EQ(a.pairs, (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}}));
  EXPECT_EQ(TotalCost(a, c), 2.0);
}

TEST(Hungarian, RectangularAndForbidden) {
  Matrix c(2, 3);
  c << kInf, 5, 1, kInf, kInf, 2;
  const auto a = Hungarian(c);
  ExpectValid(a, c);
  // Matching both rows beats the cheaper single edge (0,2).
  EXPECT_EQ(a.pairs, (std::vector<std::pair<int, int>>{{0, 1}, {1, 2}}));
  EXPECT_EQ(a.unmatched_cols, (std::vector<int>{0}));

  const Matrix all = Matrix::Constant(3, 2, kInf);
  const auto none = Hungarian(all);
  EXPECT_TRUE(none.pairs.empty());
  EXPECT_EQ(none.unmatched_rows.size(), 3u);
  EXPECT_EQ(none.unmatched_cols.size(), 2u);
}

TEST(Hungarian, EmptyMatrices) {
  EXPECT_TRUE(Hungarian(Matrix(0, 0)).pairs.empty());
  EXPECT_EQ(Hungarian(Matrix(0, 3)).unmatched_cols.size(), 3u);
}

Matrix RandomCost(int rows, int cols, double p_forbidden, bool integer, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> k(0, 20);
  Matrix c(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < cols; ++j) {
      c(r, j) = u(rng) < p_forbidden ? kInf : (integer ? k(rng) : 10.0 * u(rng) - 3.0);
    }
  }
  return c;
}

TEST(Hungarian, MatchesBruteForceOnRandomMatrices) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> size(1, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    const bool integer = trial % 2 == 0;
    const Matrix c = RandomCost(size(rng), size(rng), (trial % 4) * 0.15, integer, rng);
    const auto a = Hungarian(c);
    ExpectValid(a, c);
    const auto want = oracle::BruteForceAssignment(c);
    EXPECT_EQ(static_cast<int>(a.pairs.size()), want.matched) << "trial " << trial;
    if (integer) {
      EXPECT_EQ(TotalCost(a, c), want.cost) << "trial " << trial;
    } else {
      EXPECT_NEAR(TotalCost(a, c), want.cost, 1e-9) << "trial " << trial;
    }
  }
}

TEST(Hungarian, ConstantShiftKeepsPairs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix c = RandomCost(5, 5, 0.0, false, rng);
    const Matrix shifted = (c.array() + 17.0).matrix();
    EXPECT_EQ(Hungarian(c).pairs, Hungarian(shifted).pairs);
  }
}

// --- gating -----------------------------------------------------------------------------

TEST(Gate, InfiniteGateLeavesAssignment) {
  Matrix c(2, 2);
  c << 1, 2, 2, 1;
  const auto a = Hungarian(c);
  EXPECT_EQ(GateAssignment(a, c, kInf), a);
}

TEST(Gate, ZeroGateUnmatchesEverything) {
  Matrix c(2, 3);
  c << 1, 2, 0.5, 2, 1, 3;
  const auto g = GateAssignment(Hungarian(c), c, 0.0);
  EXPECT_TRUE(g.pairs.empty());
  EXPECT_EQ(g.unmatched_rows, (std::vector<int>{0, 1}));
  EXPECT_EQ(g.unmatched_cols, (std::vector<int>{0, 1, 2}));
}

TEST(Gate, EdgeAtGateRejected) {
  Matrix c(2, 2);
  c << 3, 9, 9, 4;
  const auto g = GateAssignment(Hungarian(c), c, 4.0);
  EXPECT_EQ(g.pairs, (std::vector<std::pair<int, int>>{{0, 0}}));
  EXPECT_EQ(g.unmatched_rows, (std::vector<int>{1}));
  EXPECT_EQ(g.unmatched_cols, (std::vector<int>{1}));
}

TEST(Gate, ForbiddingBeforeOrAfterSolvingAgrees) {
  // When the unconstrained optimum selects no over-gate edge, gating before
  // or after the solve yields the same matching.
  std::mt19937_64 rng(8);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Matrix c = RandomCost(4, 4, 0.0, false, rng);
    const double gate = 5.0;
    const auto after = GateAssignment(Hungarian(c), c, gate);
    if (after.pairs.size() != 4) continue;
    const Matrix before = c.unaryExpr([&](double v) { return v < gate ? v : kInf; });
    EXPECT_EQ(Hungarian(before).pairs, after.pairs);
    ++compared;
  }
  EXPECT_GT(compared, 10);
}

}  // namespace
}  // namespace tdam::assoc
