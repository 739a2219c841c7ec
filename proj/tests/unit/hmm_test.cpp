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

#include "hmm_oracles.hpp"
#include "tdam/hmm/inference.hpp"
#include "tdam/hmm/learning.hpp"
#include "tdam/hmm/model.hpp"
#include "tdam/io/simulate.hpp"
#include "test_util.hpp"

namespace tdam::hmm {
namespace {

using testing::Comp;
using testing::SimpleModel;
using testing::V;

double RelErr(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

AppearanceWindow Window(const std::vector<Vector>& seq) {
  return AppearanceWindow::FromSequence(seq);
}

// --- densities ---------------------------------------------------------------

TEST(GmmDensity, StandardNormalAtMean) {
  ObservationDensity f({Comp(1.0, V({0, 0}), V({1, 1}))});
  EXPECT_NEAR(f.Density(V({0, 0})), 1.0 / (2.0 * std::numbers::pi), 1e-12);
}

TEST(GmmDensity, DuplicateComponentsCollapse) {
  const auto c = Comp(0.5, V({0.3, -1}), V({0.5, 2}));
  ObservationDensity two({c, c});
  ObservationDensity one({Comp(1.0, c.mean, c.variances)});
  const Vector o = V({1.1, 0.4});
  EXPECT_NEAR(two.LogDensity(o), one.LogDensity(o), 1e-12);
}

TEST(GmmDensity, TwoComponentScalar) {
  ObservationDensity f({Comp(0.5, V({0}), V({1})), Comp(0.5, V({2}), V({1}))});
  const double want = std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi);
  EXPECT_NEAR(f.Density(V({1})), want, 1e-12);
  EXPECT_NEAR(f.Density(V({1})), 0.24197, 1e-5);
}

TEST(GmmDensity, MatchesTermwiseOracleAndStaysFiniteFarAway) {
  std::mt19937_64 rng(1);
  const TdamModel model = oracle::RandomModel(3, 2, 4, rng);
  for (int t = 0; t < 20; ++t) {
    const Vector o = oracle::RandomSequence(1, 4, rng)[0];
    for (int i = 0; i < 3; ++i) {
      EXPECT_LT(RelErr(model.densities()[i].Density(o), oracle::StateDensity(model, i, o)),
                1e-12);
    }
  }
  // Underflows in linear space, not in log space.
  const double far = model.densities()[0].LogDensity(Vector::Constant(4, 1e3));
  EXPECT_TRUE(std::isfinite(far));
  EXPECT_LT(far, -1e5);
}

TEST(GmmDensity, DimensionMismatchThrows) {
  ObservationDensity f({Comp(1.0, V({0, 0}), V({1, 1}))});
  EXPECT_THROW(f.LogDensity(V({0})), InputError);
}

// --- model invariants ----------------------------------------------------------

TEST(Model, RejectsNonStochasticRowsAndBadWeights) {
  Matrix a(2, 2);
  a << 0.5, 0.6, 0.5, 0.5;
  EXPECT_THROW(SimpleModel(a, {V({0}), V({1})}), InputError);
  EXPECT_THROW(TdamModel(Matrix::Identity(1, 1),
                         {ObservationDensity({Comp(0.7, V({0}), V({1}))})}),
               InputError);
  EXPECT_THROW(TdamModel(Matrix::Identity(1, 1),
                         {ObservationDensity({Comp(1.0, V({0}), V({0.0}))})}),
               InputError);
}

TEST(Model, InitialIsUniform) {
  const auto m = SimpleModel(Matrix::Constant(4, 4, 0.25),
                             {V({0}), V({1}), V({2}), V({3})});
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(m.initial()[i], 0.25);
}

TEST(Window, EvictsOldestAndRequiresIncreasingFrames) {
  AppearanceWindow w(3);
  for (long f = 1; f <= 5; ++f) w.Push(V({static_cast<double>(f)}), f);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0].frame, 3);
  EXPECT_EQ(w[2].frame, 5);
  EXPECT_THROW(w.Push(V({0}), 5), InputError);
  EXPECT_THROW(w.Push(V({0}), 4), InputError);
}

// --- forward prediction ---------------------------------------------------------

TEST(ForwardPredict, EmptyWindowIsUniform) {
  std::mt19937_64 rng(2);
  const auto model = oracle::RandomModel(8, 1, 2, rng);
  const auto phi = ForwardPredict(model, AppearanceWindow(8));
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(phi.prob[j], 1.0 / 8.0, 1e-15);
}

TEST(ForwardPredict, DeterministicCycleFlipsState) {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  const auto model = SimpleModel(a, {V({-10}), V({10})});
  // Alternating observations ending in state 1 (index 0).
  const auto phi = ForwardPredict(model, Window({V({10}), V({-10}), V({10}), V({-10})}));
  EXPECT_LT(phi.prob[0], 1e-6);
  EXPECT_GT(phi.prob[1], 1.0 - 1e-6);
}

TEST(ForwardPredict, MatchesPathEnumeration) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 3;
    const int len = 1 + trial % 5;
    const auto model = oracle::RandomModel(n, 2, 2, rng);
    const auto seq = oracle::RandomSequence(len, 2, rng);
    const auto phi = ForwardPredict(model, Window(seq));
    const Vector want = oracle::NextStateDistribution(model, seq);
    for (int j = 0; j < n; ++j) EXPECT_LT(RelErr(phi.prob[j], want[j]), 1e-9);
    EXPECT_NEAR(phi.prob.sum(), 1.0, 1e-12);
    EXPECT_TRUE(phi.log_prob.array().exp().isApprox(phi.prob.array(), 1e-12));
  }
}

// --- sequence likelihood ------------------------------------------------------------

TEST(SequenceLikelihood, SingleStateEqualsDensity) {
  std::mt19937_64 rng(4);
  const auto model = oracle::RandomModel(1, 3, 2, rng);
  const auto seq = oracle::RandomSequence(4, 2, rng);
  const Vector o = V({0.2, -0.7});
  EXPECT_NEAR(SequenceLogLikelihood(model, Window(seq), o),
              model.densities()[0].LogDensity(o), 1e-12);
}

TEST(SequenceLikelihood, IdenticalStatesEqualDensity) {
  const auto model = SimpleModel(Matrix::Constant(3, 3, 1.0 / 3.0),
                                 {V({1, 1}), V({1, 1}), V({1, 1})}, 0.5);
  const Vector o = V({0, 2});
  EXPECT_NEAR(SequenceLogLikelihood(model, Window({V({5, 5})}), o),
              model.densities()[0].LogDensity(o), 1e-12);
}

TEST(SequenceLikelihood, MatchesPathEnumeration) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto model = oracle::RandomModel(3, 2, 2, rng);
    const auto seq = oracle::RandomSequence(4, 2, rng);
    const Vector o = oracle::RandomSequence(1, 2, rng)[0];
    const double got = std::exp(SequenceLogLikelihood(model, Window(seq), o));
    EXPECT_LT(RelErr(got, oracle::PredictiveProbability(model, seq, o)), 1e-9);
  }
}

TEST(SequenceLikelihood, PredictionReusableAcrossCandidates) {
  std::mt19937_64 rng(6);
  const auto model = oracle::RandomModel(3, 2, 3, rng);
  const auto w = Window(oracle::RandomSequence(5, 3, rng));
  const auto phi = ForwardPredict(model, w);
  for (const auto& o : oracle::RandomSequence(10, 3, rng)) {
    EXPECT_DOUBLE_EQ(PredictiveLogLikelihood(model, phi, o), SequenceLogLikelihood(model, w, o));
  }
}

// --- forward-backward ------------------------------------------------------------

TEST(ForwardBackward, DegenerateChain) {
  const auto model = SimpleModel(Matrix::Identity(1, 1), {V({0})});
  const auto post = ForwardBackward(model, Window({V({1}), V({2}), V({3})}));
  ASSERT_EQ(post.xi.size(), 2u);
  ASSERT_EQ(post.gamma.size(), 3u);
  for (const auto& x : post.xi) EXPECT_NEAR(x(0, 0), 1.0, 1e-15);
  for (const auto& g : post.gamma) EXPECT_NEAR(g(0, 0), 1.0, 1e-15);
}

TEST(ForwardBackward, PosteriorsNormalizedPerStep) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto model = oracle::RandomModel(4, 3, 3, rng);
    const auto post = ForwardBackward(model, Window(oracle::RandomSequence(8, 3, rng)));
    for (const auto& x : post.xi) EXPECT_NEAR(x.sum(), 1.0, 1e-12);
    for (const auto& g : post.gamma) EXPECT_NEAR(g.sum(), 1.0, 1e-12);
  }
}

TEST(ForwardBackward, MatchesPathEnumeration) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto model = oracle::RandomModel(2, 2, 2, rng);
    const auto seq = oracle::RandomSequence(4, 2, rng);
    const auto post = ForwardBackward(model, Window(seq));
    const auto want = oracle::PosteriorsByEnumeration(model, seq);
    for (std::size_t l = 0; l < want.xi.size(); ++l) {
      EXPECT_LT((post.xi[l] - want.xi[l]).cwiseAbs().maxCoeff(), 1e-9);
    }
    for (std::size_t l = 0; l < want.gamma.size(); ++l) {
      EXPECT_LT((post.gamma[l] - want.gamma[l]).cwiseAbs().maxCoeff(), 1e-9);
    }
    EXPECT_LT(RelErr(std::exp(post.log_likelihood), oracle::SequenceProbability(model, seq)),
              1e-9);
  }
}

TEST(ForwardBackward, EmptyWindowThrows) {
  const auto model = SimpleModel(Matrix::Identity(1, 1), {V({0})});
  EXPECT_THROW(ForwardBackward(model, AppearanceWindow(4)), InputError);
}

TEST(ForwardBackward, StableOnLongOutlyingWindows) {
  const auto model = SimpleModel(Matrix::Constant(2, 2, 0.5), {V({0}), V({1})}, 1e-3);
  std::vector<Vector> seq;
  for (int i = 0; i < 200; ++i) seq.push_back(V({50.0 + i}));
  const auto post = ForwardBackward(model, Window(seq));
  for (const auto& g : post.gamma) {
    EXPECT_TRUE(g.allFinite());
    EXPECT_NEAR(g.sum(), 1.0, 1e-9);
  }
}

// --- statistics --------------------------------------------------------------------

TEST(WindowStatistics, UnitPosteriorsGiveRawSums) {
  const auto model = SimpleModel(Matrix::Identity(1, 1), {V({0, 0})});
  const std::vector<Vector> seq = {V({1, 2}), V({3, -1}), V({0.5, 0.5})};
  const auto w = Window(seq);
  const auto ws = ComputeWindowStatistics(ForwardBackward(model, w), w);
  EXPECT_TRUE(ws.has_transitions);
  EXPECT_NEAR(ws.stats.occ(0, 0), 3.0, 1e-12);
  EXPECT_NEAR(ws.stats.trans(0, 0), 2.0, 1e-12);
  EXPECT_TRUE(ws.stats.first_moment.row(0).isApprox(V({4.5, 1.5}).transpose(), 1e-12));
  EXPECT_TRUE(ws.stats.second_moment.row(0).isApprox(V({10.25, 5.25}).transpose(), 1e-12));
}

TEST(WindowStatistics, ZeroPosteriorComponentHasZeroMoments) {
  Posteriors post;
  Matrix g(1, 2);
  g << 1.0, 0.0;
  post.gamma = {g, g};
  post.xi = {Matrix::Ones(1, 1)};
  const auto w = Window({V({1, 2}), V({3, 4})});
  const auto ws = ComputeWindowStatistics(post, w);
  EXPECT_EQ(ws.stats.first_moment.row(1).norm(), 0.0);
  EXPECT_EQ(ws.stats.second_moment.row(1).norm(), 0.0);
}

TEST(WindowStatistics, MatchesDirectSummation) {
  std::mt19937_64 rng(9);
  const int n = 3, m = 2, d = 3;
  const auto model = oracle::RandomModel(n, m, d, rng);
  const auto seq = oracle::RandomSequence(6, d, rng);
  const auto w = Window(seq);
  const auto post = ForwardBackward(model, w);
  const auto ws = ComputeWindowStatistics(post, w);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (const auto& x : post.xi) s += x(i, j);
      EXPECT_NEAR(ws.stats.trans(i, j), s, 1e-12);
    }
    for (int k = 0; k < m; ++k) {
      double occ = 0.0;
      for (std::size_t l = 0; l < seq.size(); ++l) occ += post.gamma[l](i, k);
      EXPECT_NEAR(ws.stats.occ(i, k), occ, 1e-12);
      for (int x = 0; x < d; ++x) {
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t l = 0; l < seq.size(); ++l) {
          m1 += post.gamma[l](i, k) * seq[l][x];
          m2 += post.gamma[l](i, k) * seq[l][x] * seq[l][x];
        }
        EXPECT_NEAR(ws.stats.first_moment(i * m + k, x), m1, 1e-12);
        EXPECT_NEAR(ws.stats.second_moment(i * m + k, x), m2, 1e-12);
      }
    }
  }
}

WindowStats RandomWindowStats(int n, int m, int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  WindowStats ws;
  ws.stats = SufficientStats::Zero(n, m, d);
  ws.has_transitions = true;
  for (auto* mat : {&ws.stats.trans, &ws.stats.occ, &ws.stats.first_moment,
                    &ws.stats.second_moment}) {
    for (Eigen::Index r = 0; r < mat->rows(); ++r) {
      for (Eigen::Index c = 0; c < mat->cols(); ++c) (*mat)(r, c) = u(rng);
    }
  }
  return ws;
}

TEST(Accumulate, FullReplacementAtEtaOne) {
  std::mt19937_64 rng(10);
  const auto old = RandomWindowStats(2, 2, 3, rng).stats;
  const auto ws = RandomWindowStats(2, 2, 3, rng);
  const auto out = Accumulate(old, ws, 1.0);
  EXPECT_EQ(out.trans, ws.stats.trans);
  EXPECT_EQ(out.occ, ws.stats.occ);
  EXPECT_EQ(out.first_moment, ws.stats.first_moment);
  EXPECT_EQ(out.second_moment, ws.stats.second_moment);
  EXPECT_EQ(out.update_count, old.update_count + 1);
}

TEST(Accumulate, DefaultRateFromZero) {
  std::mt19937_64 rng(11);
  const auto ws = RandomWindowStats(2, 2, 3, rng);
  const auto out = Accumulate(SufficientStats::Zero(2, 2, 3), ws, 0.8);
  EXPECT_TRUE(out.trans.isApprox(0.8 * ws.stats.trans, 1e-15));
  EXPECT_TRUE(out.occ.isApprox(0.8 * ws.stats.occ, 1e-15));
  EXPECT_TRUE(out.first_moment.isApprox(0.8 * ws.stats.first_moment, 1e-15));
  EXPECT_TRUE(out.second_moment.isApprox(0.8 * ws.stats.second_moment, 1e-15));
}

TEST(Accumulate, GeometricConvergence) {
  std::mt19937_64 rng(12);
  const auto ws = RandomWindowStats(2, 1, 2, rng);
  SufficientStats acc = SufficientStats::Zero(2, 1, 2);
  double prev = (acc.occ - ws.stats.occ).norm();
  for (int step = 0; step < 10; ++step) {
    acc = Accumulate(acc, ws, 0.3);
    const double err = (acc.occ - ws.stats.occ).norm();
    EXPECT_NEAR(err / prev, 0.7, 1e-9);
    prev = err;
  }
}

TEST(Accumulate, RejectsEtaOutOfRangeAndShapeMismatch) {
  std::mt19937_64 rng(13);
  const auto ws = RandomWindowStats(2, 1, 2, rng);
  const auto z = SufficientStats::Zero(2, 1, 2);
  EXPECT_THROW(Accumulate(z, ws, 0.0), InputError);
  EXPECT_THROW(Accumulate(z, ws, 1.5), InputError);
  EXPECT_THROW(Accumulate(SufficientStats::Zero(3, 1, 2), ws, 0.5), InputError);
}

TEST(Accumulate, WindowWithoutTransitionsKeepsTransitionAccumulator) {
  std::mt19937_64 rng(14);
  const auto old = RandomWindowStats(2, 1, 2, rng).stats;
  auto ws = RandomWindowStats(2, 1, 2, rng);
  ws.has_transitions = false;
  EXPECT_EQ(Accumulate(old, ws, 0.8).trans, old.trans);
}

// --- maximization ------------------------------------------------------------------

TEST(Maximization, SingleStateRecoversSampleMoments) {
  const auto model = SimpleModel(Matrix::Identity(1, 1), {V({0})});
  const std::vector<Vector> seq = {V({1}), V({2}), V({6})};
  const auto w = Window(seq);
  const auto ws = ComputeWindowStatistics(ForwardBackward(model, w), w);
  const auto out = Maximization(Accumulate(SufficientStats::Zero(1, 1, 1), ws, 1.0), model);
  EXPECT_NEAR(out.densities()[0].components()[0].mean[0], 3.0, 1e-12);
  EXPECT_NEAR(out.densities()[0].components()[0].variances[0], 14.0 / 3.0, 1e-12);
}

TEST(Maximization, OutputsNormalizedAndFloored) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const auto model = oracle::RandomModel(3, 2, 2, rng);
    const auto w = Window(oracle::RandomSequence(5, 2, rng));
    const auto ws = ComputeWindowStatistics(ForwardBackward(model, w), w);
    const auto out = Maximization(Accumulate(SufficientStats::Zero(3, 2, 2), ws, 1.0), model);
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(out.transitions().row(i).sum(), 1.0, 1e-9);
      double tw = 0.0;
      for (const auto& c : out.densities()[i].components()) {
        tw += c.weight;
        EXPECT_GE(c.variances.minCoeff(), kDefaultVarianceFloor);
      }
      EXPECT_NEAR(tw, 1.0, 1e-9);
    }
    EXPECT_EQ(out.initial(), model.initial());
  }
}

TEST(Maximization, IdenticalObservationsHitVarianceFloor) {
  const auto model = SimpleModel(Matrix::Identity(1, 1), {V({0})});
  const auto w = Window({V({2}), V({2}), V({2})});
  const auto ws = ComputeWindowStatistics(ForwardBackward(model, w), w);
  LearningOptions opt;
  opt.variance_floor = 0.01;
  const auto out = Maximization(Accumulate(SufficientStats::Zero(1, 1, 1), ws, 1.0), model, opt);
  EXPECT_DOUBLE_EQ(out.densities()[0].components()[0].variances[0], 0.01);
}

TEST(Maximization, UnvisitedStateKeepsParameters) {
  const auto model = SimpleModel(Matrix::Constant(2, 2, 0.5), {V({0}), V({1000})}, 1.0);
  const auto w = Window({V({0.1}), V({-0.2}), V({0.3})});
  const auto ws = ComputeWindowStatistics(ForwardBackward(model, w), w);
  const auto out = Maximization(Accumulate(SufficientStats::Zero(2, 1, 1), ws, 1.0), model);
  EXPECT_EQ(out.densities()[1].components()[0].mean, model.densities()[1].components()[0].mean);
  EXPECT_EQ(out.transitions().row(1), model.transitions().row(1));
}

TEST(Maximization, OneStepEqualsBatchBaumWelch) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3, m = 1 + trial % 2;
    const auto model = oracle::RandomModel(n, m, 2, rng);
    const auto seq = oracle::RandomSequence(2 + trial % 4, 2, rng);
    LearningOptions opt;
    opt.eta = 1.0;
    const auto got = IncrementalUpdate(model, SufficientStats::Zero(n, m, 2), Window(seq), opt);
    const auto want = oracle::BaumWelchStep(model, seq, opt.variance_floor, opt.occupancy_floor);
    EXPECT_LT((got.model.transitions() - want.transitions()).cwiseAbs().maxCoeff(), 1e-8);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < m; ++k) {
        const auto& a = got.model.densities()[i].components()[k];
        const auto& b = want.densities()[i].components()[k];
        EXPECT_NEAR(a.weight, b.weight, 1e-8);
        EXPECT_LT((a.mean - b.mean).cwiseAbs().maxCoeff(), 1e-8);
        EXPECT_LT((a.variances - b.variances).cwiseAbs().maxCoeff(), 1e-8);
      }
    }
  }
}

// --- incremental update ---------------------------------------------------------------

TEST(IncrementalUpdate, SingleObservationLeavesTransitionsUnchanged) {
  std::mt19937_64 rng(17);
  const auto model = oracle::RandomModel(3, 1, 2, rng);
  const auto out = IncrementalUpdate(model, SufficientStats::Zero(3, 1, 2),
                                     Window({V({0.5, 0.5})}));
  EXPECT_EQ(out.model.transitions(), model.transitions());
  EXPECT_EQ(out.stats.trans.norm(), 0.0);
  EXPECT_EQ(out.stats.update_count, 1);
}

TEST(IncrementalUpdate, EmptyWindowThrows) {
  std::mt19937_64 rng(18);
  const auto model = oracle::RandomModel(2, 1, 1, rng);
  EXPECT_THROW(IncrementalUpdate(model, SufficientStats::Zero(2, 1, 1), AppearanceWindow(4)),
               InputError);
}

TEST(IncrementalUpdate, StationaryDataKeepsDriftBounded) {
  Matrix a(2, 2);
  a << 0.9, 0.1, 0.2, 0.8;
  const auto truth = SimpleModel(a, {V({-3, 0}), V({3, 0})}, 0.5);
  std::mt19937_64 rng(19);
  const auto data = io::SampleAppearances(truth, 400, rng);
  TdamModel model = truth;
  // Pseudo-counts consistent with the true parameters (4 visits per state).
  SufficientStats stats = SufficientStats::Zero(2, 1, 2);
  for (int i = 0; i < 2; ++i) {
    const auto& c = truth.densities()[i].components()[0];
    stats.trans.row(i) = 4.0 * a.row(i);
    stats.occ(i, 0) = 4.0;
    stats.first_moment.row(i) = 4.0 * c.mean.transpose();
    stats.second_moment.row(i) =
        4.0 * (c.variances.array() + c.mean.array().square()).matrix().transpose();
  }
  AppearanceWindow w(8);
  double early = 0.0, late = 0.0;
  for (std::size_t t = 0; t < data.size(); ++t) {
    w.Push(data[t], static_cast<long>(t));
    auto up = IncrementalUpdate(model, stats, w, {0.1});
    const double step = (up.model.transitions() - model.transitions()).norm();
    EXPECT_LT(step, 0.5);
    (t < 200 ? early : late) += step;
    model = std::move(up.model);
    stats = std::move(up.stats);
    model.Validate();
  }
  EXPECT_LE(late, early * 1.5);
  EXPECT_NEAR(model.densities()[0].components()[0].mean[0], -3.0, 0.5);
  EXPECT_NEAR(model.densities()[1].components()[0].mean[0], 3.0, 0.5);
}

TEST(IncrementalUpdate, RecoversTwoStateTransitions) {
  Matrix a(2, 2);
  a << 0.85, 0.15, 0.15, 0.85;
  const auto truth = SimpleModel(a, {V({-2, -2}), V({2, 2})}, 0.25);
  std::mt19937_64 rng(20);
  const auto data = io::SampleAppearances(truth, 1000, rng);
  GeneralModelOptions init;
  init.num_states = 2;
  init.num_components = 1;
  TdamModel model = InitGeneralModel(data, init);
  SufficientStats stats = SufficientStats::Zero(2, 1, 2);
  AppearanceWindow w(1000);
  for (std::size_t t = 0; t < data.size(); ++t) {
    w.Push(data[t], static_cast<long>(t));
    if (t + 500 < data.size()) continue;
    auto up = IncrementalUpdate(model, stats, w);
    model = std::move(up.model);
    stats = std::move(up.stats);
  }
  const Matrix& got = model.transitions();
  Matrix swapped(2, 2);
  swapped << got(1, 1), got(1, 0), got(0, 1), got(0, 0);
  const double err = std::min((got - a).cwiseAbs().maxCoeff(),
                              (swapped - a).cwiseAbs().maxCoeff());
  EXPECT_LE(err, 0.05);
}

// --- general model ----------------------------------------------------------------------

std::vector<Vector> Bundles(const std::vector<Vector>& centers, int per, double radius,
                            std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Vector> out;
  for (int i = 0; i < per; ++i) {
    for (const auto& c : centers) {
      Vector x = c;
      for (Eigen::Index k = 0; k < x.size(); ++k) x[k] += u(rng) / std::sqrt(2.0);
      out.push_back(x);
    }
  }
  return out;
}

TEST(InitGeneralModel, StatesLandOnBundles) {
  std::mt19937_64 rng(21);
  const std::vector<Vector> centers = {V({0, 0}), V({10, 0}), V({0, 10}), V({10, 10})};
  const auto data = Bundles(centers, 50, 0.5, rng);
  GeneralModelOptions opt;
  opt.num_states = 4;
  opt.num_components = 2;
  const auto model = InitGeneralModel(data, opt);
  std::vector<bool> hit(centers.size(), false);
  for (const auto& f : model.densities()) {
    Vector centroid = Vector::Zero(2);
    for (const auto& c : f.components()) centroid += c.weight * c.mean;
    for (std::size_t b = 0; b < centers.size(); ++b) {
      if ((centroid - centers[b]).norm() <= 0.5) hit[b] = true;
    }
  }
  for (bool h : hit) EXPECT_TRUE(h);
  EXPECT_TRUE(model.transitions().isApprox(Matrix::Constant(4, 4, 0.25), 1e-15));
}

TEST(InitGeneralModel, DeterministicAndValidatesInput) {
  std::mt19937_64 rng(22);
  const auto data = Bundles({V({0, 0, 0}), V({5, 5, 5})}, 40, 1.0, rng);
  GeneralModelOptions opt;
  opt.num_states = 2;
  opt.num_components = 3;
  opt.seed = 99;
  EXPECT_TRUE(InitGeneralModel(data, opt) == InitGeneralModel(data, opt));
  const std::vector<Vector> few(5, V({1, 2, 3}));
  EXPECT_THROW(InitGeneralModel(few, opt), InputError);
}

}  // namespace
}  // namespace tdam::hmm
