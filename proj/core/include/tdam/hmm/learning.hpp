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

// Online EM for the appearance model. Each update treats the current
// appearance window as a training sequence: forward-backward posteriors are
// summed into window statistics, blended into exponentially decayed
// accumulators with learning rate eta, and the parameters are re-estimated
// from the accumulators. The initial distribution is never updated.

#ifndef TDAM_HMM_LEARNING_HPP_
#define TDAM_HMM_LEARNING_HPP_

#include <cstdint>
#include <span>
#include <utility>

#include "tdam/hmm/inference.hpp"
#include "tdam/hmm/model.hpp"

namespace tdam::hmm {

struct LearningOptions {
  double eta = 0.8;
  double variance_floor = kDefaultVarianceFloor;
  double occupancy_floor = kDefaultOccupancyFloor;
  // When false the transition matrix is frozen (used by the stationary
  // mixture ablation).
  bool learn_transitions = true;
};

// Statistics of a single window. `has_transitions` is false for windows of
// length one, which carry no transition evidence.
struct WindowStats {
  SufficientStats stats;
  bool has_transitions = false;
};

WindowStats ComputeWindowStatistics(const Posteriors& posteriors,
                                    const AppearanceWindow& window);

// accumulator <- (1 - eta) * accumulator + eta * window. The transition
// accumulator is left untouched when the window has no transitions.
SufficientStats Accumulate(const SufficientStats& stats,
                           const WindowStats& window_stats, double eta);

// M-step. States or components whose accumulated occupancy is below the
// occupancy floor keep their previous parameters.
TdamModel Maximization(const SufficientStats& stats, const TdamModel& model,
                       const LearningOptions& options = {});

struct UpdateResult {
  TdamModel model;
  SufficientStats stats;
};

UpdateResult IncrementalUpdate(const TdamModel& model,
                               const SufficientStats& stats,
                               const AppearanceWindow& window,
                               const LearningOptions& options = {});

struct GeneralModelOptions {
  int num_states = 8;
  int num_components = 3;
  std::uint64_t seed = 0;
  int kmeans_iterations = 100;
  int em_iterations = 50;
  double variance_floor = kDefaultVarianceFloor;
};

// K-means (farthest-point seeding) into N clusters, then an M-component
// diagonal GMM per cluster by batch EM. Transitions are uniform.
TdamModel InitGeneralModel(std::span<const Observation> training,
                           const GeneralModelOptions& options);

}  // namespace tdam::hmm

#endif  // TDAM_HMM_LEARNING_HPP_
