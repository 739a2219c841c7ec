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

// Track-to-detection affinities. Every affinity is a log value; the
// association cost of a pair is the negated sum of its appearance, motion and
// shape log-affinities.

#ifndef TDAM_ASSOC_AFFINITY_HPP_
#define TDAM_ASSOC_AFFINITY_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "tdam/common.hpp"
#include "tdam/hmm/inference.hpp"
#include "tdam/hmm/model.hpp"

namespace tdam::assoc {

inline constexpr double kDefaultGate = 60.0;

enum class AppearanceMode {
  kTdam,             // temporal model: phi from the window, then mixture
  kSpatialOnly,      // stationary N*M mixture, occupancy-weighted
  kFeatureDistance,  // exp(-|mean(window) - o| / scale)
};

std::string_view ToString(AppearanceMode mode);
// Throws InputError on an unknown name.
AppearanceMode ParseAppearanceMode(std::string_view name);

struct DetectionObs {
  Vector appearance;  // mid-level feature
  Vector2 position;   // box center, pixels
  double height = 0.0;
  double width = 0.0;
  double confidence = 1.0;
};

// Per-frame cache of everything appearance scoring needs from one track.
// Exactly one of the mode-specific members is populated; an empty cache
// (kind == std::nullopt) scores every appearance as log 1 = 0.
struct AppearanceCache {
  std::optional<AppearanceMode> kind;
  const hmm::TdamModel* model = nullptr;
  hmm::StatePrediction prediction;   // kTdam
  Vector log_state_weights;          // kSpatialOnly
  Vector window_mean;                // kFeatureDistance
  double feature_scale = 1.0;
};

struct TrackSnapshot {
  int track_id = -1;
  Vector2 tail_position = Vector2::Zero();  // last refined position
  Vector2 velocity = Vector2::Zero();       // pixels / frame
  int frame_gap = 1;                        // tau
  double shape_height = 1.0;
  double shape_width = 1.0;
  AppearanceCache appearance;

  Vector2 PredictedPosition() const {
    return tail_position + static_cast<double>(frame_gap) * velocity;
  }
};

// Builds the appearance cache of a track for the given mode. `occupancy` is
// the N x M accumulated occupancy (used by kSpatialOnly; may be empty).
AppearanceCache MakeAppearanceCache(AppearanceMode mode,
                                    const hmm::TdamModel& model,
                                    const hmm::AppearanceWindow& window,
                                    const Matrix& occupancy,
                                    double feature_scale);

struct AffinityBreakdown {
  double appearance = 0.0;  // log rho_A
  double motion = 0.0;      // log rho_M
  double shape = 0.0;       // log rho_S
  double total_cost = 0.0;  // -(appearance + motion + shape)
};

double AppearanceAffinity(const TrackSnapshot& track, const DetectionObs& det);

// log N(c_tail + tau v; c_det, lambda). Throws if lambda is not positive
// definite.
double MotionAffinity(const TrackSnapshot& track, const DetectionObs& det,
                      const Matrix2& lambda);

// -1/2 (|h_X - h| / (h_X + h) + |w_X - w| / (w_X + w))
double ShapeAffinity(const TrackSnapshot& track, const DetectionObs& det);

struct CostMatrix {
  Matrix cost;  // +inf where the raw cost is not below the gate
  std::vector<AffinityBreakdown> breakdown;  // row-major, rows x cols

  const AffinityBreakdown& at(Eigen::Index r, Eigen::Index c) const {
    return breakdown[static_cast<std::size_t>(r * cost.cols() + c)];
  }
};

CostMatrix BuildCostMatrix(const std::vector<TrackSnapshot>& tracks,
                           const std::vector<DetectionObs>& detections,
                           const Matrix2& lambda, double gate);

}  // namespace tdam::assoc

#endif  // TDAM_ASSOC_AFFINITY_HPP_
