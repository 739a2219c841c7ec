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

// Online tracking-by-detection loop.
//
// Each frame: active trajectories are associated with detections by one
// Hungarian pass over appearance x motion x shape costs; leftover detections
// extend or start short tracklets through a second pass over motion x shape
// only; tracklets that reach T_init become trajectories whose appearance
// model is adapted from the general model by replaying the tracklet; and
// trajectories without detections for T_term frames are terminated.

#ifndef TDAM_TRACKER_TRACKER_HPP_
#define TDAM_TRACKER_TRACKER_HPP_

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "tdam/assoc/affinity.hpp"
#include "tdam/hmm/learning.hpp"
#include "tdam/hmm/model.hpp"
#include "tdam/tracker/config.hpp"
#include "tdam/tracker/kalman.hpp"

namespace tdam::tracker {

enum class TrackStatus { kPending, kActive, kTerminated };

struct ShapeAverage {
  double height = 0.0;
  double width = 0.0;
  long count = 0;

  void Add(double h, double w);
};

struct Trajectory {
  int id = -1;
  TrackStatus status = TrackStatus::kActive;
  KalmanState kalman;  // posterior at last_associated_frame
  ShapeAverage shape;
  hmm::AppearanceWindow window;
  hmm::TdamModel model;
  hmm::SufficientStats stats;
  long last_associated_frame = 0;
  int miss_count = 0;
  int out_of_view_count = 0;
};

struct PendingTracklet {
  std::vector<std::pair<long, assoc::DetectionObs>> detections;
  KalmanState kalman;  // posterior at the last detection
  ShapeAverage shape;

  long last_frame() const { return detections.back().first; }
};

struct Box {
  int track_id = -1;
  double x = 0.0;  // center
  double y = 0.0;
  double height = 0.0;
  double width = 0.0;
};

struct FrameOutput {
  long frame = 0;
  std::vector<Box> boxes;  // one per active trajectory
  std::vector<int> spawned;
  std::vector<int> terminated;
  // (track id, detection index) for every detection absorbed by a
  // trajectory this frame, including the one that promoted a tracklet.
  std::vector<std::pair<int, int>> associations;
};

// Learning options derived from a tracker config.
hmm::LearningOptions LearningOptionsFor(const TrackerConfig& config);

// New trajectory seeded with a copy of the general model; the tracklet's
// appearances are replayed in order through incremental updates.
Trajectory PromoteTracklet(const PendingTracklet& tracklet,
                           const hmm::TdamModel& general_model,
                           const TrackerConfig& config, int id);

class Tracker {
 public:
  Tracker(TrackerConfig config, hmm::TdamModel general_model);

  // Processes one frame. Frame indices must be strictly increasing.
  FrameOutput Step(long frame, const std::vector<assoc::DetectionObs>& detections);

  const TrackerConfig& config() const { return config_; }
  const hmm::TdamModel& general_model() const { return general_model_; }
  const std::vector<Trajectory>& active() const { return active_; }
  const std::vector<PendingTracklet>& pending() const { return pending_; }
  int next_id() const { return next_id_; }

  // Per-pair affinity dump: frame,track_id,det_index,log_rhoA,log_rhoM,
  // log_rhoS,cost,matched. Pass nullptr to disable.
  void set_debug_sink(std::ostream* sink) { debug_ = sink; }

 private:
  assoc::TrackSnapshot Snapshot(const Trajectory& t, long frame) const;
  void AssociatePending(long frame,
                        const std::vector<assoc::DetectionObs>& detections,
                        const std::vector<int>& leftover, FrameOutput& out);

  TrackerConfig config_;
  hmm::TdamModel general_model_;
  hmm::LearningOptions learning_;
  std::vector<Trajectory> active_;
  std::vector<PendingTracklet> pending_;
  int next_id_ = 1;
  std::optional<long> last_frame_;
  std::ostream* debug_ = nullptr;
};

}  // namespace tdam::tracker

#endif  // TDAM_TRACKER_TRACKER_HPP_
