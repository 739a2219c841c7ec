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

#include "tdam/tracker/tracker.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "tdam/assoc/hungarian.hpp"
#include "tdam/io/csv.hpp"

namespace tdam::tracker {

namespace {

KalmanState PredictSteps(KalmanState s, long steps) {
  for (long i = 0; i < steps; ++i) s = KalmanPredict(s);
  return s;
}

bool InsideImage(const TrackerConfig& cfg, const Vector2& p) {
  return p.x() >= 0.0 && p.y() >= 0.0 && p.x() <= cfg.image_width &&
         p.y() <= cfg.image_height;
}

}  // namespace

void ShapeAverage::Add(double h, double w) {
  ++count;
  height += (h - height) / static_cast<double>(count);
  width += (w - width) / static_cast<double>(count);
}

hmm::LearningOptions LearningOptionsFor(const TrackerConfig& config) {
  hmm::LearningOptions opt;
  opt.eta = config.eta;
  opt.variance_floor = config.variance_floor;
  opt.occupancy_floor = config.occupancy_floor;
  opt.learn_transitions =
      config.appearance_mode != assoc::AppearanceMode::kSpatialOnly;
  return opt;
}

Trajectory PromoteTracklet(const PendingTracklet& tracklet,
                           const hmm::TdamModel& general_model,
                           const TrackerConfig& config, int id) {
  if (tracklet.detections.size() < static_cast<std::size_t>(config.T_init)) {
    throw InputError("promote_tracklet: tracklet shorter than T_init");
  }
  const hmm::LearningOptions learning = LearningOptionsFor(config);
  Trajectory t;
  t.id = id;
  t.status = TrackStatus::kActive;
  t.kalman = tracklet.kalman;
  t.shape = tracklet.shape;
  t.window = hmm::AppearanceWindow(static_cast<std::size_t>(config.L));
  t.model = general_model;
  t.stats = hmm::SufficientStats::Zero(general_model.num_states(),
                                       general_model.num_components(),
                                       general_model.dim());
  for (const auto& [frame, det] : tracklet.detections) {
    t.window.Push(det.appearance, frame);
    auto updated = hmm::IncrementalUpdate(t.model, t.stats, t.window, learning);
    t.model = std::move(updated.model);
    t.stats = std::move(updated.stats);
  }
  t.last_associated_frame = tracklet.last_frame();
  return t;
}

Tracker::Tracker(TrackerConfig config, hmm::TdamModel general_model)
    : config_(std::move(config)),
      general_model_(std::move(general_model)),
      learning_(LearningOptionsFor(config_)) {
  config_.Validate();
  if (general_model_.dim() != config_.d ||
      general_model_.num_states() != config_.N ||
      general_model_.num_components() != config_.M) {
    throw InputError("tracker: general model shape (N=" +
                     std::to_string(general_model_.num_states()) +
                     ", M=" + std::to_string(general_model_.num_components()) +
                     ", d=" + std::to_string(general_model_.dim()) +
                     ") does not match the config");
  }
}

assoc::TrackSnapshot Tracker::Snapshot(const Trajectory& t, long frame) const {
  assoc::TrackSnapshot s;
  s.track_id = t.id;
  s.tail_position = t.kalman.position();
  s.velocity = t.kalman.velocity();
  s.frame_gap = static_cast<int>(frame - t.last_associated_frame);
  s.shape_height = t.shape.height;
  s.shape_width = t.shape.width;
  s.appearance = assoc::MakeAppearanceCache(config_.appearance_mode, t.model,
                                            t.window, t.stats.occ,
                                            config_.feature_scale);
  return s;
}

FrameOutput Tracker::Step(long frame,
                          const std::vector<assoc::DetectionObs>& detections) {
  if (last_frame_ && frame <= *last_frame_) {
    throw InputError("tracker: frame " + std::to_string(frame) +
                     " is not after frame " + std::to_string(*last_frame_));
  }
  for (const auto& det : detections) {
    RequireDim(det.appearance.size(), config_.d, "detection appearance");
    if (!(det.height > 0.0 && det.width > 0.0)) {
      throw InputError("tracker: detection sizes must be positive");
    }
  }
  last_frame_ = frame;

  FrameOutput out;
  out.frame = frame;

  // (1) Snapshot active trajectories; the state prediction is computed once
  // per trajectory and reused for every detection.
  std::vector<assoc::TrackSnapshot> snaps;
  snaps.reserve(active_.size());
  for (const auto& t : active_) snaps.push_back(Snapshot(t, frame));

  // (2) Association.
  const assoc::CostMatrix costs =
      assoc::BuildCostMatrix(snaps, detections, config_.lambda, config_.gate);
  const assoc::Assignment assignment = assoc::GateAssignment(
      assoc::Hungarian(costs.cost), costs.cost, config_.gate);

  if (debug_ != nullptr) {
    std::vector<int> matched_col(active_.size(), -1);
    for (const auto& [r, c] : assignment.pairs) matched_col[r] = c;
    for (std::size_t r = 0; r < snaps.size(); ++r) {
      for (std::size_t c = 0; c < detections.size(); ++c) {
        const auto& b = costs.at(static_cast<Eigen::Index>(r),
                                 static_cast<Eigen::Index>(c));
        *debug_ << frame << ',' << snaps[r].track_id << ',' << c << ','
                << io::FormatDouble(b.appearance) << ','
                << io::FormatDouble(b.motion) << ','
                << io::FormatDouble(b.shape) << ','
                << io::FormatDouble(b.total_cost) << ','
                << (matched_col[r] == static_cast<int>(c) ? 1 : 0) << '\n';
      }
    }
  }

  // (3) Grow matched trajectories; count misses on the rest.
  std::vector<int> det_of_track(active_.size(), -1);
  for (const auto& [r, c] : assignment.pairs) det_of_track[r] = c;
  for (std::size_t r = 0; r < active_.size(); ++r) {
    Trajectory& t = active_[r];
    const int c = det_of_track[r];
    if (c < 0) {
      ++t.miss_count;
      continue;
    }
    const auto& det = detections[static_cast<std::size_t>(c)];
    t.kalman = KalmanCorrect(
        PredictSteps(t.kalman, frame - t.last_associated_frame), det.position);
    t.shape.Add(det.height, det.width);
    t.window.Push(det.appearance, frame);
    auto updated = hmm::IncrementalUpdate(t.model, t.stats, t.window, learning_);
    t.model = std::move(updated.model);
    t.stats = std::move(updated.stats);
    t.last_associated_frame = frame;
    t.miss_count = 0;
    out.associations.emplace_back(t.id, c);
  }

  // (4)-(5) Tracklets from the leftovers, then promotion.
  AssociatePending(frame, detections, assignment.unmatched_cols, out);

  // (6) Termination.
  const bool exit_enabled = config_.exit_frames > 0 &&
                            config_.image_width > 0.0 &&
                            config_.image_height > 0.0;
  std::vector<Trajectory> survivors;
  survivors.reserve(active_.size());
  for (auto& t : active_) {
    const long gap = frame - t.last_associated_frame;
    const Vector2 where = t.kalman.position() +
                          static_cast<double>(gap) * t.kalman.velocity();
    if (exit_enabled) {
      t.out_of_view_count = InsideImage(config_, where) ? 0 : t.out_of_view_count + 1;
    }
    if (t.miss_count >= config_.T_term ||
        (exit_enabled && t.out_of_view_count >= config_.exit_frames)) {
      t.status = TrackStatus::kTerminated;
      out.terminated.push_back(t.id);
      continue;
    }
    survivors.push_back(std::move(t));
  }
  active_ = std::move(survivors);

  // (7) Output.
  for (const auto& t : active_) {
    Box box;
    box.track_id = t.id;
    const auto hit = std::find_if(
        out.associations.begin(), out.associations.end(),
        [&](const auto& a) { return a.first == t.id; });
    if (hit != out.associations.end()) {
      const auto& det = detections[static_cast<std::size_t>(hit->second)];
      box.x = t.kalman.position().x();
      box.y = t.kalman.position().y();
      box.height = det.height;
      box.width = det.width;
    } else {
      const double gap = static_cast<double>(frame - t.last_associated_frame);
      const Vector2 p = t.kalman.position() + gap * t.kalman.velocity();
      box.x = p.x();
      box.y = p.y();
      box.height = t.shape.height;
      box.width = t.shape.width;
    }
    out.boxes.push_back(box);
  }
  return out;
}

void Tracker::AssociatePending(long frame,
                               const std::vector<assoc::DetectionObs>& detections,
                               const std::vector<int>& leftover,
                               FrameOutput& out) {
  std::vector<assoc::DetectionObs> dets;
  dets.reserve(leftover.size());
  for (int c : leftover) dets.push_back(detections[static_cast<std::size_t>(c)]);

  std::vector<assoc::TrackSnapshot> snaps;
  snaps.reserve(pending_.size());
  for (const auto& p : pending_) {
    assoc::TrackSnapshot s;
    s.tail_position = p.kalman.position();
    s.velocity = p.kalman.velocity();
    s.frame_gap = static_cast<int>(frame - p.last_frame());
    s.shape_height = p.shape.height;
    s.shape_width = p.shape.width;
    snaps.push_back(std::move(s));
  }
  const assoc::CostMatrix costs =
      assoc::BuildCostMatrix(snaps, dets, config_.lambda, config_.gate);
  const assoc::Assignment assignment = assoc::GateAssignment(
      assoc::Hungarian(costs.cost), costs.cost, config_.gate);

  for (const auto& [r, c] : assignment.pairs) {
    PendingTracklet& p = pending_[static_cast<std::size_t>(r)];
    const auto& det = dets[static_cast<std::size_t>(c)];
    p.kalman = KalmanCorrect(PredictSteps(p.kalman, frame - p.last_frame()),
                             det.position);
    p.shape.Add(det.height, det.width);
    p.detections.emplace_back(frame, det);
  }
  std::vector<int> origin(pending_.size(), -1);
  for (const auto& [r, c] : assignment.pairs) origin[r] = leftover[c];
  for (int c : assignment.unmatched_cols) {
    const auto& det = dets[static_cast<std::size_t>(c)];
    PendingTracklet p;
    p.kalman = KalmanState::AtRest(det.position, config_.process_noise,
                                   config_.measurement_noise);
    p.shape.Add(det.height, det.width);
    p.detections.emplace_back(frame, det);
    pending_.push_back(std::move(p));
    origin.push_back(leftover[c]);
  }

  std::vector<PendingTracklet> keep;
  keep.reserve(pending_.size());
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    PendingTracklet& p = pending_[i];
    if (p.last_frame() == frame &&
        p.detections.size() >= static_cast<std::size_t>(config_.T_init)) {
      const int id = next_id_++;
      active_.push_back(PromoteTracklet(p, general_model_, config_, id));
      out.spawned.push_back(id);
      out.associations.emplace_back(id, origin[i]);
      continue;
    }
    // At most one missed frame.
    if (frame - p.last_frame() >= 2) continue;
    keep.push_back(std::move(p));
  }
  pending_ = std::move(keep);
}

}  // namespace tdam::tracker
