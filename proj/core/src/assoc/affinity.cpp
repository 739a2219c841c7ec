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

#include "tdam/assoc/affinity.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <string>

namespace tdam::assoc {

std::string_view ToString(AppearanceMode mode) {
  switch (mode) {
    case AppearanceMode::kTdam:
      return "tdam";
    case AppearanceMode::kSpatialOnly:
      return "spatial_only";
    case AppearanceMode::kFeatureDistance:
      return "feature_distance";
  }
  return "unknown";
}

AppearanceMode ParseAppearanceMode(std::string_view name) {
  if (name == "tdam") return AppearanceMode::kTdam;
  if (name == "spatial_only") return AppearanceMode::kSpatialOnly;
  if (name == "feature_distance") return AppearanceMode::kFeatureDistance;
  throw InputError("unknown appearance mode '" + std::string(name) +
                   "' (expected tdam, spatial_only or feature_distance)");
}

AppearanceCache MakeAppearanceCache(AppearanceMode mode,
                                    const hmm::TdamModel& model,
                                    const hmm::AppearanceWindow& window,
                                    const Matrix& occupancy,
                                    double feature_scale) {
  AppearanceCache cache;
  cache.kind = mode;
  cache.model = &model;
  cache.feature_scale = feature_scale;
  switch (mode) {
    case AppearanceMode::kTdam:
      cache.prediction = hmm::ForwardPredict(model, window);
      break;
    case AppearanceMode::kSpatialOnly: {
      const int n = model.num_states();
      Vector weights = occupancy.size() > 0 ? Vector(occupancy.rowwise().sum())
                                            : Vector::Zero(n);
      const double total = weights.sum();
      if (!(total > 0.0)) weights = Vector::Ones(n);
      weights /= weights.sum();
      cache.log_state_weights = weights.unaryExpr(
          [](double w) { return w > 0.0 ? std::log(w) : kNegInf; });
      break;
    }
    case AppearanceMode::kFeatureDistance: {
      if (!(feature_scale > 0.0)) {
        throw InputError("feature_distance: scale must be positive");
      }
      cache.window_mean = Vector::Zero(model.dim());
      for (const auto& e : window.entries()) cache.window_mean += e.appearance;
      if (!window.empty()) {
        cache.window_mean /= static_cast<double>(window.size());
      }
      break;
    }
  }
  return cache;
}

double AppearanceAffinity(const TrackSnapshot& track, const DetectionObs& det) {
  const AppearanceCache& c = track.appearance;
  if (!c.kind) return 0.0;
  switch (*c.kind) {
    case AppearanceMode::kTdam:
      return hmm::PredictiveLogLikelihood(*c.model, c.prediction,
                                          det.appearance);
    case AppearanceMode::kSpatialOnly:
      return LogSumExp(c.log_state_weights +
                       c.model->EmissionLogDensities(det.appearance));
    case AppearanceMode::kFeatureDistance:
      RequireDim(det.appearance.size(), c.window_mean.size(),
                 "feature distance");
      return -(c.window_mean - det.appearance).norm() / c.feature_scale;
  }
  return 0.0;
}

double MotionAffinity(const TrackSnapshot& track, const DetectionObs& det,
                      const Matrix2& lambda) {
  const double det_l = lambda.determinant();
  if (!lambda.allFinite() || std::abs(lambda(0, 1) - lambda(1, 0)) > 1e-12 ||
      !(lambda(0, 0) > 0.0) || !(det_l > 0.0)) {
    throw InputError("motion affinity: lambda must be symmetric positive definite");
  }
  const Vector2 diff = track.PredictedPosition() - det.position;
  const double mahalanobis = diff.dot(lambda.inverse() * diff);
  return -std::log(2.0 * std::numbers::pi) - 0.5 * std::log(det_l) -
         0.5 * mahalanobis;
}

double ShapeAffinity(const TrackSnapshot& track, const DetectionObs& det) {
  const double hx = track.shape_height;
  const double wx = track.shape_width;
  if (!(hx > 0.0 && wx > 0.0 && det.height > 0.0 && det.width > 0.0)) {
    throw InputError("shape affinity: sizes must be positive");
  }
  return -0.5 * (std::abs(hx - det.height) / (hx + det.height) +
                 std::abs(wx - det.width) / (wx + det.width));
}

CostMatrix BuildCostMatrix(const std::vector<TrackSnapshot>& tracks,
                           const std::vector<DetectionObs>& detections,
                           const Matrix2& lambda, double gate) {
  const auto rows = static_cast<Eigen::Index>(tracks.size());
  const auto cols = static_cast<Eigen::Index>(detections.size());
  CostMatrix out;
  out.cost.resize(rows, cols);
  out.breakdown.resize(static_cast<std::size_t>(rows * cols));
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& track = tracks[static_cast<std::size_t>(r)];
      const auto& det = detections[static_cast<std::size_t>(c)];
      AffinityBreakdown b;
      b.appearance = AppearanceAffinity(track, det);
      b.motion = MotionAffinity(track, det, lambda);
      b.shape = ShapeAffinity(track, det);
      b.total_cost = -(b.appearance + b.motion + b.shape);
      out.breakdown[static_cast<std::size_t>(r * cols + c)] = b;
      out.cost(r, c) = b.total_cost < gate ? b.total_cost : kInf;
    }
  }
  return out;
}

}  // namespace tdam::assoc
