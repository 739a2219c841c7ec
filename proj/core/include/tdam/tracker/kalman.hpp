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

#ifndef TDAM_TRACKER_KALMAN_HPP_
#define TDAM_TRACKER_KALMAN_HPP_

#include <Eigen/Core>

#include "tdam/common.hpp"

namespace tdam::tracker {

using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;

/**
 * Constant-velocity filter over (x, y, vx, vy) in image pixels.
 *
 * Transition: x' = x + vx, y' = y + vy, velocities unchanged, plus
 * process noise q * I. Measurement: (x, y) with noise r * I.
 */
struct KalmanState {
  Vector4 state = Vector4::Zero();
  Matrix4 covariance = Matrix4::Identity();
  double process_noise = 1.0;       // q, pixels^2
  double measurement_noise = 10.0;  // r, pixels^2

  Vector2 position() const { return state.head<2>(); }
  Vector2 velocity() const { return state.tail<2>(); }

  // Zero velocity at `position`; position variance r, velocity variance
  // `velocity_variance`.
  static KalmanState AtRest(const Vector2& position, double process_noise,
                            double measurement_noise,
                            double velocity_variance = 100.0);
};

KalmanState KalmanPredict(const KalmanState& s);
KalmanState KalmanCorrect(const KalmanState& s, const Vector2& measurement);

}  // namespace tdam::tracker

#endif  // TDAM_TRACKER_KALMAN_HPP_
