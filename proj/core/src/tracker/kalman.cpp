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

#include "tdam/tracker/kalman.hpp"

#include <Eigen/LU>

namespace tdam::tracker {

namespace {

Matrix4 Transition() {
  Matrix4 f = Matrix4::Identity();
  f(0, 2) = 1.0;
  f(1, 3) = 1.0;
  return f;
}

}  // namespace

KalmanState KalmanState::AtRest(const Vector2& position, double process_noise,
                                double measurement_noise,
                                double velocity_variance) {
  KalmanState s;
  s.state << position.x(), position.y(), 0.0, 0.0;
  s.covariance.setZero();
  s.covariance.diagonal() << measurement_noise, measurement_noise,
      velocity_variance, velocity_variance;
  s.process_noise = process_noise;
  s.measurement_noise = measurement_noise;
  return s;
}

KalmanState KalmanPredict(const KalmanState& s) {
  static const Matrix4 f = Transition();
  KalmanState out = s;
  out.state = f * s.state;
  out.covariance = f * s.covariance * f.transpose() +
                   s.process_noise * Matrix4::Identity();
  return out;
}

KalmanState KalmanCorrect(const KalmanState& s, const Vector2& measurement) {
  using Matrix24 = Eigen::Matrix<double, 2, 4>;
  Matrix24 h = Matrix24::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;

  const Vector2 innovation = measurement - h * s.state;
  const Matrix2 innovation_cov =
      h * s.covariance * h.transpose() + s.measurement_noise * Matrix2::Identity();
  const Eigen::Matrix<double, 4, 2> gain =
      s.covariance * h.transpose() * innovation_cov.inverse();

  KalmanState out = s;
  out.state = s.state + gain * innovation;
  // Joseph form keeps the covariance symmetric PSD.
  const Matrix4 i_kh = Matrix4::Identity() - gain * h;
  out.covariance = i_kh * s.covariance * i_kh.transpose() +
                   s.measurement_noise * gain * gain.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose());
  return out;
}

}  // namespace tdam::tracker
