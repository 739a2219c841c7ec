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

#ifndef TDAM_TRACKER_CONFIG_HPP_
#define TDAM_TRACKER_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tdam/assoc/affinity.hpp"
#include "tdam/common.hpp"

namespace tdam::tracker {

struct TrackerConfig {
  int L = 8;  // appearance window length
  int N = 8;  // hidden states
  int M = 3;  // mixture components per state
  int d = 64;  // mid-level feature dimension
  double eta = 0.8;
  int T_init = 5;
  int T_term = 5;
  Matrix2 lambda = (Matrix2() << 400.0, 0.0, 0.0, 2500.0).finished();
  double gate = assoc::kDefaultGate;
  double variance_floor = 1e-4;
  double occupancy_floor = 1e-6;
  assoc::AppearanceMode appearance_mode = assoc::AppearanceMode::kTdam;
  double process_noise = 1.0;
  double measurement_noise = 10.0;
  double feature_scale = 1.0;
  // Exit-of-view termination; disabled while either image dimension is 0 or
  // exit_frames is 0.
  double image_width = 0.0;
  double image_height = 0.0;
  int exit_frames = 2;
  std::uint64_t seed = 0;

  // Throws InputError on a violated invariant.
  void Validate() const;

  // Sets one field from its textual form; unknown keys are errors.
  void Set(std::string_view key, std::string_view value);
  std::string Get(std::string_view key) const;

  static const std::vector<std::string>& Keys();

  // Flat key=value text, one pair per line, '#' starts a comment.
  static TrackerConfig Parse(std::string_view text);
  static TrackerConfig Load(const std::string& path);
  std::string ToText() const;
};

TrackerConfig SetAppearanceMode(TrackerConfig config,
                                assoc::AppearanceMode mode);

}  // namespace tdam::tracker

#endif  // TDAM_TRACKER_CONFIG_HPP_
