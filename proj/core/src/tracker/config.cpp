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

#include "tdam/tracker/config.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <sstream>

#include "tdam/io/csv.hpp"

namespace tdam::tracker {

namespace {

int ParseInt(std::string_view v, std::string_view key) {
  const long x = io::ParseLong(v, key);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    throw InputError(std::string(key) + ": value out of range");
  }
  return static_cast<int>(x);
}

Matrix2 ParseLambda(std::string_view v) {
  const auto parts = io::Split(v, ',');
  Matrix2 m = Matrix2::Zero();
  if (parts.size() == 2) {
    m(0, 0) = io::ParseDouble(parts[0], "lambda");
    m(1, 1) = io::ParseDouble(parts[1], "lambda");
  } else if (parts.size() == 4) {
    m << io::ParseDouble(parts[0], "lambda"), io::ParseDouble(parts[1], "lambda"),
        io::ParseDouble(parts[2], "lambda"), io::ParseDouble(parts[3], "lambda");
  } else {
    throw InputError("lambda: expected 2 (diagonal) or 4 (row-major) values");
  }
  return m;
}

}  // namespace

const std::vector<std::string>& TrackerConfig::Keys() {
  static const std::vector<std::string> keys = {
      "L",           "N",              "M",
      "d",           "eta",            "T_init",
      "T_term",      "lambda",         "gate",
      "variance_floor", "occupancy_floor", "appearance_mode",
      "process_noise",  "measurement_noise", "feature_scale",
      "image_width",    "image_height",      "exit_frames",
      "seed"};
  return keys;
}

void TrackerConfig::Set(std::string_view key, std::string_view value) {
  value = io::Trim(value);
  if (key == "L") L = ParseInt(value, key);
  else if (key == "N") N = ParseInt(value, key);
  else if (key == "M") M = ParseInt(value, key);
  else if (key == "d") d = ParseInt(value, key);
  else if (key == "eta") eta = io::ParseDouble(value, key);
  else if (key == "T_init") T_init = ParseInt(value, key);
  else if (key == "T_term") T_term = ParseInt(value, key);
  else if (key == "lambda") lambda = ParseLambda(value);
  else if (key == "gate") gate = io::ParseDouble(value, key);
  else if (key == "variance_floor") variance_floor = io::ParseDouble(value, key);
  else if (key == "occupancy_floor") occupancy_floor = io::ParseDouble(value, key);
  else if (key == "appearance_mode") appearance_mode = assoc::ParseAppearanceMode(value);
  else if (key == "process_noise") process_noise = io::ParseDouble(value, key);
  else if (key == "measurement_noise") measurement_noise = io::ParseDouble(value, key);
  else if (key == "feature_scale") feature_scale = io::ParseDouble(value, key);
  else if (key == "image_width") image_width = io::ParseDouble(value, key);
  else if (key == "image_height") image_height = io::ParseDouble(value, key);
  else if (key == "exit_frames") exit_frames = ParseInt(value, key);
  else if (key == "seed") seed = io::ParseUnsigned(value, key);
  else throw InputError("unknown config key '" + std::string(key) + "'");
}

std::string TrackerConfig::Get(std::string_view key) const {
  using io::FormatDouble;
  if (key == "L") return std::to_string(L);
  if (key == "N") return std::to_string(N);
  if (key == "M") return std::to_string(M);
  if (key == "d") return std::to_string(d);
  if (key == "eta") return FormatDouble(eta);
  if (key == "T_init") return std::to_string(T_init);
  if (key == "T_term") return std::to_string(T_term);
  if (key == "lambda") {
    return FormatDouble(lambda(0, 0)) + "," + FormatDouble(lambda(0, 1)) + "," +
           FormatDouble(lambda(1, 0)) + "," + FormatDouble(lambda(1, 1));
  }
  if (key == "gate") return FormatDouble(gate);
  if (key == "variance_floor") return FormatDouble(variance_floor);
  if (key == "occupancy_floor") return FormatDouble(occupancy_floor);
  if (key == "appearance_mode") return std::string(assoc::ToString(appearance_mode));
  if (key == "process_noise") return FormatDouble(process_noise);
  if (key == "measurement_noise") return FormatDouble(measurement_noise);
  if (key == "feature_scale") return FormatDouble(feature_scale);
  if (key == "image_width") return FormatDouble(image_width);
  if (key == "image_height") return FormatDouble(image_height);
  if (key == "exit_frames") return std::to_string(exit_frames);
  if (key == "seed") return std::to_string(seed);
  throw InputError("unknown config key '" + std::string(key) + "'");
}

void TrackerConfig::Validate() const {
  auto fail = [](const std::string& msg) { throw InputError("config: " + msg); };
  if (L < 2) fail("L must be >= 2");
  if (N < 1 || M < 1 || d < 1) fail("N, M and d must be >= 1");
  if (!(eta > 0.0 && eta <= 1.0)) fail("eta must lie in (0, 1]");
  if (T_init < 1 || T_term < 1) fail("T_init and T_term must be >= 1");
  if (!(lambda(0, 0) > 0.0) || !(lambda.determinant() > 0.0) ||
      std::abs(lambda(0, 1) - lambda(1, 0)) > 1e-12) {
    fail("lambda must be symmetric positive definite");
  }
  if (!(gate > 0.0)) fail("gate must be positive");
  if (!(variance_floor > 0.0)) fail("variance_floor must be positive");
  if (!(occupancy_floor >= 0.0)) fail("occupancy_floor must be >= 0");
  if (!(process_noise >= 0.0) || !(measurement_noise > 0.0)) {
    fail("kalman noise must be non-negative (process) and positive (measurement)");
  }
  if (!(feature_scale > 0.0)) fail("feature_scale must be positive");
  if (image_width < 0.0 || image_height < 0.0 || exit_frames < 0) {
    fail("image size and exit_frames must be >= 0");
  }
}

TrackerConfig TrackerConfig::Parse(std::string_view text) {
  TrackerConfig cfg;
  io::ParseKeyValueText(text, "config", [&](std::string_view k, std::string_view v) {
    cfg.Set(k, v);
  });
  cfg.Validate();
  return cfg;
}

TrackerConfig TrackerConfig::Load(const std::string& path) {
  return Parse(io::ReadFile(path));
}

std::string TrackerConfig::ToText() const {
  std::ostringstream out;
  for (const auto& key : Keys()) out << key << " = " << Get(key) << '\n';
  return out.str();
}

TrackerConfig SetAppearanceMode(TrackerConfig config,
                                assoc::AppearanceMode mode) {
  config.appearance_mode = mode;
  return config;
}

}  // namespace tdam::tracker
