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

// Synthetic scenes with known identities.
//
// Targets move along piecewise-linear waypoint paths; each one emits
// appearances from its own ground-truth HMM. A detector model drops boxes,
// jitters their centers and adds uniform false alarms. Output is fully
// determined by the ScenarioSpec (including its seed).

#ifndef TDAM_IO_SIMULATE_HPP_
#define TDAM_IO_SIMULATE_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tdam/hmm/model.hpp"
#include "tdam/io/mot_format.hpp"

namespace tdam::io {

struct Waypoint {
  long frame = 1;
  double x = 0.0;  // box center
  double y = 0.0;
};

struct TargetSpec {
  hmm::TdamModel appearance;
  std::vector<Waypoint> waypoints;  // strictly increasing frames
  double height = 120.0;
  double width = 50.0;
  // Inclusive [first, last] frame ranges in which the target is not detected.
  std::vector<std::pair<long, long>> occlusions;
};

struct ScenarioSpec {
  long n_frames = 100;
  double image_width = 1920.0;
  double image_height = 1080.0;
  std::vector<TargetSpec> targets;
  double miss_rate = 0.0;
  double false_alarm_rate = 0.0;  // probability of one false alarm per frame
  double position_sigma = 0.0;    // center jitter, pixels
  std::uint64_t seed = 0;

  // Throws InputError on inconsistent targets or out-of-range rates.
  void Validate() const;
};

struct SimulationOutput {
  std::vector<DetectionRecord> ground_truth;  // ids are 1-based target indices
  std::vector<DetectionRecord> detections;    // id = -1, shuffled within a frame
  std::vector<Vector> features;               // row-aligned with detections
  std::vector<int> identities;                // target id per detection, -1 = clutter
};

SimulationOutput Simulate(const ScenarioSpec& spec);

// Draws `length` appearances: initial state uniform, then state transitions,
// then one component and one Gaussian draw per step.
std::vector<hmm::Observation> SampleAppearances(const hmm::TdamModel& model,
                                                long length,
                                                std::mt19937_64& rng);

// Parameters of the scenario builders; also the scenario.cfg schema.
struct ScenarioOptions {
  std::string type = "crossing";  // crossing | random
  int n_targets = 2;
  long n_frames = 100;
  double image_width = 1920.0;
  double image_height = 1080.0;
  std::uint64_t seed = 0;
  double miss_rate = 0.0;
  double false_alarm_rate = 0.0;
  double position_sigma = 0.0;

  // Appearance: every target draws `states_per_target` emission states from a
  // shared pool of `pool_states` means and cycles through them in its own
  // order with probability `cycle_prob` (otherwise it stays).
  int d = 8;
  int pool_states = 4;
  int states_per_target = 3;
  double separation = 2.0;  // norm of each pool mean
  double appearance_sigma = 0.3;
  double cycle_prob = 0.9;

  // Crossing geometry: targets converge on one point, stand there for
  // `pause_frames`, then leave in random directions.
  double speed = 4.0;
  long pause_frames = 10;
  double meet_spread = 6.0;
  double box_height = 120.0;
  double box_width = 50.0;

  void Set(std::string_view key, std::string_view value);
  static ScenarioOptions Parse(std::string_view text);
  static ScenarioOptions Load(const std::string& path);
};

ScenarioSpec BuildScenario(const ScenarioOptions& options);
ScenarioSpec BuildCrossingScenario(const ScenarioOptions& options);
ScenarioSpec BuildRandomScenario(const ScenarioOptions& options);

}  // namespace tdam::io

#endif  // TDAM_IO_SIMULATE_HPP_
