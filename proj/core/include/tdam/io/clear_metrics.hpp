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

// CLEAR-MOT and trajectory-level metrics.
//
// Per frame, pairs matched in the previous frame are kept while their IoU is
// still >= threshold; the remaining boxes are matched by an IoU-maximizing
// Hungarian pass restricted to IoU >= threshold. An identity switch is
// counted when a ground-truth track is matched to a hypothesis id different
// from the one it was last matched to.

#ifndef TDAM_IO_CLEAR_METRICS_HPP_
#define TDAM_IO_CLEAR_METRICS_HPP_

#include <string>
#include <vector>

#include "tdam/io/mot_format.hpp"

namespace tdam::io {

inline constexpr double kDefaultIouThreshold = 0.5;

struct SequenceMetrics {
  std::string name;
  double mota = 0.0;
  double motp = 0.0;
  long fp = 0;
  long fn = 0;
  long ids = 0;
  long frag = 0;
  double mt = 0.0;  // fraction of GT tracks covered >= 80%
  double ml = 0.0;  // fraction covered <= 20%
  double faf = 0.0;

  long gt_boxes = 0;
  long hyp_boxes = 0;
  long matches = 0;
  long frames = 0;
  long gt_tracks = 0;
  long mostly_tracked = 0;
  long mostly_lost = 0;
  double iou_sum = 0.0;
};

struct MetricsReport {
  double mota = 0.0;
  double motp = 0.0;
  long fp = 0;
  long fn = 0;
  long ids = 0;
  long frag = 0;
  double mt = 0.0;
  double ml = 0.0;
  double faf = 0.0;
  std::vector<SequenceMetrics> per_sequence;
};

double Iou(const DetectionRecord& a, const DetectionRecord& b);

SequenceMetrics EvaluateSequence(const std::vector<DetectionRecord>& gt,
                                 const std::vector<DetectionRecord>& results,
                                 double iou_threshold = kDefaultIouThreshold,
                                 std::string name = "sequence");

// Pools the counts of every sequence; ratios are recomputed from the sums.
MetricsReport Combine(std::vector<SequenceMetrics> sequences);

MetricsReport EvaluateClear(const std::vector<DetectionRecord>& gt,
                            const std::vector<DetectionRecord>& results,
                            double iou_threshold = kDefaultIouThreshold);

std::string FormatTable(const MetricsReport& report);
std::string FormatJson(const MetricsReport& report);

}  // namespace tdam::io

#endif  // TDAM_IO_CLEAR_METRICS_HPP_
