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

// MOTChallenge CSV layout:
//   frame,id,bb_left,bb_top,bb_width,bb_height,conf,x,y,z
// Detection files carry id = -1. The trailing world coordinates are ignored
// on input and written as -1. Appearance features live in a headerless
// sidecar CSV with one d-column row per detection row, in file order.

#ifndef TDAM_IO_MOT_FORMAT_HPP_
#define TDAM_IO_MOT_FORMAT_HPP_

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "tdam/assoc/affinity.hpp"
#include "tdam/tracker/tracker.hpp"

namespace tdam::io {

struct DetectionRecord {
  long frame = 1;
  long id = -1;
  double bb_left = 0.0;
  double bb_top = 0.0;
  double bb_width = 0.0;
  double bb_height = 0.0;
  double confidence = 1.0;

  bool operator==(const DetectionRecord&) const = default;
};

// Parses one CSV line (7 to 10 fields). Throws InputError naming `where`.
DetectionRecord ParseDetectionLine(std::string_view line, const std::string& where);
std::string FormatDetectionLine(const DetectionRecord& r);

// Whole file, stably sorted by frame. Empty file -> empty list.
std::vector<DetectionRecord> ParseDetections(const std::string& path);
void WriteDetections(const std::string& path,
                     const std::vector<DetectionRecord>& records);

// Pairs feature row k with detection k. Throws on count or width mismatch;
// `expected_dim` < 0 accepts any uniform width.
std::vector<assoc::DetectionObs> LoadFeatures(
    const std::string& path, const std::vector<DetectionRecord>& detections,
    int expected_dim = -1);

assoc::DetectionObs ToObservation(const DetectionRecord& r, Vector appearance);

// Streams a detection file and its feature sidecar one frame at a time.
// Frames must be non-decreasing in the file, since the sidecar is row-aligned.
class FrameReader {
 public:
  FrameReader(const std::string& detections_path,
              const std::string& features_path);

  struct Frame {
    long frame = 0;
    std::vector<DetectionRecord> records;
    std::vector<Vector> features;
  };

  // Next frame, or nullopt at end of input.
  std::optional<Frame> Next();

 private:
  bool ReadRow(DetectionRecord& rec, Vector& feat);

  std::string det_path_;
  std::string feat_path_;
  std::ifstream dets_;
  std::ifstream feats_;
  long det_line_ = 0;
  long feat_line_ = 0;
  Eigen::Index width_ = -1;
  std::optional<DetectionRecord> held_rec_;
  Vector held_feat_;
};

// Writes tracker output as MOTChallenge rows: positive ids, conf 1,
// x = y = z = -1. Box centers are converted back to top-left corners.
class ResultWriter {
 public:
  explicit ResultWriter(const std::string& path);
  void Write(const tracker::FrameOutput& frame);
  void Close();

 private:
  std::string path_;
  std::ofstream out_;
};

void WriteResults(const std::string& path,
                  const std::vector<tracker::FrameOutput>& outputs);

std::vector<DetectionRecord> ToRecords(const tracker::FrameOutput& frame);

}  // namespace tdam::io

#endif  // TDAM_IO_MOT_FORMAT_HPP_
