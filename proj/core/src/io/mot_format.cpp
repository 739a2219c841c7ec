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

#include "tdam/io/mot_format.hpp"

#include <algorithm>
#include <string>

#include "tdam/io/csv.hpp"

namespace tdam::io {

DetectionRecord ParseDetectionLine(std::string_view line, const std::string& where) {
  const auto f = Split(line);
  if (f.size() < 7 || f.size() > 10) {
    throw InputError(where + ": expected 7 to 10 fields, found " +
                     std::to_string(f.size()));
  }
  DetectionRecord r;
  r.frame = ParseLong(f[0], where);
  r.id = ParseLong(f[1], where);
  r.bb_left = ParseDouble(f[2], where);
  r.bb_top = ParseDouble(f[3], where);
  r.bb_width = ParseDouble(f[4], where);
  r.bb_height = ParseDouble(f[5], where);
  r.confidence = ParseDouble(f[6], where);
  if (r.frame < 1) throw InputError(where + ": frame must be >= 1");
  if (!(r.bb_width > 0.0 && r.bb_height > 0.0)) {
    throw InputError(where + ": box width and height must be positive");
  }
  return r;
}

std::string FormatDetectionLine(const DetectionRecord& r) {
  return std::to_string(r.frame) + ',' + std::to_string(r.id) + ',' +
         FormatDouble(r.bb_left) + ',' + FormatDouble(r.bb_top) + ',' +
         FormatDouble(r.bb_width) + ',' + FormatDouble(r.bb_height) + ',' +
         FormatDouble(r.confidence) + ",-1,-1,-1";
}

std::vector<DetectionRecord> ParseDetections(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::vector<DetectionRecord> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    out.push_back(ParseDetectionLine(line, path + ":" + std::to_string(line_no)));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.frame < b.frame; });
  return out;
}

void WriteDetections(const std::string& path,
                     const std::vector<DetectionRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (const auto& r : records) out << FormatDetectionLine(r) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

assoc::DetectionObs ToObservation(const DetectionRecord& r, Vector appearance) {
  assoc::DetectionObs o;
  o.appearance = std::move(appearance);
  o.position = Vector2(r.bb_left + 0.5 * r.bb_width, r.bb_top + 0.5 * r.bb_height);
  o.height = r.bb_height;
  o.width = r.bb_width;
  o.confidence = r.confidence;
  return o;
}

std::vector<assoc::DetectionObs> LoadFeatures(
    const std::string& path, const std::vector<DetectionRecord>& detections,
    int expected_dim) {
  auto rows = ReadNumericCsv(path);
  if (rows.size() != detections.size()) {
    throw InputError(path + ": " + std::to_string(rows.size()) +
                     " feature rows for " + std::to_string(detections.size()) +
                     " detections");
  }
  if (expected_dim >= 0 && !rows.empty() && rows.front().size() != expected_dim) {
    throw InputError(path + ": feature dimension " +
                     std::to_string(rows.front().size()) + ", expected " +
                     std::to_string(expected_dim));
  }
  std::vector<assoc::DetectionObs> out;
  out.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.push_back(ToObservation(detections[k], std::move(rows[k])));
  }
  return out;
}

// --- FrameReader ------------------------------------------------------------

FrameReader::FrameReader(const std::string& detections_path,
                         const std::string& features_path)
    : det_path_(detections_path),
      feat_path_(features_path),
      dets_(detections_path),
      feats_(features_path) {
  if (!dets_) throw InputError("cannot open '" + det_path_ + "'");
  if (!feats_) throw InputError("cannot open '" + feat_path_ + "'");
}

bool FrameReader::ReadRow(DetectionRecord& rec, Vector& feat) {
  std::string line;
  bool got = false;
  while (std::getline(dets_, line)) {
    ++det_line_;
    if (Trim(line).empty()) continue;
    rec = ParseDetectionLine(line, det_path_ + ":" + std::to_string(det_line_));
    got = true;
    break;
  }
  // Skip blank feature lines regardless, so trailing newlines are harmless.
  std::string fline;
  bool fgot = false;
  while (std::getline(feats_, fline)) {
    ++feat_line_;
    if (Trim(fline).empty()) continue;
    fgot = true;
    break;
  }
  if (got != fgot) {
    throw InputError(feat_path_ + ": feature rows and detection rows differ in count (" +
                     (got ? "features ended first at detection line " +
                                std::to_string(det_line_)
                          : "detections ended first at feature line " +
                                std::to_string(feat_line_)) +
                     ")");
  }
  if (!got) return false;
  const std::string where = feat_path_ + ":" + std::to_string(feat_line_);
  const auto fields = Split(fline);
  const auto w = static_cast<Eigen::Index>(fields.size());
  if (width_ >= 0 && w != width_) {
    throw InputError(where + ": feature dimension " + std::to_string(w) +
                     ", expected " + std::to_string(width_));
  }
  width_ = w;
  feat.resize(w);
  for (Eigen::Index i = 0; i < w; ++i) {
    feat[i] = ParseDouble(fields[static_cast<std::size_t>(i)], where);
  }
  return true;
}

std::optional<FrameReader::Frame> FrameReader::Next() {
  Frame f;
  if (held_rec_) {
    f.frame = held_rec_->frame;
    f.records.push_back(*held_rec_);
    f.features.push_back(std::move(held_feat_));
    held_rec_.reset();
  }
  DetectionRecord rec;
  Vector feat;
  while (ReadRow(rec, feat)) {
    if (f.records.empty()) {
      f.frame = rec.frame;
    } else if (rec.frame < f.frame) {
      throw InputError(det_path_ + ":" + std::to_string(det_line_) +
                       ": frames must be non-decreasing for streaming input");
    } else if (rec.frame > f.frame) {
      held_rec_ = rec;
      held_feat_ = std::move(feat);
      return f;
    }
    f.records.push_back(rec);
    f.features.push_back(std::move(feat));
  }
  if (f.records.empty()) return std::nullopt;
  return f;
}

// --- results ----------------------------------------------------------------

std::vector<DetectionRecord> ToRecords(const tracker::FrameOutput& frame) {
  std::vector<DetectionRecord> out;
  out.reserve(frame.boxes.size());
  for (const auto& b : frame.boxes) {
    DetectionRecord r;
    r.frame = frame.frame;
    r.id = b.track_id;
    r.bb_left = b.x - 0.5 * b.width;
    r.bb_top = b.y - 0.5 * b.height;
    r.bb_width = b.width;
    r.bb_height = b.height;
    r.confidence = 1.0;
    out.push_back(r);
  }
  return out;
}

ResultWriter::ResultWriter(const std::string& path)
    : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw std::runtime_error("cannot write '" + path + "'");
}

void ResultWriter::Write(const tracker::FrameOutput& frame) {
  for (const auto& r : ToRecords(frame)) out_ << FormatDetectionLine(r) << '\n';
  if (!out_) throw std::runtime_error("write failed for '" + path_ + "'");
}

void ResultWriter::Close() {
  out_.close();
  if (out_.fail()) throw std::runtime_error("write failed for '" + path_ + "'");
}

void WriteResults(const std::string& path,
                  const std::vector<tracker::FrameOutput>& outputs) {
  ResultWriter w(path);
  for (const auto& f : outputs) w.Write(f);
  w.Close();
}

}  // namespace tdam::io
