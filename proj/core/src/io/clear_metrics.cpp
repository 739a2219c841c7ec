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

#include "tdam/io/clear_metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tdam/assoc/hungarian.hpp"

namespace tdam::io {

namespace {

struct GtTrackState {
  long frames_present = 0;
  long frames_matched = 0;
  bool was_tracked = false;
  bool interrupted = false;  // tracked once, then lost
  std::optional<long> last_hyp;
};

using FrameIndex = std::map<long, std::vector<const DetectionRecord*>>;

FrameIndex ByFrame(const std::vector<DetectionRecord>& rows) {
  FrameIndex out;
  for (const auto& r : rows) out[r.frame].push_back(&r);
  return out;
}

void Finish(SequenceMetrics& m) {
  const double errors = static_cast<double>(m.fp + m.fn + m.ids);
  m.mota = 1.0 - errors / static_cast<double>(std::max<long>(m.gt_boxes, 1));
  m.motp = m.matches > 0 ? m.iou_sum / static_cast<double>(m.matches) : 0.0;
  m.faf = m.frames > 0 ? static_cast<double>(m.fp) / static_cast<double>(m.frames) : 0.0;
  const double tracks = static_cast<double>(std::max<long>(m.gt_tracks, 1));
  m.mt = m.gt_tracks > 0 ? static_cast<double>(m.mostly_tracked) / tracks : 0.0;
  m.ml = m.gt_tracks > 0 ? static_cast<double>(m.mostly_lost) / tracks : 0.0;
}

}  // namespace

double Iou(const DetectionRecord& a, const DetectionRecord& b) {
  const double ix = std::min(a.bb_left + a.bb_width, b.bb_left + b.bb_width) -
                    std::max(a.bb_left, b.bb_left);
  const double iy = std::min(a.bb_top + a.bb_height, b.bb_top + b.bb_height) -
                    std::max(a.bb_top, b.bb_top);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  if (a.bb_left == b.bb_left && a.bb_top == b.bb_top && a.bb_width == b.bb_width &&
      a.bb_height == b.bb_height) {
    return 1.0;
  }
  const double inter = ix * iy;
  const double uni = a.bb_width * a.bb_height + b.bb_width * b.bb_height - inter;
  return uni > 0.0 ? std::min(1.0, inter / uni) : 0.0;
}

SequenceMetrics EvaluateSequence(const std::vector<DetectionRecord>& gt,
                                 const std::vector<DetectionRecord>& results,
                                 double iou_threshold, std::string name) {
  SequenceMetrics m;
  m.name = std::move(name);
  const FrameIndex gt_frames = ByFrame(gt);
  const FrameIndex hyp_frames = ByFrame(results);
  std::set<long> frames;
  for (const auto& [f, _] : gt_frames) frames.insert(f);
  for (const auto& [f, _] : hyp_frames) frames.insert(f);
  m.frames = static_cast<long>(frames.size());

  std::map<long, GtTrackState> tracks;
  std::map<long, long> prev_pairs;  // gt id -> hyp id, previous frame only
  const std::vector<const DetectionRecord*> none;

  for (long frame : frames) {
    const auto git = gt_frames.find(frame);
    const auto hit = hyp_frames.find(frame);
    const auto& g = git == gt_frames.end() ? none : git->second;
    const auto& h = hit == hyp_frames.end() ? none : hit->second;
    m.gt_boxes += static_cast<long>(g.size());
    m.hyp_boxes += static_cast<long>(h.size());

    std::vector<int> hyp_of_gt(g.size(), -1);
    std::vector<bool> hyp_used(h.size(), false);

    // Carry over still-valid pairs from the previous frame.
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto prev = prev_pairs.find(g[i]->id);
      if (prev == prev_pairs.end()) continue;
      for (std::size_t j = 0; j < h.size(); ++j) {
        if (hyp_used[j] || h[j]->id != prev->second) continue;
        if (Iou(*g[i], *h[j]) >= iou_threshold) {
          hyp_of_gt[i] = static_cast<int>(j);
          hyp_used[j] = true;
        }
        break;
      }
    }

    // Hungarian on what is left.
    std::vector<int> rows, cols;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (hyp_of_gt[i] < 0) rows.push_back(static_cast<int>(i));
    }
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (!hyp_used[j]) cols.push_back(static_cast<int>(j));
    }
    if (!rows.empty() && !cols.empty()) {
      Matrix cost(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(cols.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
          const double iou = Iou(*g[static_cast<std::size_t>(rows[r])],
                                 *h[static_cast<std::size_t>(cols[c])]);
          cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              iou >= iou_threshold ? 1.0 - iou : kInf;
        }
      }
      for (const auto& [r, c] : assoc::Hungarian(cost).pairs) {
        hyp_of_gt[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])] =
            cols[static_cast<std::size_t>(c)];
      }
    }

    std::map<long, long> pairs;
    for (std::size_t i = 0; i < g.size(); ++i) {
      GtTrackState& t = tracks[g[i]->id];
      ++t.frames_present;
      const int j = hyp_of_gt[i];
      if (j < 0) {
        ++m.fn;
        if (t.was_tracked) t.interrupted = true;
        continue;
      }
      const DetectionRecord& hyp = *h[static_cast<std::size_t>(j)];
      ++m.matches;
      ++t.frames_matched;
      m.iou_sum += Iou(*g[i], hyp);
      if (t.last_hyp && *t.last_hyp != hyp.id) ++m.ids;
      if (t.interrupted) {
        ++m.frag;
        t.interrupted = false;
      }
      t.was_tracked = true;
      t.last_hyp = hyp.id;
      pairs[g[i]->id] = hyp.id;
    }
    m.fp += static_cast<long>(h.size()) -
            static_cast<long>(std::count_if(hyp_of_gt.begin(), hyp_of_gt.end(),
                                            [](int j) { return j >= 0; }));
    prev_pairs = std::move(pairs);
  }

  m.gt_tracks = static_cast<long>(tracks.size());
  for (const auto& [id, t] : tracks) {
    const double ratio = static_cast<double>(t.frames_matched) /
                         static_cast<double>(t.frames_present);
    if (ratio >= 0.8) ++m.mostly_tracked;
    if (ratio <= 0.2) ++m.mostly_lost;
  }
  Finish(m);
  return m;
}

MetricsReport Combine(std::vector<SequenceMetrics> sequences) {
  SequenceMetrics total;
  for (const auto& s : sequences) {
    total.fp += s.fp;
    total.fn += s.fn;
    total.ids += s.ids;
    total.frag += s.frag;
    total.gt_boxes += s.gt_boxes;
    total.hyp_boxes += s.hyp_boxes;
    total.matches += s.matches;
    total.frames += s.frames;
    total.gt_tracks += s.gt_tracks;
    total.mostly_tracked += s.mostly_tracked;
    total.mostly_lost += s.mostly_lost;
    total.iou_sum += s.iou_sum;
  }
  Finish(total);
  MetricsReport r;
  r.mota = total.mota;
  r.motp = total.motp;
  r.fp = total.fp;
  r.fn = total.fn;
  r.ids = total.ids;
  r.frag = total.frag;
  r.mt = total.mt;
  r.ml = total.ml;
  r.faf = total.faf;
  r.per_sequence = std::move(sequences);
  return r;
}

MetricsReport EvaluateClear(const std::vector<DetectionRecord>& gt,
                            const std::vector<DetectionRecord>& results,
                            double iou_threshold) {
  return Combine({EvaluateSequence(gt, results, iou_threshold)});
}

std::string FormatTable(const MetricsReport& report) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-16s %8s %8s %7s %7s %6s %6s %6s %6s %8s\n",
                "sequence", "MOTA", "MOTP", "FP", "FN", "IDS", "Frag", "MT",
                "ML", "FAF");
  out << buf;
  auto row = [&](const std::string& name, double mota, double motp, long fp,
                 long fn, long ids, long frag, double mt, double ml, double faf) {
    std::snprintf(buf, sizeof(buf),
                  "%-16s %8.4f %8.4f %7ld %7ld %6ld %6ld %6.3f %6.3f %8.4f\n",
                  name.c_str(), mota, motp, fp, fn, ids, frag, mt, ml, faf);
    out << buf;
  };
  for (const auto& s : report.per_sequence) {
    row(s.name, s.mota, s.motp, s.fp, s.fn, s.ids, s.frag, s.mt, s.ml, s.faf);
  }
  row("OVERALL", report.mota, report.motp, report.fp, report.fn, report.ids,
      report.frag, report.mt, report.ml, report.faf);
  return out.str();
}

std::string FormatJson(const MetricsReport& report) {
  using nlohmann::ordered_json;
  auto metrics = [](double mota, double motp, long fp, long fn, long ids,
                    long frag, double mt, double ml, double faf) {
    ordered_json j;
    j["mota"] = mota;
    j["motp"] = motp;
    j["fp"] = fp;
    j["fn"] = fn;
    j["ids"] = ids;
    j["frag"] = frag;
    j["mt"] = mt;
    j["ml"] = ml;
    j["faf"] = faf;
    return j;
  };
  ordered_json root = metrics(report.mota, report.motp, report.fp, report.fn,
                              report.ids, report.frag, report.mt, report.ml,
                              report.faf);
  ordered_json seqs = ordered_json::array();
  for (const auto& s : report.per_sequence) {
    ordered_json j;
    j["name"] = s.name;
    j.update(metrics(s.mota, s.motp, s.fp, s.fn, s.ids, s.frag, s.mt, s.ml, s.faf));
    j["gt_boxes"] = s.gt_boxes;
    j["hyp_boxes"] = s.hyp_boxes;
    j["matches"] = s.matches;
    j["frames"] = s.frames;
    j["gt_tracks"] = s.gt_tracks;
    seqs.push_back(std::move(j));
  }
  root["per_sequence"] = std::move(seqs);
  return root.dump(2) + "\n";
}

}  // namespace tdam::io
