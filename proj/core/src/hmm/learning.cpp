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

#include "tdam/hmm/learning.hpp"

#include <algorithm>

namespace tdam::hmm {

WindowStats ComputeWindowStatistics(const Posteriors& posteriors,
                                    const AppearanceWindow& window) {
  if (posteriors.gamma.size() != window.size() ||
      posteriors.xi.size() + 1 != std::max<std::size_t>(window.size(), 1)) {
    throw InputError("window_statistics: posteriors do not match the window");
  }
  const auto n = static_cast<int>(posteriors.gamma.front().rows());
  const auto m = static_cast<int>(posteriors.gamma.front().cols());
  const auto d = static_cast<int>(window.appearance(0).size());

  WindowStats out;
  out.stats = SufficientStats::Zero(n, m, d);
  out.has_transitions = !posteriors.xi.empty();
  for (const auto& xi : posteriors.xi) out.stats.trans += xi;

  for (std::size_t l = 0; l < window.size(); ++l) {
    const Matrix& g = posteriors.gamma[l];
    const Observation& o = window.appearance(l);
    const Eigen::RowVectorXd o_row = o.transpose();
    const Eigen::RowVectorXd sq_row = o.array().square().matrix().transpose();
    out.stats.occ += g;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < m; ++k) {
        out.stats.first_moment.row(i * m + k) += g(i, k) * o_row;
        out.stats.second_moment.row(i * m + k) += g(i, k) * sq_row;
      }
    }
  }
  return out;
}

SufficientStats Accumulate(const SufficientStats& stats,
                           const WindowStats& window_stats, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw InputError("accumulate: eta must lie in (0, 1]");
  }
  const SufficientStats& w = window_stats.stats;
  RequireDim(w.num_states(), stats.num_states(), "accumulate states");
  RequireDim(w.num_components(), stats.num_components(), "accumulate components");
  RequireDim(w.dim(), stats.dim(), "accumulate features");

  const double keep = 1.0 - eta;
  SufficientStats out;
  out.trans = window_stats.has_transitions ? Matrix(keep * stats.trans + eta * w.trans)
                                           : stats.trans;
  out.occ = keep * stats.occ + eta * w.occ;
  out.first_moment = keep * stats.first_moment + eta * w.first_moment;
  out.second_moment = keep * stats.second_moment + eta * w.second_moment;
  out.update_count = stats.update_count + 1;
  return out;
}

TdamModel Maximization(const SufficientStats& stats, const TdamModel& model,
                       const LearningOptions& options) {
  const int n = model.num_states();
  const int m = model.num_components();
  RequireDim(stats.num_states(), n, "maximization states");
  RequireDim(stats.num_components(), m, "maximization components");
  RequireDim(stats.dim(), model.dim(), "maximization features");

  Matrix transitions = model.transitions();
  std::vector<ObservationDensity> densities = model.densities();
  for (int i = 0; i < n; ++i) {
    if (options.learn_transitions) {
      const double row_total = stats.trans.row(i).sum();
      if (row_total > options.occupancy_floor) {
        transitions.row(i) = stats.trans.row(i) / row_total;
      }
    }

    auto& comps = densities[i].mutable_components();
    const double occ_total = stats.occ.row(i).sum();
    if (occ_total > options.occupancy_floor) {
      for (int k = 0; k < m; ++k) comps[k].weight = stats.occ(i, k) / occ_total;
    }
    for (int k = 0; k < m; ++k) {
      const double occ = stats.occ(i, k);
      if (!(occ > options.occupancy_floor)) continue;
      Vector mean = stats.first_moment.row(i * m + k).transpose() / occ;
      Vector var = stats.second_moment.row(i * m + k).transpose() / occ -
                   mean.array().square().matrix();
      comps[k].mean = std::move(mean);
      comps[k].variances = var.cwiseMax(options.variance_floor);
    }
  }
  return TdamModel(std::move(transitions), std::move(densities));
}

UpdateResult IncrementalUpdate(const TdamModel& model,
                               const SufficientStats& stats,
                               const AppearanceWindow& window,
                               const LearningOptions& options) {
  if (window.empty()) throw InputError("incremental_update: empty window");
  const Posteriors post = ForwardBackward(model, window);
  const WindowStats ws = ComputeWindowStatistics(post, window);
  SufficientStats next = Accumulate(stats, ws, options.eta);
  TdamModel updated = Maximization(next, model, options);
  return {std::move(updated), std::move(next)};
}

}  // namespace tdam::hmm
