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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "tdam/hmm/learning.hpp"

namespace tdam::hmm {

namespace {

using Points = std::vector<const Observation*>;

// First center drawn with the seeded RNG, each further center is the point
// farthest from all centers chosen so far.
std::vector<Vector> FarthestPointSeeds(const Points& pts, int k,
                                       std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  std::vector<Vector> centers{*pts[pick(rng)]};
  std::vector<double> dist(pts.size(), kInf);
  while (static_cast<int>(centers.size()) < k) {
    std::size_t best = 0;
    for (std::size_t p = 0; p < pts.size(); ++p) {
      dist[p] = std::min(dist[p], (*pts[p] - centers.back()).squaredNorm());
      if (dist[p] > dist[best]) best = p;
    }
    centers.push_back(*pts[best]);
  }
  return centers;
}

std::vector<int> AssignNearest(const Points& pts,
                               const std::vector<Vector>& centers) {
  std::vector<int> label(pts.size());
  for (std::size_t p = 0; p < pts.size(); ++p) {
    double best = kInf;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d2 = (*pts[p] - centers[c]).squaredNorm();
      if (d2 < best) {
        best = d2;
        label[p] = static_cast<int>(c);
      }
    }
  }
  return label;
}

std::vector<int> KMeans(const Points& pts, int k, int max_iter,
                        std::mt19937_64& rng) {
  std::vector<Vector> centers = FarthestPointSeeds(pts, k, rng);
  std::vector<int> label = AssignNearest(pts, centers);
  for (int it = 0; it < max_iter; ++it) {
    std::vector<Vector> sums(centers.size(), Vector::Zero(centers[0].size()));
    std::vector<std::size_t> counts(centers.size(), 0);
    for (std::size_t p = 0; p < pts.size(); ++p) {
      sums[label[p]] += *pts[p];
      ++counts[label[p]];
    }
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (counts[c] > 0) {
        centers[c] = sums[c] / static_cast<double>(counts[c]);
        continue;
      }
      // Re-seed an empty cluster at the point worst served by its center.
      std::size_t worst = 0;
      double worst_d = -1.0;
      for (std::size_t p = 0; p < pts.size(); ++p) {
        const double d2 = (*pts[p] - centers[label[p]]).squaredNorm();
        if (d2 > worst_d) {
          worst_d = d2;
          worst = p;
        }
      }
      centers[c] = *pts[worst];
    }
    std::vector<int> next = AssignNearest(pts, centers);
    if (next == label) break;
    label = std::move(next);
  }
  return label;
}

Vector PointVariance(const Points& pts, double floor) {
  const Eigen::Index d = pts.front()->size();
  Vector mean = Vector::Zero(d);
  for (const auto* p : pts) mean += *p;
  mean /= static_cast<double>(pts.size());
  Vector var = Vector::Zero(d);
  for (const auto* p : pts) var += (*p - mean).array().square().matrix();
  var /= static_cast<double>(pts.size());
  return var.cwiseMax(floor);
}

ObservationDensity FitMixture(const Points& pts, int m,
                              const Vector& fallback_var,
                              const GeneralModelOptions& options,
                              std::mt19937_64& rng) {
  std::vector<GaussianComponent> comps(static_cast<std::size_t>(m));
  const Vector var0 = pts.size() > 1 ? PointVariance(pts, options.variance_floor)
                                     : fallback_var;
  if (static_cast<int>(pts.size()) < m) {
    // Too few points for distinct components: reuse them cyclically.
    for (int k = 0; k < m; ++k) {
      comps[k] = {1.0 / m, *pts[static_cast<std::size_t>(k) % pts.size()], var0};
    }
    return ObservationDensity(std::move(comps));
  }

  const std::vector<Vector> seeds = FarthestPointSeeds(pts, m, rng);
  for (int k = 0; k < m; ++k) comps[k] = {1.0 / m, seeds[k], var0};
  ObservationDensity density(std::move(comps));

  const auto n = static_cast<Eigen::Index>(pts.size());
  Matrix resp(n, m);
  double prev_ll = kNegInf;
  for (int it = 0; it < options.em_iterations; ++it) {
    double ll = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      Vector t = density.ComponentLogTerms(*pts[p]);
      const double z = LogSumExp(t);
      ll += z;
      resp.row(p) = (t.array() - z).exp().matrix().transpose();
    }
    auto& cs = density.mutable_components();
    for (int k = 0; k < m; ++k) {
      const double nk = resp.col(k).sum();
      if (!(nk > kDefaultOccupancyFloor)) continue;
      Vector mean = Vector::Zero(pts.front()->size());
      for (Eigen::Index p = 0; p < n; ++p) mean += resp(p, k) * *pts[p];
      mean /= nk;
      Vector var = Vector::Zero(mean.size());
      for (Eigen::Index p = 0; p < n; ++p) {
        var += resp(p, k) * (*pts[p] - mean).array().square().matrix();
      }
      cs[k].weight = nk / static_cast<double>(n);
      cs[k].mean = std::move(mean);
      cs[k].variances = (var / nk).cwiseMax(options.variance_floor);
    }
    double wsum = 0.0;
    for (const auto& c : cs) wsum += c.weight;
    for (auto& c : cs) c.weight /= wsum;
    if (std::abs(ll - prev_ll) <= 1e-8 * std::max(1.0, std::abs(ll))) break;
    prev_ll = ll;
  }
  return density;
}

}  // namespace

TdamModel InitGeneralModel(std::span<const Observation> training,
                           const GeneralModelOptions& options) {
  const int n = options.num_states;
  const int m = options.num_components;
  if (n < 1 || m < 1) throw InputError("init_general_model: N and M must be >= 1");
  if (training.size() < static_cast<std::size_t>(n) * static_cast<std::size_t>(m)) {
    throw InputError("init_general_model: insufficient samples (" +
                     std::to_string(training.size()) + " < N*M = " +
                     std::to_string(n * m) + ")");
  }
  const Eigen::Index d = training.front().size();
  Points pts;
  pts.reserve(training.size());
  for (const auto& o : training) {
    RequireDim(o.size(), d, "init_general_model");
    if (!o.allFinite()) throw InputError("init_general_model: non-finite sample");
    pts.push_back(&o);
  }

  std::mt19937_64 rng(options.seed);
  const std::vector<int> label = KMeans(pts, n, options.kmeans_iterations, rng);
  const Vector global_var = PointVariance(pts, options.variance_floor);

  std::vector<ObservationDensity> densities;
  densities.reserve(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    Points members;
    for (std::size_t p = 0; p < pts.size(); ++p) {
      if (label[p] == c) members.push_back(pts[p]);
    }
    if (members.empty()) members.push_back(pts[static_cast<std::size_t>(c) % pts.size()]);
    densities.push_back(FitMixture(members, m, global_var, options, rng));
  }
  Matrix uniform = Matrix::Constant(n, n, 1.0 / n);
  return TdamModel(std::move(uniform), std::move(densities));
}

}  // namespace tdam::hmm
