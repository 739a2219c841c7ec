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

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <deque>

#include "tdam/bank/feature_bank.hpp"

namespace tdam::bank {

namespace {

using Part = std::vector<std::size_t>;

struct Bipartition {
  Part positive;
  Part negative;
  double ncut = kInf;
};

// Shi-Malik two-way cut of the sub-graph spanned by `members`. The Fiedler
// vector is the top eigenvector of D^-1/2 W D^-1/2 after deflating its known
// leading eigenvector D^1/2 1, which keeps the choice well defined when the
// graph is disconnected.
Bipartition SpectralBipartition(const Matrix& affinity, const Part& members) {
  const auto n = static_cast<Eigen::Index>(members.size());
  Matrix w(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      w(i, j) = affinity(static_cast<Eigen::Index>(members[i]),
                         static_cast<Eigen::Index>(members[j]));
    }
  }
  const Vector degree = w.rowwise().sum();
  const Vector inv_sqrt_deg = degree.cwiseSqrt().cwiseInverse();
  Matrix normalized = inv_sqrt_deg.asDiagonal() * w * inv_sqrt_deg.asDiagonal();
  const Vector trivial = degree.cwiseSqrt().normalized();
  normalized -= trivial * trivial.transpose();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(normalized);
  const Vector fiedler =
      inv_sqrt_deg.asDiagonal() * eig.eigenvectors().col(n - 1);

  // Orient the vector so the result does not depend on the solver's sign.
  Eigen::Index pivot = 0;
  fiedler.cwiseAbs().maxCoeff(&pivot);
  const double sign = fiedler[pivot] < 0.0 ? -1.0 : 1.0;

  Bipartition out;
  std::vector<bool> positive(members.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    positive[i] = sign * fiedler[i] >= 0.0;
    (positive[i] ? out.positive : out.negative).push_back(members[i]);
  }
  if (out.positive.empty() || out.negative.empty()) return out;

  double cut = 0.0;
  double assoc_pos = 0.0;
  double assoc_neg = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    (positive[i] ? assoc_pos : assoc_neg) += degree[i];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (positive[i] && !positive[j]) cut += w(i, j);
    }
  }
  out.ncut = cut / assoc_pos + cut / assoc_neg;
  return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> ClusterAppearances(
    std::span<const LowLevelFeature> samples, const WhiteningStats& stats,
    const ClusteringOptions& options) {
  if (samples.empty()) throw InputError("cluster_appearances: empty input");
  if (samples.size() < options.min_cluster_size) {
    throw InputError("cluster_appearances: fewer samples than min_cluster_size");
  }
  if (options.max_clusters == 0) {
    throw InputError("cluster_appearances: max_clusters must be positive");
  }

  const auto n = static_cast<Eigen::Index>(samples.size());
  Matrix unit(stats.dim(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector z = Whiten(stats, samples[static_cast<std::size_t>(i)]);
    const double norm = z.norm();
    unit.col(i) = norm > 0.0 ? Vector(z / norm) : Vector::Zero(z.size());
  }
  // Negative cosines carry no affinity; the diagonal keeps every degree > 0.
  Matrix affinity = (unit.transpose() * unit).cwiseMax(0.0);
  affinity.diagonal().setOnes();

  Part all(samples.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  std::vector<Part> done;
  std::deque<Part> pending{std::move(all)};
  while (!pending.empty()) {
    Part part = std::move(pending.front());
    pending.pop_front();
    const std::size_t total = done.size() + pending.size() + 1;
    if (part.size() < 2 * options.min_cluster_size ||
        total >= options.max_clusters) {
      done.push_back(std::move(part));
      continue;
    }
    Bipartition split = SpectralBipartition(affinity, part);
    if (split.positive.empty() || split.negative.empty() ||
        !(split.ncut < options.max_ncut)) {
      done.push_back(std::move(part));
      continue;
    }
    pending.push_back(std::move(split.positive));
    pending.push_back(std::move(split.negative));
  }

  std::sort(done.begin(), done.end(),
            [](const Part& a, const Part& b) { return a.front() < b.front(); });
  return done;
}

}  // namespace tdam::bank
