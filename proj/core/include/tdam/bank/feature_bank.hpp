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

// Mid-level semantic feature space.
//
// Low-level appearance descriptors (e.g. HOG vectors) are mapped into a
// d-dimensional space of linear detector responses. Each detector is an
// exemplar-LDA classifier w = (S + lambda I)^-1 (cluster_mean - mu0) trained
// against a universal background model (mu0, S) that is estimated once.
// Candidate clusters come from recursive normalized cuts over whitened
// features; candidates are ranked by the average entropy of their occurrence
// distribution along validation trajectories and pruned for redundancy.

#ifndef TDAM_BANK_FEATURE_BANK_HPP_
#define TDAM_BANK_FEATURE_BANK_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "tdam/common.hpp"

namespace tdam::bank {

using LowLevelFeature = Vector;
using MidLevelFeature = Vector;
// A trajectory of low-level features, in temporal order.
using FeatureSequence = std::vector<LowLevelFeature>;

// Background statistics shared by every detector. `covariance` already
// includes the shrinkage term, i.e. it is S + shrinkage * I.
class WhiteningStats {
 public:
  WhiteningStats() = default;
  // Throws InputError if the covariance is not symmetric positive definite.
  WhiteningStats(Vector mean, Matrix covariance, double shrinkage);

  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return covariance_; }
  double shrinkage() const { return shrinkage_; }
  Eigen::Index dim() const { return mean_.size(); }

  // (S + lambda I)^-1 v
  Vector Solve(const Vector& v) const;
  // (S + lambda I)^-1/2 v, symmetric inverse square root.
  Vector InverseSqrtApply(const Vector& v) const;

 private:
  Vector mean_;
  Matrix covariance_;
  double shrinkage_ = 0.0;
  Eigen::LLT<Matrix> llt_;
  Matrix inv_sqrt_;
};

class LinearDetector {
 public:
  LinearDetector() = default;
  LinearDetector(Vector weights, int source_cluster_id)
      : weights_(std::move(weights)), source_cluster_id_(source_cluster_id) {}

  const Vector& weights() const { return weights_; }
  int source_cluster_id() const { return source_cluster_id_; }

  // Average trajectory entropy; empty until the detector has been scored.
  std::optional<double> entropy_score() const { return entropy_score_; }
  bool scored() const { return entropy_score_.has_value(); }
  void set_entropy_score(double h);

 private:
  Vector weights_;
  int source_cluster_id_ = -1;
  std::optional<double> entropy_score_;
};

// Immutable once built; safe to share across threads.
class DetectorBank {
 public:
  DetectorBank() = default;
  // Validates detector dimensions, ordering and pairwise redundancy.
  DetectorBank(WhiteningStats whitening, std::vector<LinearDetector> detectors,
               double cosine_threshold);

  const WhiteningStats& whitening() const { return whitening_; }
  const std::vector<LinearDetector>& detectors() const { return detectors_; }
  double cosine_threshold() const { return cosine_threshold_; }
  std::size_t size() const { return detectors_.size(); }
  Eigen::Index input_dim() const { return whitening_.dim(); }

 private:
  WhiteningStats whitening_;
  std::vector<LinearDetector> detectors_;
  double cosine_threshold_ = 0.8;
};

// Raised by SelectDetectors when redundancy pruning leaves fewer than the
// requested number of detectors.
class InsufficientDetectors : public InputError {
 public:
  InsufficientDetectors(std::size_t achieved, std::size_t requested);
  std::size_t achieved() const { return achieved_; }
  std::size_t requested() const { return requested_; }

 private:
  std::size_t achieved_;
  std::size_t requested_;
};

// 1e-3 * trace(S) / d_low for the unregularized sample covariance S.
double DefaultShrinkage(std::span<const LowLevelFeature> samples);

WhiteningStats ComputeWhitening(std::span<const LowLevelFeature> samples,
                                double shrinkage);

LowLevelFeature Whiten(const WhiteningStats& stats, const LowLevelFeature& x);

struct ClusteringOptions {
  std::size_t min_cluster_size = 10;
  std::size_t max_clusters = 256;
  // A bipartition is accepted only if its normalized-cut value is below this.
  double max_ncut = 0.5;
};

// Recursive two-way normalized cuts on the cosine affinity between whitened
// features. Returns a partition of [0, samples.size()); parts are ordered by
// their smallest member index.
std::vector<std::vector<std::size_t>> ClusterAppearances(
    std::span<const LowLevelFeature> samples, const WhiteningStats& stats,
    const ClusteringOptions& options = {});

LinearDetector TrainCandidateDetector(
    std::span<const LowLevelFeature> cluster, const WhiteningStats& stats,
    int source_cluster_id = -1);

// P(phi_i) = max(0, w.x_i) / sum_j max(0, w.x_j); uniform when every
// truncated score is zero.
Vector OccurrenceProbabilities(const LinearDetector& detector,
                               std::span<const LowLevelFeature> trajectory);

double Entropy(const Vector& probabilities);

// Mean over trajectories of the occurrence entropy (natural log).
double MeaningfulnessEntropy(const LinearDetector& detector,
                             std::span<const FeatureSequence> trajectories);

double CosineSimilarity(const Vector& a, const Vector& b);

// Scores every candidate on the validation trajectories, then greedily keeps
// the lowest-entropy ones, skipping any whose cosine with an already kept
// detector exceeds `cosine_threshold`. Throws InsufficientDetectors when
// fewer than `d` survive.
DetectorBank SelectDetectors(std::vector<LinearDetector> candidates,
                             std::span<const FeatureSequence> validation,
                             std::size_t d, double cosine_threshold,
                             const WhiteningStats& whitening);

// Raw linear responses w_k . x, k = 1..d.
MidLevelFeature Project(const DetectorBank& bank, const LowLevelFeature& x);

struct BankTrainingOptions {
  std::size_t d = 64;
  double cosine_threshold = 0.8;
  std::optional<double> shrinkage;  // DefaultShrinkage when empty
  ClusteringOptions clustering;
  // Training samples beyond this are subsampled (seeded) before clustering.
  std::size_t max_cluster_samples = 2000;
  unsigned long long seed = 0;
};

// Whole offline pipeline: whitening, clustering, candidate training,
// entropy scoring and redundancy pruning.
DetectorBank TrainBank(std::span<const LowLevelFeature> training,
                       std::span<const FeatureSequence> validation,
                       const BankTrainingOptions& options);

}  // namespace tdam::bank

#endif  // TDAM_BANK_FEATURE_BANK_HPP_
