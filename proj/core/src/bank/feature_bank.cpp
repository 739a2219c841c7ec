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

#include "tdam/bank/feature_bank.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace tdam::bank {

namespace {

void CheckUniform(std::span<const LowLevelFeature> samples, const char* what) {
  const Eigen::Index dim = samples.front().size();
  for (const auto& x : samples) {
    RequireDim(x.size(), dim, what);
    if (!x.allFinite()) {
      throw InputError(std::string(what) + ": non-finite feature value");
    }
  }
}

Matrix SampleCovariance(std::span<const LowLevelFeature> samples,
                        const Vector& mean) {
  Matrix centered(static_cast<Eigen::Index>(samples.size()), mean.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    centered.row(static_cast<Eigen::Index>(i)) = (samples[i] - mean).transpose();
  }
  return centered.transpose() * centered /
         static_cast<double>(samples.size() - 1);
}

Vector SampleMean(std::span<const LowLevelFeature> samples) {
  Vector mean = Vector::Zero(samples.front().size());
  for (const auto& x : samples) mean += x;
  return mean / static_cast<double>(samples.size());
}

}  // namespace

WhiteningStats::WhiteningStats(Vector mean, Matrix covariance,
                               double shrinkage)
    : mean_(std::move(mean)),
      covariance_(std::move(covariance)),
      shrinkage_(shrinkage) {
  RequireDim(covariance_.rows(), mean_.size(), "whitening covariance rows");
  RequireDim(covariance_.cols(), mean_.size(), "whitening covariance cols");
  if (shrinkage_ < 0.0 || !std::isfinite(shrinkage_)) {
    throw InputError("whitening: shrinkage must be finite and >= 0");
  }
  if (!mean_.allFinite() || !covariance_.allFinite()) {
    throw InputError("whitening: non-finite statistics");
  }
  const double asym = (covariance_ - covariance_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * std::max(1.0, covariance_.cwiseAbs().maxCoeff())) {
    throw InputError("whitening: covariance is not symmetric");
  }
  covariance_ = 0.5 * (covariance_ + covariance_.transpose());
  llt_.compute(covariance_);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance_);
  if (llt_.info() != Eigen::Success || eig.info() != Eigen::Success ||
      eig.eigenvalues().minCoeff() <= 0.0) {
    throw InputError(
        "whitening: covariance is not positive definite; increase shrinkage");
  }
  inv_sqrt_ = eig.eigenvectors() *
              eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
              eig.eigenvectors().transpose();
}

Vector WhiteningStats::Solve(const Vector& v) const {
  RequireDim(v.size(), dim(), "whitening solve");
  return llt_.solve(v);
}

Vector WhiteningStats::InverseSqrtApply(const Vector& v) const {
  RequireDim(v.size(), dim(), "whitening");
  return inv_sqrt_ * v;
}

void LinearDetector::set_entropy_score(double h) {
  if (!(h >= 0.0) || !std::isfinite(h)) {
    throw InputError("detector entropy score must be finite and >= 0");
  }
  entropy_score_ = h;
}

DetectorBank::DetectorBank(WhiteningStats whitening,
                           std::vector<LinearDetector> detectors,
                           double cosine_threshold)
    : whitening_(std::move(whitening)),
      detectors_(std::move(detectors)),
      cosine_threshold_(cosine_threshold) {
  if (!(cosine_threshold_ > 0.0 && cosine_threshold_ <= 1.0)) {
    throw InputError("bank: cosine threshold must lie in (0, 1]");
  }
  for (std::size_t k = 0; k < detectors_.size(); ++k) {
    const auto& det = detectors_[k];
    RequireDim(det.weights().size(), whitening_.dim(), "bank detector");
    if (!det.weights().allFinite()) {
      throw InputError("bank: non-finite detector weights");
    }
    if (k > 0 && det.scored() && detectors_[k - 1].scored() &&
        *det.entropy_score() < *detectors_[k - 1].entropy_score()) {
      throw InputError("bank: detectors must be ordered by ascending entropy");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (CosineSimilarity(det.weights(), detectors_[j].weights()) >
          cosine_threshold_ + 1e-12) {
        throw InputError("bank: detectors " + std::to_string(j) + " and " +
                         std::to_string(k) + " exceed the cosine threshold");
      }
    }
  }
}

InsufficientDetectors::InsufficientDetectors(std::size_t achieved,
                                             std::size_t requested)
    : InputError("only " + std::to_string(achieved) +
                 " detectors survived redundancy pruning, " +
                 std::to_string(requested) + " requested"),
      achieved_(achieved),
      requested_(requested) {}

double DefaultShrinkage(std::span<const LowLevelFeature> samples) {
  if (samples.size() < 2) throw InputError("insufficient samples");
  CheckUniform(samples, "shrinkage");
  const Vector mean = SampleMean(samples);
  double trace = 0.0;
  for (const auto& x : samples) trace += (x - mean).squaredNorm();
  trace /= static_cast<double>(samples.size() - 1);
  return 1e-3 * trace / static_cast<double>(mean.size());
}

WhiteningStats ComputeWhitening(std::span<const LowLevelFeature> samples,
                                double shrinkage) {
  if (samples.size() < 2) throw InputError("insufficient samples");
  CheckUniform(samples, "compute_whitening");
  Vector mean = SampleMean(samples);
  Matrix cov = SampleCovariance(samples, mean);
  cov.diagonal().array() += shrinkage;
  return WhiteningStats(std::move(mean), std::move(cov), shrinkage);
}

LowLevelFeature Whiten(const WhiteningStats& stats, const LowLevelFeature& x) {
  RequireDim(x.size(), stats.dim(), "whiten");
  return stats.InverseSqrtApply(x - stats.mean());
}

LinearDetector TrainCandidateDetector(std::span<const LowLevelFeature> cluster,
                                      const WhiteningStats& stats,
                                      int source_cluster_id) {
  if (cluster.empty()) throw InputError("train_candidate_detector: empty cluster");
  CheckUniform(cluster, "train_candidate_detector");
  RequireDim(cluster.front().size(), stats.dim(), "train_candidate_detector");
  const Vector centroid = SampleMean(cluster);
  return LinearDetector(stats.Solve(centroid - stats.mean()),
                        source_cluster_id);
}

Vector OccurrenceProbabilities(const LinearDetector& detector,
                               std::span<const LowLevelFeature> trajectory) {
  if (trajectory.empty()) {
    throw InputError("occurrence_probabilities: empty trajectory");
  }
  const auto n = static_cast<Eigen::Index>(trajectory.size());
  Vector scores(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    RequireDim(trajectory[i].size(), detector.weights().size(),
               "occurrence_probabilities");
    scores[i] = std::max(0.0, detector.weights().dot(trajectory[i]));
  }
  const double total = scores.sum();
  if (!(total > 0.0)) return Vector::Constant(n, 1.0 / static_cast<double>(n));
  return scores / total;
}

double Entropy(const Vector& probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log(p);
  }
  // Rounding can push a uniform vector a hair past ln n.
  const double cap = std::log(static_cast<double>(std::max<Eigen::Index>(1, probabilities.size())));
  return std::clamp(h, 0.0, cap);
}

double MeaningfulnessEntropy(const LinearDetector& detector,
                             std::span<const FeatureSequence> trajectories) {
  if (trajectories.empty()) {
    throw InputError("meaningfulness_entropy: no validation trajectories");
  }
  double total = 0.0;
  for (const auto& traj : trajectories) {
    total += Entropy(OccurrenceProbabilities(detector, traj));
  }
  return total / static_cast<double>(trajectories.size());
}

double CosineSimilarity(const Vector& a, const Vector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

DetectorBank SelectDetectors(std::vector<LinearDetector> candidates,
                             std::span<const FeatureSequence> validation,
                             std::size_t d, double cosine_threshold,
                             const WhiteningStats& whitening) {
  if (d == 0) throw InputError("select_detectors: d must be positive");
  for (auto& c : candidates) {
    c.set_entropy_score(MeaningfulnessEntropy(c, validation));
  }
  // Ties on the score fall back to the weights so the result does not depend
  // on input order.
  std::sort(candidates.begin(), candidates.end(),
            [](const LinearDetector& a, const LinearDetector& b) {
              if (*a.entropy_score() != *b.entropy_score()) {
                return *a.entropy_score() < *b.entropy_score();
              }
              return std::lexicographical_compare(
                  a.weights().begin(), a.weights().end(), b.weights().begin(),
                  b.weights().end());
            });

  std::vector<LinearDetector> kept;
  for (auto& c : candidates) {
    if (kept.size() == d) break;
    const bool redundant =
        std::any_of(kept.begin(), kept.end(), [&](const LinearDetector& k) {
          return CosineSimilarity(c.weights(), k.weights()) > cosine_threshold;
        });
    if (!redundant) kept.push_back(std::move(c));
  }
  if (kept.size() < d) throw InsufficientDetectors(kept.size(), d);
  return DetectorBank(whitening, std::move(kept), cosine_threshold);
}

MidLevelFeature Project(const DetectorBank& bank, const LowLevelFeature& x) {
  RequireDim(x.size(), bank.input_dim(), "project");
  MidLevelFeature out(static_cast<Eigen::Index>(bank.size()));
  for (std::size_t k = 0; k < bank.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = bank.detectors()[k].weights().dot(x);
  }
  return out;
}

DetectorBank TrainBank(std::span<const LowLevelFeature> training,
                       std::span<const FeatureSequence> validation,
                       const BankTrainingOptions& options) {
  if (training.size() < 2) throw InputError("insufficient samples");
  const double shrinkage =
      options.shrinkage.value_or(DefaultShrinkage(training));
  WhiteningStats whitening = ComputeWhitening(training, shrinkage);

  std::vector<LowLevelFeature> pool(training.begin(), training.end());
  if (pool.size() > options.max_cluster_samples) {
    std::mt19937_64 rng(options.seed);
    std::vector<std::size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(options.max_cluster_samples);
    std::sort(idx.begin(), idx.end());
    std::vector<LowLevelFeature> sub;
    sub.reserve(idx.size());
    for (auto i : idx) sub.push_back(pool[i]);
    pool = std::move(sub);
  }

  const auto parts = ClusterAppearances(pool, whitening, options.clustering);
  std::vector<LinearDetector> candidates;
  candidates.reserve(parts.size());
  for (std::size_t c = 0; c < parts.size(); ++c) {
    std::vector<LowLevelFeature> members;
    members.reserve(parts[c].size());
    for (auto i : parts[c]) members.push_back(pool[i]);
    candidates.push_back(
        TrainCandidateDetector(members, whitening, static_cast<int>(c)));
  }
  return SelectDetectors(std::move(candidates), validation, options.d,
                         options.cosine_threshold, whitening);
}

}  // namespace tdam::bank
