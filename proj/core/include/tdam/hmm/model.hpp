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

// Temporal dynamic appearance model: an N-state HMM whose emissions are
// M-component diagonal Gaussian mixtures over d-dimensional mid-level
// features. The initial distribution is fixed to uniform.

#ifndef TDAM_HMM_MODEL_HPP_
#define TDAM_HMM_MODEL_HPP_

#include <cstddef>
#include <deque>
#include <vector>

#include "tdam/common.hpp"

namespace tdam::hmm {

using Observation = Vector;

inline constexpr double kDefaultVarianceFloor = 1e-4;
inline constexpr double kDefaultOccupancyFloor = 1e-6;

struct GaussianComponent {
  double weight = 1.0;
  Vector mean;
  Vector variances;  // diagonal covariance

  // log N(o; mean, diag(variances))
  double LogDensity(const Observation& o) const;
};

class ObservationDensity {
 public:
  ObservationDensity() = default;
  explicit ObservationDensity(std::vector<GaussianComponent> components);

  const std::vector<GaussianComponent>& components() const {
    return components_;
  }
  std::vector<GaussianComponent>& mutable_components() { return components_; }
  std::size_t size() const { return components_.size(); }

  // log sum_k w_k N(o; mu_k, Sigma_k)
  double LogDensity(const Observation& o) const;
  double Density(const Observation& o) const;
  // Per-component log(w_k N(o; mu_k, Sigma_k)).
  Vector ComponentLogTerms(const Observation& o) const;

 private:
  std::vector<GaussianComponent> components_;
};

class TdamModel {
 public:
  TdamModel() = default;
  // Validates shapes, row-stochastic transitions and mixture weights.
  TdamModel(Matrix transitions, std::vector<ObservationDensity> densities);

  int num_states() const { return static_cast<int>(densities_.size()); }
  int num_components() const { return num_components_; }
  int dim() const { return dim_; }

  const Vector& initial() const { return initial_; }
  const Matrix& transitions() const { return transitions_; }
  const std::vector<ObservationDensity>& densities() const {
    return densities_;
  }

  void set_transitions(Matrix transitions);
  std::vector<ObservationDensity>& mutable_densities() { return densities_; }

  // Per-state log f_i(o).
  Vector EmissionLogDensities(const Observation& o) const;

  // Throws InputError when an invariant is violated beyond `tol`.
  void Validate(double tol = 1e-9) const;

  bool operator==(const TdamModel& other) const;

 private:
  Vector initial_;
  Matrix transitions_;
  std::vector<ObservationDensity> densities_;
  int num_components_ = 0;
  int dim_ = 0;
};

// Expected sufficient statistics. Per-(state, component) rows are stored at
// index i * M + k.
struct SufficientStats {
  Matrix trans;          // N x N
  Matrix occ;            // N x M
  Matrix first_moment;   // (N*M) x d
  Matrix second_moment;  // (N*M) x d, diagonal of sum gamma o o^T
  long update_count = 0;

  static SufficientStats Zero(int n, int m, int d);
  int num_states() const { return static_cast<int>(trans.rows()); }
  int num_components() const { return static_cast<int>(occ.cols()); }
  int dim() const { return static_cast<int>(first_moment.cols()); }
  void Validate() const;
};

// The most recent L visible appearances of one trajectory.
class AppearanceWindow {
 public:
  struct Entry {
    Observation appearance;
    long frame = 0;
  };

  explicit AppearanceWindow(std::size_t capacity = 8);

  // Appends an observation, evicting the oldest entry once full. Frames must
  // be strictly increasing.
  void Push(Observation appearance, long frame);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t capacity() const { return capacity_; }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }
  const std::deque<Entry>& entries() const { return entries_; }
  const Observation& appearance(std::size_t i) const {
    return entries_[i].appearance;
  }

  // Unbounded-frame window built from a plain sequence (frames 0..n-1).
  static AppearanceWindow FromSequence(const std::vector<Observation>& seq);

 private:
  std::size_t capacity_;
  std::deque<Entry> entries_;
};

}  // namespace tdam::hmm

#endif  // TDAM_HMM_MODEL_HPP_
