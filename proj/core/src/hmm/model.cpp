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

#include "tdam/hmm/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace tdam::hmm {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;  // log(2 pi)
}  // namespace

double GaussianComponent::LogDensity(const Observation& o) const {
  RequireDim(o.size(), mean.size(), "gaussian density");
  const auto diff = (o - mean).array();
  const double mahalanobis = (diff.square() / variances.array()).sum();
  const double log_det = variances.array().log().sum();
  return -0.5 * (static_cast<double>(o.size()) * kLog2Pi + log_det +
                 mahalanobis);
}

ObservationDensity::ObservationDensity(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {}

Vector ObservationDensity::ComponentLogTerms(const Observation& o) const {
  Vector terms(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const auto& c = components_[k];
    terms[static_cast<Eigen::Index>(k)] =
        c.weight > 0.0 ? std::log(c.weight) + c.LogDensity(o) : kNegInf;
  }
  return terms;
}

double ObservationDensity::LogDensity(const Observation& o) const {
  return LogSumExp(ComponentLogTerms(o));
}

double ObservationDensity::Density(const Observation& o) const {
  return std::exp(LogDensity(o));
}

TdamModel::TdamModel(Matrix transitions,
                     std::vector<ObservationDensity> densities)
    : transitions_(std::move(transitions)), densities_(std::move(densities)) {
  if (densities_.empty()) throw InputError("model: at least one state required");
  const auto n = static_cast<Eigen::Index>(densities_.size());
  initial_ = Vector::Constant(n, 1.0 / static_cast<double>(n));
  num_components_ = static_cast<int>(densities_.front().size());
  if (num_components_ == 0 || densities_.front().components().front().mean.size() == 0) {
    throw InputError("model: empty mixture or zero-dimensional features");
  }
  dim_ = static_cast<int>(densities_.front().components().front().mean.size());
  Validate();
}

void TdamModel::set_transitions(Matrix transitions) {
  RequireDim(transitions.rows(), num_states(), "transition rows");
  RequireDim(transitions.cols(), num_states(), "transition cols");
  transitions_ = std::move(transitions);
}

Vector TdamModel::EmissionLogDensities(const Observation& o) const {
  RequireDim(o.size(), dim_, "emission");
  Vector out(num_states());
  for (int i = 0; i < num_states(); ++i) out[i] = densities_[i].LogDensity(o);
  return out;
}

void TdamModel::Validate(double tol) const {
  const int n = num_states();
  RequireDim(transitions_.rows(), n, "transition rows");
  RequireDim(transitions_.cols(), n, "transition cols");
  if (!transitions_.allFinite() || transitions_.minCoeff() < 0.0) {
    throw InputError("model: transitions must be finite and non-negative");
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(transitions_.row(i).sum() - 1.0) > tol) {
      throw InputError("model: transition row " + std::to_string(i) +
                       " does not sum to 1");
    }
    const auto& comps = densities_[i].components();
    if (static_cast<int>(comps.size()) != num_components_) {
      throw InputError("model: every state needs the same number of components");
    }
    double wsum = 0.0;
    for (const auto& c : comps) {
      RequireDim(c.mean.size(), dim_, "component mean");
      RequireDim(c.variances.size(), dim_, "component variances");
      if (!(c.weight >= 0.0 && c.weight <= 1.0)) {
        throw InputError("model: mixture weight outside [0, 1]");
      }
      if (!c.mean.allFinite() || !c.variances.allFinite() ||
          !(c.variances.minCoeff() > 0.0)) {
        throw InputError("model: component variances must be positive");
      }
      wsum += c.weight;
    }
    if (std::abs(wsum - 1.0) > tol) {
      throw InputError("model: mixture weights of state " + std::to_string(i) +
                       " do not sum to 1");
    }
  }
}

bool TdamModel::operator==(const TdamModel& other) const {
  if (num_states() != other.num_states() ||
      num_components_ != other.num_components_ || dim_ != other.dim_ ||
      transitions_ != other.transitions_) {
    return false;
  }
  for (int i = 0; i < num_states(); ++i) {
    for (int k = 0; k < num_components_; ++k) {
      const auto& a = densities_[i].components()[k];
      const auto& b = other.densities_[i].components()[k];
      if (a.weight != b.weight || a.mean != b.mean ||
          a.variances != b.variances) {
        return false;
      }
    }
  }
  return true;
}

SufficientStats SufficientStats::Zero(int n, int m, int d) {
  SufficientStats s;
  s.trans = Matrix::Zero(n, n);
  s.occ = Matrix::Zero(n, m);
  s.first_moment = Matrix::Zero(n * m, d);
  s.second_moment = Matrix::Zero(n * m, d);
  return s;
}

void SufficientStats::Validate() const {
  const int n = num_states();
  const int m = num_components();
  RequireDim(trans.cols(), n, "stats trans");
  RequireDim(occ.rows(), n, "stats occ");
  RequireDim(first_moment.rows(), n * m, "stats first moment");
  RequireDim(second_moment.rows(), n * m, "stats second moment");
  RequireDim(second_moment.cols(), first_moment.cols(), "stats second moment");
  if (!trans.allFinite() || !occ.allFinite() || !first_moment.allFinite() ||
      !second_moment.allFinite()) {
    throw InputError("stats: non-finite accumulator");
  }
  if ((n > 0 && trans.minCoeff() < 0.0) || (n * m > 0 && occ.minCoeff() < 0.0)) {
    throw InputError("stats: negative expected counts");
  }
}

AppearanceWindow::AppearanceWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw InputError("appearance window: capacity must be >= 1");
}

void AppearanceWindow::Push(Observation appearance, long frame) {
  if (!entries_.empty() && frame <= entries_.back().frame) {
    throw InputError("appearance window: frames must be strictly increasing");
  }
  if (!entries_.empty()) {
    RequireDim(appearance.size(), entries_.front().appearance.size(),
               "appearance window");
  }
  entries_.push_back({std::move(appearance), frame});
  while (entries_.size() > capacity_) entries_.pop_front();
}

AppearanceWindow AppearanceWindow::FromSequence(
    const std::vector<Observation>& seq) {
  AppearanceWindow w(std::max<std::size_t>(seq.size(), 1));
  for (std::size_t i = 0; i < seq.size(); ++i) {
    w.Push(seq[i], static_cast<long>(i));
  }
  return w;
}

}  // namespace tdam::hmm
