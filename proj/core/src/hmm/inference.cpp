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

#include "tdam/hmm/inference.hpp"

#include <cmath>

namespace tdam::hmm {

namespace {

Matrix LogTransitions(const Matrix& a) {
  return a.unaryExpr([](double p) { return p > 0.0 ? std::log(p) : kNegInf; });
}

// log sum_i exp(log_alpha(i) + log_a(i, j)) for every j.
Vector PropagateLog(const Vector& log_alpha, const Matrix& log_a) {
  const Eigen::Index n = log_alpha.size();
  Vector out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out[j] = LogSumExp(log_alpha + log_a.col(j));
  }
  return out;
}

// Normalizes a log vector in place; returns the log normalizer.
double NormalizeLog(Vector& v) {
  const double z = LogSumExp(v);
  v.array() -= z;
  return z;
}

// Row l holds the per-state emission log densities of window entry l.
Matrix EmissionTable(const TdamModel& model, const AppearanceWindow& window) {
  Matrix table(static_cast<Eigen::Index>(window.size()), model.num_states());
  for (std::size_t l = 0; l < window.size(); ++l) {
    table.row(static_cast<Eigen::Index>(l)) =
        model.EmissionLogDensities(window.appearance(l)).transpose();
  }
  return table;
}

}  // namespace

StatePrediction ForwardPredict(const TdamModel& model,
                               const AppearanceWindow& window) {
  StatePrediction out;
  if (window.empty()) {
    out.prob = model.initial();
    out.log_prob = model.initial().array().log();
    return out;
  }
  const Matrix log_a = LogTransitions(model.transitions());
  const Matrix emissions = EmissionTable(model, window);
  Vector log_alpha = model.initial().array().log().matrix() +
                     emissions.row(0).transpose();
  NormalizeLog(log_alpha);
  for (Eigen::Index l = 1; l < emissions.rows(); ++l) {
    log_alpha = PropagateLog(log_alpha, log_a) + emissions.row(l).transpose();
    NormalizeLog(log_alpha);
  }
  out.log_prob = PropagateLog(log_alpha, log_a);
  NormalizeLog(out.log_prob);
  out.prob = out.log_prob.array().exp();
  return out;
}

double PredictiveLogLikelihood(const TdamModel& model,
                               const StatePrediction& prediction,
                               const Observation& o) {
  RequireDim(prediction.log_prob.size(), model.num_states(), "state prediction");
  return LogSumExp(prediction.log_prob + model.EmissionLogDensities(o));
}

double SequenceLogLikelihood(const TdamModel& model,
                             const AppearanceWindow& window,
                             const Observation& o_new) {
  return PredictiveLogLikelihood(model, ForwardPredict(model, window), o_new);
}

Posteriors ForwardBackward(const TdamModel& model,
                           const AppearanceWindow& window) {
  if (window.empty()) throw InputError("forward_backward: empty window");
  const int n = model.num_states();
  const int m = model.num_components();
  const auto len = static_cast<Eigen::Index>(window.size());
  const Matrix log_a = LogTransitions(model.transitions());
  const Matrix emissions = EmissionTable(model, window);

  // Scaled log-alpha/log-beta: each alpha row is normalized and the
  // normalizers c_l are reused to scale beta, so alpha(l) + beta(l) is the
  // log state posterior directly.
  Matrix log_alpha(len, n);
  Vector log_scale(len);
  Vector row = model.initial().array().log().matrix() +
               emissions.row(0).transpose();
  log_scale[0] = NormalizeLog(row);
  log_alpha.row(0) = row.transpose();
  for (Eigen::Index l = 1; l < len; ++l) {
    row = PropagateLog(log_alpha.row(l - 1).transpose(), log_a) +
          emissions.row(l).transpose();
    log_scale[l] = NormalizeLog(row);
    log_alpha.row(l) = row.transpose();
  }

  Matrix log_beta(len, n);
  log_beta.row(len - 1).setZero();
  for (Eigen::Index l = len - 2; l >= 0; --l) {
    const Vector next = emissions.row(l + 1).transpose() +
                        log_beta.row(l + 1).transpose();
    for (int i = 0; i < n; ++i) {
      log_beta(l, i) = LogSumExp(log_a.row(i).transpose() + next) -
                       log_scale[l + 1];
    }
  }

  Posteriors post;
  post.log_likelihood = log_scale.sum();
  post.gamma.reserve(static_cast<std::size_t>(len));
  for (Eigen::Index l = 0; l < len; ++l) {
    Vector log_state = log_alpha.row(l).transpose() + log_beta.row(l).transpose();
    NormalizeLog(log_state);
    Matrix g(n, m);
    const Observation& o = window.appearance(static_cast<std::size_t>(l));
    for (int i = 0; i < n; ++i) {
      Vector comp = model.densities()[i].ComponentLogTerms(o);
      comp.array() -= LogSumExp(comp);
      g.row(i) = (comp.array() + log_state[i]).exp().matrix().transpose();
    }
    post.gamma.push_back(std::move(g));
  }

  post.xi.reserve(static_cast<std::size_t>(len > 0 ? len - 1 : 0));
  for (Eigen::Index l = 0; l + 1 < len; ++l) {
    Matrix log_xi(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        log_xi(i, j) = log_alpha(l, i) + log_a(i, j) + emissions(l + 1, j) +
                       log_beta(l + 1, j);
      }
    }
    const double z = LogSumExp(Eigen::Map<const Vector>(log_xi.data(), n * n));
    post.xi.push_back((log_xi.array() - z).exp().matrix());
  }
  return post;
}

}  // namespace tdam::hmm
