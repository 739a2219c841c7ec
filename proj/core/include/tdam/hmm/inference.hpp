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

#ifndef TDAM_HMM_INFERENCE_HPP_
#define TDAM_HMM_INFERENCE_HPP_

#include <vector>

#include "tdam/hmm/model.hpp"

namespace tdam::hmm {

/// Next-state distribution phi(j) = P(s_{t+1} = j | W_t, theta), kept in both
/// linear and log form. It does not depend on the observation being scored, so
/// one prediction serves every candidate detection of a frame.
struct StatePrediction {
  Vector prob;
  Vector log_prob;
};

/// Normalized forward recursion over the window followed by one transition
/// step. An empty window yields the initial (uniform) distribution.
StatePrediction ForwardPredict(const TdamModel& model,
                               const AppearanceWindow& window);

/// log sum_j phi(j) f_j(o)
double PredictiveLogLikelihood(const TdamModel& model,
                               const StatePrediction& prediction,
                               const Observation& o);

/// log P(o_new | W, theta); equivalent to ForwardPredict followed by
/// PredictiveLogLikelihood.
double SequenceLogLikelihood(const TdamModel& model,
                             const AppearanceWindow& window,
                             const Observation& o_new);

struct Posteriors {
  std::vector<Matrix> xi;     // L-1 matrices, N x N
  std::vector<Matrix> gamma;  // L matrices, N x M
  double log_likelihood = 0.0;  // log P(o_1..o_L | theta)
};

/// Log-domain forward-backward on the window. Throws on an empty window.
Posteriors ForwardBackward(const TdamModel& model,
                           const AppearanceWindow& window);

}  // namespace tdam::hmm

#endif  // TDAM_HMM_INFERENCE_HPP_
