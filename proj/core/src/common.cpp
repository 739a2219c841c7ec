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

#include "tdam/common.hpp"

#include <cmath>

namespace tdam {

double LogSumExp(const Eigen::Ref<const Vector>& v) {
  if (v.size() == 0) return kNegInf;
  const double hi = v.maxCoeff();
  if (!std::isfinite(hi)) return hi;
  return hi + std::log((v.array() - hi).exp().sum());
}

bool AllFinite(const Eigen::Ref<const Matrix>& m) {
  return m.allFinite();
}

void RequireDim(Eigen::Index actual, Eigen::Index expected,
                const std::string& what) {
  if (actual != expected) {
    throw InputError(what + ": dimension mismatch (got " +
                     std::to_string(actual) + ", expected " +
                     std::to_string(expected) + ")");
  }
}

}  // namespace tdam
