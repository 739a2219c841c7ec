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

#ifndef TDAM_COMMON_HPP_
#define TDAM_COMMON_HPP_

#include <Eigen/Core>

#include <limits>
#include <stdexcept>
#include <string>

namespace tdam {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vector2 = Eigen::Vector2d;
using Matrix2 = Eigen::Matrix2d;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Raised for malformed input data or violated call contracts (dimension
// mismatch, out-of-range parameters). The CLI maps it to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// log(sum(exp(v))) without overflow. Returns -inf for an empty or all -inf
// input.
double LogSumExp(const Eigen::Ref<const Vector>& v);

bool AllFinite(const Eigen::Ref<const Matrix>& m);

void RequireDim(Eigen::Index actual, Eigen::Index expected,
                const std::string& what);

}  // namespace tdam

#endif  // TDAM_COMMON_HPP_
