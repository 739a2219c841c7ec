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

// JSON files for detector banks and appearance models. Matrices are stored
// row-major as flat arrays; doubles are written in shortest round-trip form,
// so save -> load is exact and identical objects give identical bytes.

#ifndef TDAM_IO_SERIALIZATION_HPP_
#define TDAM_IO_SERIALIZATION_HPP_

#include <optional>
#include <string>

#include "tdam/bank/feature_bank.hpp"
#include "tdam/hmm/model.hpp"

namespace tdam::io {

std::string BankToJson(const bank::DetectorBank& bank);
// Throws InputError on malformed JSON or an inconsistent bank.
bank::DetectorBank BankFromJson(const std::string& text);

struct ModelFile {
  hmm::TdamModel model;
  std::optional<hmm::SufficientStats> stats;
};

std::string ModelToJson(const hmm::TdamModel& model,
                        const hmm::SufficientStats* stats = nullptr);
ModelFile ModelFromJson(const std::string& text);

void WriteTextFile(const std::string& path, const std::string& text);
bank::DetectorBank LoadBank(const std::string& path);
ModelFile LoadModel(const std::string& path);

}  // namespace tdam::io

#endif  // TDAM_IO_SERIALIZATION_HPP_
