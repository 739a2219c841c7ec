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

#ifndef TDAM_TOOLS_SHA256_HPP_
#define TDAM_TOOLS_SHA256_HPP_

#include <string>

namespace tdam::tools {

// Lower-case hex SHA-256 of a file's bytes, read in chunks.
std::string Sha256File(const std::string& path);

}  // namespace tdam::tools

#endif  // TDAM_TOOLS_SHA256_HPP_
