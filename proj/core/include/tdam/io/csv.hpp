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

// Small text helpers shared by the CSV and config readers.

#ifndef TDAM_IO_CSV_HPP_
#define TDAM_IO_CSV_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tdam/common.hpp"

namespace tdam::io {

std::string_view Trim(std::string_view s);

// Splits on `sep` and trims every field.
std::vector<std::string_view> Split(std::string_view line, char sep = ',');

// Full-string numeric parses; throw InputError mentioning `what`.
double ParseDouble(std::string_view s, std::string_view what);
long ParseLong(std::string_view s, std::string_view what);
std::uint64_t ParseUnsigned(std::string_view s, std::string_view what);

// Shortest decimal form that round-trips to the same double.
std::string FormatDouble(double v);

// Writes the values comma-separated followed by '\n'.
void WriteCsvRow(std::ostream& out, const Vector& values);

// Reads every non-blank line of a headerless numeric CSV. All rows must have
// the same width.
std::vector<Vector> ReadNumericCsv(const std::string& path);

// Rows grouped by a leading integer id column, in order of first appearance.
struct GroupedRows {
  std::vector<long> ids;
  std::vector<std::vector<Vector>> rows;
};
GroupedRows ReadGroupedCsv(const std::string& path);

std::string ReadFile(const std::string& path);

// Walks `key = value` lines ('#' starts a comment, blank lines skipped) and
// calls `set` for each. Errors are rethrown as "<what> line N: ...".
void ParseKeyValueText(
    std::string_view text, std::string_view what,
    const std::function<void(std::string_view, std::string_view)>& set);

}  // namespace tdam::io

#endif  // TDAM_IO_CSV_HPP_
