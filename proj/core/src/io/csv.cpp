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

#include "tdam/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace tdam::io {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> Split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(Trim(line.substr(start)));
      return out;
    }
    out.push_back(Trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

namespace {

template <typename T>
T ParseNumber(std::string_view s, std::string_view what) {
  s = Trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError(std::string(what) + ": cannot parse '" + std::string(s) +
                     "' as a number");
  }
  return value;
}

}  // namespace

double ParseDouble(std::string_view s, std::string_view what) {
  const double v = ParseNumber<double>(s, what);
  if (!std::isfinite(v)) {
    throw InputError(std::string(what) + ": non-finite value");
  }
  return v;
}

long ParseLong(std::string_view s, std::string_view what) {
  return ParseNumber<long>(s, what);
}

std::uint64_t ParseUnsigned(std::string_view s, std::string_view what) {
  return ParseNumber<std::uint64_t>(s, what);
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void WriteCsvRow(std::ostream& out, const Vector& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (i > 0) out << ',';
    out << FormatDouble(values[i]);
  }
  out << '\n';
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Vector> ReadNumericCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::vector<Vector> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = Split(line);
    const std::string where = path + ":" + std::to_string(line_no);
    if (!rows.empty() && static_cast<Eigen::Index>(fields.size()) != rows.front().size()) {
      throw InputError(where + ": expected " + std::to_string(rows.front().size()) +
                       " columns, found " + std::to_string(fields.size()));
    }
    Vector row(static_cast<Eigen::Index>(fields.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) {
      row[static_cast<Eigen::Index>(i)] = ParseDouble(fields[i], where);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

GroupedRows ReadGroupedCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  GroupedRows out;
  std::map<long, std::size_t> index;
  std::string line;
  long line_no = 0;
  Eigen::Index width = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = Split(line);
    const std::string where = path + ":" + std::to_string(line_no);
    if (fields.size() < 2) throw InputError(where + ": expected id plus features");
    const auto w = static_cast<Eigen::Index>(fields.size() - 1);
    if (width >= 0 && w != width) {
      throw InputError(where + ": inconsistent feature width");
    }
    width = w;
    const long id = ParseLong(fields[0], where);
    Vector row(w);
    for (Eigen::Index i = 0; i < w; ++i) {
      row[i] = ParseDouble(fields[static_cast<std::size_t>(i) + 1], where);
    }
    auto [it, inserted] = index.emplace(id, out.ids.size());
    if (inserted) {
      out.ids.push_back(id);
      out.rows.emplace_back();
    }
    out.rows[it->second].push_back(std::move(row));
  }
  return out;
}

void ParseKeyValueText(
    std::string_view text, std::string_view what,
    const std::function<void(std::string_view, std::string_view)>& set) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(
        start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (!line.empty()) {
      const std::string prefix =
          std::string(what) + " line " + std::to_string(line_no) + ": ";
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw InputError(prefix + "expected key=value");
      }
      try {
        set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
      } catch (const InputError& e) {
        throw InputError(prefix + e.what());
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
}

}  // namespace tdam::io
