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

#include "tdam/io/serialization.hpp"

#include <fstream>

#include "json.hpp"
#include "tdam/io/csv.hpp"

namespace tdam::io {

namespace {

using nlohmann::ordered_json;

ordered_json VecJson(const Vector& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

ordered_json MatJson(const Matrix& m) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) a.push_back(m(r, c));
  }
  return a;
}

Vector JsonVec(const ordered_json& j, Eigen::Index expected, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected an array");
  if (expected >= 0 && static_cast<Eigen::Index>(j.size()) != expected) {
    throw InputError(std::string(what) + ": expected " + std::to_string(expected) +
                     " values, found " + std::to_string(j.size()));
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(std::string(what) + ": non-numeric entry");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Matrix JsonMat(const ordered_json& j, Eigen::Index rows, Eigen::Index cols,
               const char* what) {
  const Vector flat = JsonVec(j, rows * cols, what);
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = flat[r * cols + c];
  }
  return m;
}

int JsonInt(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long>() < 0) {
    throw InputError(std::string("missing or invalid '") + key + "'");
  }
  return j[key].get<int>();
}

ordered_json Parse(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

// JSON type errors surface as InputError.
template <typename F>
auto Guard(F&& f) {
  try {
    return f();
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("malformed file: ") + e.what());
  }
}

}  // namespace

std::string BankToJson(const bank::DetectorBank& b) {
  ordered_json j;
  const auto& w = b.whitening();
  j["d_low"] = w.dim();
  j["d"] = b.size();
  j["cosine_threshold"] = b.cosine_threshold();
  j["shrinkage"] = w.shrinkage();
  j["mean"] = VecJson(w.mean());
  j["covariance"] = MatJson(w.covariance());
  ordered_json dets = ordered_json::array();
  for (const auto& det : b.detectors()) {
    ordered_json e;
    e["source_cluster_id"] = det.source_cluster_id();
    if (det.entropy_score()) e["entropy_score"] = *det.entropy_score();
    else e["entropy_score"] = nullptr;
    e["weights"] = VecJson(det.weights());
    dets.push_back(std::move(e));
  }
  j["detectors"] = std::move(dets);
  return j.dump(1) + "\n";
}

bank::DetectorBank BankFromJson(const std::string& text) {
  const ordered_json j = Parse(text);
  return Guard([&] {
    const int d_low = JsonInt(j, "d_low");
    const int d = JsonInt(j, "d");
    const double shrink = j.at("shrinkage").get<double>();
    bank::WhiteningStats w(JsonVec(j.at("mean"), d_low, "mean"),
                           JsonMat(j.at("covariance"), d_low, d_low, "covariance"),
                           shrink);
    const auto& arr = j.at("detectors");
    if (!arr.is_array() || static_cast<int>(arr.size()) != d) {
      throw InputError("detectors: expected " + std::to_string(d) + " entries");
    }
    std::vector<bank::LinearDetector> dets;
    for (const auto& e : arr) {
      bank::LinearDetector det(JsonVec(e.at("weights"), d_low, "weights"),
                               e.at("source_cluster_id").get<int>());
      if (!e.at("entropy_score").is_null()) {
        det.set_entropy_score(e.at("entropy_score").get<double>());
      }
      dets.push_back(std::move(det));
    }
    return bank::DetectorBank(std::move(w), std::move(dets),
                              j.at("cosine_threshold").get<double>());
  });
}

std::string ModelToJson(const hmm::TdamModel& model,
                        const hmm::SufficientStats* stats) {
  ordered_json j;
  j["N"] = model.num_states();
  j["M"] = model.num_components();
  j["d"] = model.dim();
  j["transitions"] = MatJson(model.transitions());
  ordered_json dens = ordered_json::array();
  for (const auto& f : model.densities()) {
    ordered_json comps = ordered_json::array();
    for (const auto& c : f.components()) {
      ordered_json e;
      e["weight"] = c.weight;
      e["mean"] = VecJson(c.mean);
      e["variances"] = VecJson(c.variances);
      comps.push_back(std::move(e));
    }
    dens.push_back(std::move(comps));
  }
  j["densities"] = std::move(dens);
  if (stats != nullptr) {
    ordered_json s;
    s["update_count"] = stats->update_count;
    s["trans"] = MatJson(stats->trans);
    s["occ"] = MatJson(stats->occ);
    s["first_moment"] = MatJson(stats->first_moment);
    s["second_moment"] = MatJson(stats->second_moment);
    j["stats"] = std::move(s);
  }
  return j.dump(1) + "\n";
}

ModelFile ModelFromJson(const std::string& text) {
  const ordered_json j = Parse(text);
  return Guard([&] {
    const int n = JsonInt(j, "N");
    const int m = JsonInt(j, "M");
    const int d = JsonInt(j, "d");
    if (n < 1 || m < 1 || d < 1) throw InputError("N, M and d must be >= 1");
    Matrix a = JsonMat(j.at("transitions"), n, n, "transitions");
    const auto& dens = j.at("densities");
    if (!dens.is_array() || static_cast<int>(dens.size()) != n) {
      throw InputError("densities: expected " + std::to_string(n) + " states");
    }
    std::vector<hmm::ObservationDensity> fs;
    for (const auto& comps : dens) {
      if (!comps.is_array() || static_cast<int>(comps.size()) != m) {
        throw InputError("densities: expected " + std::to_string(m) +
                         " components per state");
      }
      std::vector<hmm::GaussianComponent> cs;
      for (const auto& e : comps) {
        hmm::GaussianComponent c;
        c.weight = e.at("weight").get<double>();
        c.mean = JsonVec(e.at("mean"), d, "mean");
        c.variances = JsonVec(e.at("variances"), d, "variances");
        cs.push_back(std::move(c));
      }
      fs.emplace_back(std::move(cs));
    }
    ModelFile out;
    out.model = hmm::TdamModel(std::move(a), std::move(fs));
    out.model.Validate(1e-6);
    if (j.contains("stats")) {
      const auto& s = j.at("stats");
      hmm::SufficientStats st = hmm::SufficientStats::Zero(n, m, d);
      st.update_count = s.at("update_count").get<long>();
      st.trans = JsonMat(s.at("trans"), n, n, "trans");
      st.occ = JsonMat(s.at("occ"), n, m, "occ");
      st.first_moment = JsonMat(s.at("first_moment"), n * m, d, "first_moment");
      st.second_moment = JsonMat(s.at("second_moment"), n * m, d, "second_moment");
      st.Validate();
      out.stats = std::move(st);
    }
    return out;
  });
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  out.close();
  if (out.fail()) throw std::runtime_error("write failed for '" + path + "'");
}

bank::DetectorBank LoadBank(const std::string& path) {
  return BankFromJson(ReadFile(path));
}

ModelFile LoadModel(const std::string& path) { return ModelFromJson(ReadFile(path)); }

}  // namespace tdam::io
