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

// tdam: train a detector bank, track, evaluate, simulate, inspect models.
// Exit codes: 0 success, 1 internal error, 2 input or contract error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sha256.hpp"
#include "tdam/bank/feature_bank.hpp"
#include "tdam/hmm/learning.hpp"
#include "tdam/io/clear_metrics.hpp"
#include "tdam/io/csv.hpp"
#include "tdam/io/mot_format.hpp"
#include "tdam/io/serialization.hpp"
#include "tdam/io/simulate.hpp"
#include "tdam/tracker/tracker.hpp"

#ifndef TDAM_VERSION
#define TDAM_VERSION "unknown"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace tdam;

constexpr int kExitInput = 2;
constexpr int kExitInternal = 1;

// Samples kept for fitting a general model when none is supplied.
constexpr std::size_t kGeneralModelSamples = 5000;

void WriteManifest(const std::string& path, const ordered_json& body) {
  io::WriteTextFile(path, body.dump(2) + "\n");
}

ordered_json FileEntry(const std::string& path) {
  ordered_json j;
  j["path"] = path;
  j["sha256"] = tools::Sha256File(path);
  return j;
}

// --- train-bank -------------------------------------------------------------

struct TrainBankArgs {
  std::string features;
  std::string trajectories;
  std::size_t d = 64;
  double cos_threshold = 0.8;
  unsigned long long seed = 0;
  std::string output;
  std::string general_model;
  int states = 8;
  int components = 3;
  std::size_t min_cluster_size = 10;
  std::size_t max_clusters = 256;
};

int RunTrainBank(const TrainBankArgs& a) {
  const auto started = std::chrono::steady_clock::now();
  const std::vector<Vector> training = io::ReadNumericCsv(a.features);
  const io::GroupedRows grouped = io::ReadGroupedCsv(a.trajectories);

  bank::BankTrainingOptions opt;
  opt.d = a.d;
  opt.cosine_threshold = a.cos_threshold;
  opt.seed = a.seed;
  opt.clustering.min_cluster_size = a.min_cluster_size;
  opt.clustering.max_clusters = a.max_clusters;
  const bank::DetectorBank b = bank::TrainBank(training, grouped.rows, opt);
  io::WriteTextFile(a.output, io::BankToJson(b));
  std::cerr << "bank: " << b.size() << " detectors over " << b.input_dim()
            << "-d features -> " << a.output << "\n";

  ordered_json manifest;
  manifest["tool"] = "tdam train-bank";
  manifest["version"] = TDAM_VERSION;
  manifest["inputs"] = {FileEntry(a.features), FileEntry(a.trajectories)};
  manifest["d"] = a.d;
  manifest["cosine_threshold"] = a.cos_threshold;
  manifest["seed"] = a.seed;
  manifest["bank"] = FileEntry(a.output);

  if (!a.general_model.empty()) {
    std::vector<Vector> mid;
    mid.reserve(training.size());
    for (const auto& x : training) mid.push_back(bank::Project(b, x));
    hmm::GeneralModelOptions gm;
    gm.num_states = a.states;
    gm.num_components = a.components;
    gm.seed = a.seed;
    const hmm::TdamModel model = hmm::InitGeneralModel(mid, gm);
    io::WriteTextFile(a.general_model, io::ModelToJson(model));
    manifest["general_model"] = FileEntry(a.general_model);
  }
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  WriteManifest(a.output + ".manifest.json", manifest);
  return 0;
}

// --- track ------------------------------------------------------------------

struct TrackArgs {
  std::string detections;
  std::string features;
  std::string bank;
  std::string config;
  std::string mode;
  std::string model;
  std::string output;
  std::string dump_affinities;
  std::map<std::string, std::string> overrides;
};

// Frame-by-frame view of the input with features already in tracker space.
struct TrackInput {
  std::optional<bank::DetectorBank> bank;

  Vector ToMid(const Vector& raw) const {
    return bank ? bank::Project(*bank, raw) : raw;
  }
};

// Streams the feature file once, keeping a seeded reservoir sample.
std::vector<Vector> ReservoirSample(const std::string& dets, const std::string& feats,
                                    const TrackInput& in, std::uint64_t seed) {
  io::FrameReader reader(dets, feats);
  std::mt19937_64 rng(seed);
  std::vector<Vector> sample;
  std::size_t seen = 0;
  while (auto f = reader.Next()) {
    for (const auto& raw : f->features) {
      ++seen;
      if (sample.size() < kGeneralModelSamples) {
        sample.push_back(in.ToMid(raw));
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, seen - 1);
        const std::size_t k = pick(rng);
        if (k < kGeneralModelSamples) sample[k] = in.ToMid(raw);
      }
    }
  }
  return sample;
}

int RunTrack(const TrackArgs& a) {
  const auto started = std::chrono::steady_clock::now();
  tracker::TrackerConfig cfg;
  if (!a.config.empty()) cfg = tracker::TrackerConfig::Load(a.config);
  const bool d_pinned = a.overrides.count("d") > 0 || cfg.d != tracker::TrackerConfig{}.d;
  for (const auto& [k, v] : a.overrides) cfg.Set(k, v);
  if (!a.mode.empty()) cfg.appearance_mode = assoc::ParseAppearanceMode(a.mode);
  cfg.Validate();

  TrackInput in;
  if (!a.bank.empty()) in.bank = io::LoadBank(a.bank);

  ordered_json manifest;
  manifest["tool"] = "tdam track";
  manifest["version"] = TDAM_VERSION;
  {
    ordered_json c;
    for (const auto& key : tracker::TrackerConfig::Keys()) c[key] = cfg.Get(key);
    manifest["config"] = std::move(c);
  }
  manifest["inputs"] = {FileEntry(a.detections), FileEntry(a.features)};
  manifest["bank"] = a.bank.empty() ? ordered_json(nullptr) : FileEntry(a.bank);

  hmm::TdamModel general;
  if (!a.model.empty()) {
    general = io::LoadModel(a.model).model;
    manifest["general_model"] = FileEntry(a.model);
  } else {
    const auto sample = ReservoirSample(a.detections, a.features, in, cfg.seed);
    if (sample.empty()) {
      // Nothing to track; any well-formed model will do.
      Matrix t = Matrix::Constant(cfg.N, cfg.N, 1.0 / cfg.N);
      std::vector<hmm::ObservationDensity> dens;
      for (int i = 0; i < cfg.N; ++i) {
        std::vector<hmm::GaussianComponent> cs;
        for (int k = 0; k < cfg.M; ++k) {
          cs.push_back({1.0 / cfg.M, Vector::Zero(cfg.d), Vector::Ones(cfg.d)});
        }
        dens.emplace_back(std::move(cs));
      }
      general = hmm::TdamModel(std::move(t), std::move(dens));
    } else {
      hmm::GeneralModelOptions gm;
      gm.num_states = cfg.N;
      gm.num_components = cfg.M;
      gm.seed = cfg.seed;
      gm.variance_floor = cfg.variance_floor;
      general = hmm::InitGeneralModel(sample, gm);
    }
    manifest["general_model"] = "fitted from input features";
  }

  // The appearance dimension follows the data unless it was pinned explicitly.
  if (!d_pinned) cfg.d = general.dim();
  if (cfg.d != general.dim()) {
    throw InputError("d = " + std::to_string(cfg.d) + " but the appearance model has d = " +
                     std::to_string(general.dim()));
  }
  manifest["config"]["d"] = cfg.Get("d");

  tracker::Tracker trk(cfg, std::move(general));
  std::ofstream dump;
  if (!a.dump_affinities.empty()) {
    dump.open(a.dump_affinities, std::ios::binary);
    if (!dump) throw std::runtime_error("cannot write '" + a.dump_affinities + "'");
    dump << "frame,track_id,det_index,log_rho_a,log_rho_m,log_rho_s,cost,matched\n";
    trk.set_debug_sink(&dump);
  }

  io::ResultWriter writer(a.output);
  io::FrameReader reader(a.detections, a.features);
  std::optional<long> prev;
  long frames = 0;
  while (auto f = reader.Next()) {
    // Frames absent from the file are stepped with no detections so that
    // miss counts and predictions advance.
    if (prev) {
      for (long g = *prev + 1; g < f->frame; ++g) {
        writer.Write(trk.Step(g, {}));
        ++frames;
      }
    }
    std::vector<assoc::DetectionObs> dets;
    dets.reserve(f->records.size());
    for (std::size_t i = 0; i < f->records.size(); ++i) {
      dets.push_back(io::ToObservation(f->records[i], in.ToMid(f->features[i])));
    }
    writer.Write(trk.Step(f->frame, dets));
    ++frames;
    prev = f->frame;
  }
  writer.Close();

  manifest["seed"] = cfg.seed;
  manifest["frames"] = frames;
  manifest["results"] = FileEntry(a.output);
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  WriteManifest(a.output + ".manifest.json", manifest);
  return 0;
}

// --- evaluate ---------------------------------------------------------------

int RunEvaluate(const std::string& gt, const std::string& results, double iou,
                const std::string& json_out, bool json_stdout) {
  if (!(iou > 0.0 && iou <= 1.0)) throw InputError("--iou must lie in (0, 1]");
  const auto report = io::Combine({io::EvaluateSequence(
      io::ParseDetections(gt), io::ParseDetections(results), iou,
      fs::path(results).stem().string())});
  if (json_stdout) {
    std::cout << io::FormatJson(report);
  } else {
    std::cout << io::FormatTable(report);
  }
  if (!json_out.empty()) io::WriteTextFile(json_out, io::FormatJson(report));
  return 0;
}

// --- simulate ---------------------------------------------------------------

int RunSimulate(const std::string& scenario, const std::string& out_dir) {
  const auto options = io::ScenarioOptions::Load(scenario);
  const auto sim = io::Simulate(io::BuildScenario(options));
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  io::WriteDetections((dir / "gt.csv").string(), sim.ground_truth);
  io::WriteDetections((dir / "det.csv").string(), sim.detections);
  {
    std::ofstream f((dir / "features.csv").string(), std::ios::binary);
    if (!f) throw std::runtime_error("cannot write features.csv");
    for (const auto& v : sim.features) io::WriteCsvRow(f, v);
  }
  {
    std::ofstream f((dir / "identities.csv").string(), std::ios::binary);
    if (!f) throw std::runtime_error("cannot write identities.csv");
    for (int id : sim.identities) f << id << '\n';
  }
  std::cerr << "simulate: " << sim.ground_truth.size() << " gt boxes, "
            << sim.detections.size() << " detections -> " << out_dir << "\n";
  return 0;
}

// --- inspect-model ----------------------------------------------------------

int RunInspect(const std::string& path) {
  const auto file = io::LoadModel(path);
  const auto& m = file.model;
  std::printf("states N=%d  components M=%d  dim d=%d\n", m.num_states(),
              m.num_components(), m.dim());
  std::printf("transitions (row sum in brackets):\n");
  for (int i = 0; i < m.num_states(); ++i) {
    std::printf("  ");
    for (int j = 0; j < m.num_states(); ++j) std::printf("%.6f ", m.transitions()(i, j));
    std::printf("[%.6f]\n", m.transitions().row(i).sum());
  }
  std::printf("mixture weights:\n");
  for (int i = 0; i < m.num_states(); ++i) {
    std::printf("  state %d:", i);
    for (const auto& c : m.densities()[static_cast<std::size_t>(i)].components()) {
      std::printf(" %.6f", c.weight);
    }
    std::printf("\n");
  }
  if (file.stats) std::printf("statistics: %ld updates\n", file.stats->update_count);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TDAM online multi-person tracker"};
  app.set_version_flag("--version", TDAM_VERSION);
  app.require_subcommand(1);

  TrainBankArgs tb;
  auto* train = app.add_subcommand("train-bank", "Train a mid-level detector bank");
  train->add_option("features", tb.features, "Training low-level features CSV")
      ->required();
  train->add_option("trajectories", tb.trajectories,
                    "Validation trajectories CSV (id, features...)")
      ->required();
  train->add_option("--d", tb.d, "Number of detectors to keep")->capture_default_str();
  train->add_option("--cos-threshold", tb.cos_threshold,
                    "Maximum cosine similarity between kept detectors")
      ->capture_default_str();
  train->add_option("--seed", tb.seed, "Subsampling seed")->capture_default_str();
  train->add_option("--min-cluster-size", tb.min_cluster_size,
                    "Smallest cluster that trains a candidate")
      ->capture_default_str();
  train->add_option("--max-clusters", tb.max_clusters, "Cluster count cap")
      ->capture_default_str();
  train->add_option("--general-model", tb.general_model,
                    "Also fit a general appearance model and write it here");
  train->add_option("--states", tb.states, "General model states")->capture_default_str();
  train->add_option("--components", tb.components, "General model mixture size")
      ->capture_default_str();
  train->add_option("-o,--output", tb.output, "Bank JSON")->required();

  TrackArgs tr;
  auto* track = app.add_subcommand("track", "Track detections");
  track->add_option("detections", tr.detections, "MOTChallenge detection CSV")->required();
  track->add_option("features", tr.features, "Row-aligned feature CSV")->required();
  track->add_option("--bank", tr.bank, "Detector bank projecting raw features");
  track->add_option("--config", tr.config, "key = value tracker config");
  track->add_option("--mode", tr.mode, "tdam | spatial_only | feature_distance");
  track->add_option("--model", tr.model,
                    "General appearance model (fitted from the input when absent)");
  track->add_option("--dump-affinities", tr.dump_affinities,
                    "Per-pair affinity CSV for debugging");
  track->add_option("-o,--output", tr.output, "Results CSV")->required();
  for (const auto& key : tracker::TrackerConfig::Keys()) {
    track->add_option_function<std::string>(
        "--" + key, [&tr, key](const std::string& v) { tr.overrides[key] = v; },
        "Override config key '" + key + "'");
  }

  std::string gt, results, json_out;
  double iou = io::kDefaultIouThreshold;
  bool json_stdout = false;
  auto* eval = app.add_subcommand("evaluate", "CLEAR-MOT metrics");
  eval->add_option("gt", gt, "Ground-truth CSV")->required();
  eval->add_option("results", results, "Tracker results CSV")->required();
  eval->add_option("--iou", iou, "IoU match threshold")->capture_default_str();
  eval->add_option("--json-out", json_out, "Also write JSON metrics here");
  eval->add_flag("--json", json_stdout, "Print JSON instead of the table");

  std::string scenario, out_dir;
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic scene");
  sim->add_option("scenario", scenario, "scenario.cfg (key = value)")->required();
  sim->add_option("-o,--output", out_dir, "Output directory")->required();

  std::string model_path;
  auto* inspect = app.add_subcommand("inspect-model", "Summarize a model JSON");
  inspect->add_option("model", model_path, "Model JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*train) return RunTrainBank(tb);
    if (*track) return RunTrack(tr);
    if (*eval) return RunEvaluate(gt, results, iou, json_out, json_stdout);
    if (*sim) return RunSimulate(scenario, out_dir);
    if (*inspect) return RunInspect(model_path);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
