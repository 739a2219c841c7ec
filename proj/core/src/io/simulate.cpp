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

#include "tdam/io/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tdam/io/csv.hpp"

namespace tdam::io {

namespace {

std::size_t SampleIndex(const Eigen::Ref<const Vector>& probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = u(rng) * probs.sum();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (x < acc) return static_cast<std::size_t>(i);
  }
  return static_cast<std::size_t>(probs.size() - 1);
}

bool Occluded(const TargetSpec& t, long frame) {
  return std::any_of(t.occlusions.begin(), t.occlusions.end(),
                     [&](const auto& r) { return frame >= r.first && frame <= r.second; });
}

// Center of the target at `frame`, or nullopt outside its lifetime.
std::optional<Vector2> PositionAt(const TargetSpec& t, long frame) {
  const auto& w = t.waypoints;
  if (frame < w.front().frame || frame > w.back().frame) return std::nullopt;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (frame <= w[i + 1].frame) {
      const double a = static_cast<double>(frame - w[i].frame) /
                       static_cast<double>(w[i + 1].frame - w[i].frame);
      return Vector2(w[i].x + a * (w[i + 1].x - w[i].x),
                     w[i].y + a * (w[i + 1].y - w[i].y));
    }
  }
  return Vector2(w.back().x, w.back().y);
}

DetectionRecord BoxAt(long frame, long id, const Vector2& c, double h, double w) {
  DetectionRecord r;
  r.frame = frame;
  r.id = id;
  r.bb_left = c.x() - 0.5 * w;
  r.bb_top = c.y() - 0.5 * h;
  r.bb_width = w;
  r.bb_height = h;
  r.confidence = 1.0;
  return r;
}

Vector RandomDirection(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector v(d);
  do {
    for (int i = 0; i < d; ++i) v[i] = n(rng);
  } while (v.norm() < 1e-9);
  return v / v.norm();
}

// Shared mean pool plus one cyclic HMM per target. Each target gets a
// (subset, cyclic order) pair not used by an earlier target when possible.
std::vector<hmm::TdamModel> BuildAppearanceModels(const ScenarioOptions& o,
                                                  std::mt19937_64& rng) {
  std::vector<Vector> pool;
  for (int s = 0; s < o.pool_states; ++s) {
    pool.push_back(o.separation * RandomDirection(o.d, rng));
  }
  // Canonical form of a cycle: rotate so the smallest state comes first.
  auto canonical = [](std::vector<int> cyc) {
    std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
    return cyc;
  };
  std::vector<std::vector<int>> used;
  std::vector<hmm::TdamModel> models;
  const double var = o.appearance_sigma * o.appearance_sigma;
  for (int t = 0; t < o.n_targets; ++t) {
    std::vector<int> cyc;
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::vector<int> all(static_cast<std::size_t>(o.pool_states));
      std::iota(all.begin(), all.end(), 0);
      std::shuffle(all.begin(), all.end(), rng);
      cyc.assign(all.begin(), all.begin() + o.states_per_target);
      if (std::find(used.begin(), used.end(), canonical(cyc)) == used.end()) break;
    }
    used.push_back(canonical(cyc));

    const int k = o.states_per_target;
    Matrix a = Matrix::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      if (k == 1) {
        a(i, i) = 1.0;
        continue;
      }
      a(i, (i + 1) % k) = o.cycle_prob;
      a(i, i) += 1.0 - o.cycle_prob;
    }
    std::vector<hmm::ObservationDensity> dens;
    for (int i = 0; i < k; ++i) {
      hmm::GaussianComponent c;
      c.weight = 1.0;
      c.mean = pool[static_cast<std::size_t>(cyc[static_cast<std::size_t>(i)])];
      c.variances = Vector::Constant(o.d, var);
      dens.emplace_back(std::vector<hmm::GaussianComponent>{c});
    }
    models.emplace_back(std::move(a), std::move(dens));
  }
  return models;
}

}  // namespace

void ScenarioSpec::Validate() const {
  auto rate_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (n_frames < 1) throw InputError("scenario: n_frames must be >= 1");
  if (!(image_width > 0.0 && image_height > 0.0)) {
    throw InputError("scenario: image size must be positive");
  }
  if (!rate_ok(miss_rate) || !rate_ok(false_alarm_rate)) {
    throw InputError("scenario: rates must lie in [0, 1]");
  }
  if (!(position_sigma >= 0.0)) throw InputError("scenario: sigma must be >= 0");
  int dim = -1;
  for (const auto& t : targets) {
    if (t.waypoints.empty()) throw InputError("scenario: target without waypoints");
    for (std::size_t i = 1; i < t.waypoints.size(); ++i) {
      if (t.waypoints[i].frame <= t.waypoints[i - 1].frame) {
        throw InputError("scenario: waypoint frames must increase");
      }
    }
    if (t.waypoints.front().frame < 1) {
      throw InputError("scenario: waypoint frames must be >= 1");
    }
    if (!(t.height > 0.0 && t.width > 0.0)) {
      throw InputError("scenario: box size must be positive");
    }
    if (t.appearance.num_states() == 0) {
      throw InputError("scenario: target without appearance model");
    }
    t.appearance.Validate();
    if (dim >= 0 && t.appearance.dim() != dim) {
      throw InputError("scenario: targets disagree on feature dimension");
    }
    dim = t.appearance.dim();
  }
}

std::vector<hmm::Observation> SampleAppearances(const hmm::TdamModel& model,
                                                long length,
                                                std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<hmm::Observation> out;
  out.reserve(static_cast<std::size_t>(std::max<long>(length, 0)));
  std::size_t state = 0;
  for (long t = 0; t < length; ++t) {
    state = t == 0 ? SampleIndex(model.initial(), rng)
                   : SampleIndex(model.transitions().row(static_cast<Eigen::Index>(state)).transpose(), rng);
    const auto& comps = model.densities()[state].components();
    Vector w(static_cast<Eigen::Index>(comps.size()));
    for (std::size_t k = 0; k < comps.size(); ++k) {
      w[static_cast<Eigen::Index>(k)] = comps[k].weight;
    }
    const auto& c = comps[SampleIndex(w, rng)];
    Vector o(c.mean.size());
    for (Eigen::Index i = 0; i < o.size(); ++i) {
      o[i] = c.mean[i] + std::sqrt(c.variances[i]) * n(rng);
    }
    out.push_back(std::move(o));
  }
  return out;
}

SimulationOutput Simulate(const ScenarioSpec& spec) {
  spec.Validate();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.0);

  // Appearance streams, one draw per frame of each target's lifetime.
  std::vector<std::vector<hmm::Observation>> streams;
  for (const auto& t : spec.targets) {
    streams.push_back(SampleAppearances(
        t.appearance, t.waypoints.back().frame - t.waypoints.front().frame + 1, rng));
  }
  const int dim = spec.targets.empty() ? 1 : spec.targets.front().appearance.dim();

  SimulationOutput out;
  struct Row {
    DetectionRecord rec;
    Vector feat;
    int identity;
  };
  for (long frame = 1; frame <= spec.n_frames; ++frame) {
    std::vector<Row> rows;
    for (std::size_t k = 0; k < spec.targets.size(); ++k) {
      const auto& t = spec.targets[k];
      const auto pos = PositionAt(t, frame);
      if (!pos) continue;
      const long id = static_cast<long>(k) + 1;
      out.ground_truth.push_back(BoxAt(frame, id, *pos, t.height, t.width));
      if (Occluded(t, frame)) continue;
      if (u(rng) < spec.miss_rate) continue;
      Vector2 c = *pos;
      if (spec.position_sigma > 0.0) {
        c.x() += spec.position_sigma * n(rng);
        c.y() += spec.position_sigma * n(rng);
      }
      const auto& feat =
          streams[k][static_cast<std::size_t>(frame - t.waypoints.front().frame)];
      rows.push_back({BoxAt(frame, -1, c, t.height, t.width), feat,
                      static_cast<int>(id)});
    }
    if (u(rng) < spec.false_alarm_rate) {
      const double h = spec.targets.empty() ? 120.0 : spec.targets.front().height;
      const double w = spec.targets.empty() ? 50.0 : spec.targets.front().width;
      const Vector2 c(u(rng) * spec.image_width, u(rng) * spec.image_height);
      Vector feat(dim);
      for (int i = 0; i < dim; ++i) feat[i] = n(rng);
      rows.push_back({BoxAt(frame, -1, c, h, w), std::move(feat), -1});
    }
    // Detection order must not leak identity.
    std::shuffle(rows.begin(), rows.end(), rng);
    for (auto& r : rows) {
      out.detections.push_back(r.rec);
      out.features.push_back(std::move(r.feat));
      out.identities.push_back(r.identity);
    }
  }
  return out;
}

// --- builders ---------------------------------------------------------------

void ScenarioOptions::Set(std::string_view key, std::string_view value) {
  auto i = [&] { return static_cast<int>(ParseLong(value, key)); };
  auto f = [&] { return ParseDouble(value, key); };
  if (key == "type") {
    if (value != "crossing" && value != "random") {
      throw InputError("type: expected 'crossing' or 'random'");
    }
    type = std::string(value);
  } else if (key == "n_targets") n_targets = i();
  else if (key == "n_frames") n_frames = ParseLong(value, key);
  else if (key == "image_width") image_width = f();
  else if (key == "image_height") image_height = f();
  else if (key == "seed") seed = ParseUnsigned(value, key);
  else if (key == "miss_rate") miss_rate = f();
  else if (key == "false_alarm_rate") false_alarm_rate = f();
  else if (key == "position_sigma") position_sigma = f();
  else if (key == "d") d = i();
  else if (key == "pool_states") pool_states = i();
  else if (key == "states_per_target") states_per_target = i();
  else if (key == "separation") separation = f();
  else if (key == "appearance_sigma") appearance_sigma = f();
  else if (key == "cycle_prob") cycle_prob = f();
  else if (key == "speed") speed = f();
  else if (key == "pause_frames") pause_frames = ParseLong(value, key);
  else if (key == "meet_spread") meet_spread = f();
  else if (key == "box_height") box_height = f();
  else if (key == "box_width") box_width = f();
  else throw InputError("unknown scenario key '" + std::string(key) + "'");
}

ScenarioOptions ScenarioOptions::Parse(std::string_view text) {
  ScenarioOptions o;
  ParseKeyValueText(text, "scenario", [&](std::string_view k, std::string_view v) {
    o.Set(k, v);
  });
  return o;
}

ScenarioOptions ScenarioOptions::Load(const std::string& path) {
  return Parse(ReadFile(path));
}

namespace {

void CheckOptions(const ScenarioOptions& o) {
  if (o.n_targets < 0) throw InputError("scenario: n_targets must be >= 0");
  if (o.n_frames < 1) throw InputError("scenario: n_frames must be >= 1");
  if (o.d < 1) throw InputError("scenario: d must be >= 1");
  if (o.states_per_target < 1 || o.pool_states < o.states_per_target) {
    throw InputError("scenario: need 1 <= states_per_target <= pool_states");
  }
  if (!(o.appearance_sigma > 0.0)) {
    throw InputError("scenario: appearance_sigma must be positive");
  }
  if (!(o.cycle_prob >= 0.0 && o.cycle_prob <= 1.0)) {
    throw InputError("scenario: cycle_prob must lie in [0, 1]");
  }
  if (!(o.box_height > 0.0 && o.box_width > 0.0)) {
    throw InputError("scenario: box size must be positive");
  }
}

ScenarioSpec BaseSpec(const ScenarioOptions& o) {
  ScenarioSpec s;
  s.n_frames = o.n_frames;
  s.image_width = o.image_width;
  s.image_height = o.image_height;
  s.miss_rate = o.miss_rate;
  s.false_alarm_rate = o.false_alarm_rate;
  s.position_sigma = o.position_sigma;
  // The detector noise stream is decorrelated from the layout stream.
  s.seed = o.seed ^ 0x9e3779b97f4a7c15ULL;
  return s;
}

}  // namespace

ScenarioSpec BuildCrossingScenario(const ScenarioOptions& o) {
  CheckOptions(o);
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScenarioSpec s = BaseSpec(o);
  auto models = BuildAppearanceModels(o, rng);

  const long travel = std::max<long>(1, (o.n_frames - o.pause_frames) / 2);
  const long meet = std::min(o.n_frames, 1 + travel);
  const long leave = std::min(o.n_frames, meet + o.pause_frames);
  const Vector2 center(0.5 * o.image_width, 0.5 * o.image_height);
  for (int k = 0; k < o.n_targets; ++k) {
    TargetSpec t;
    t.appearance = std::move(models[static_cast<std::size_t>(k)]);
    t.height = o.box_height;
    t.width = o.box_width;
    const double a_in = 2.0 * std::numbers::pi * u(rng);
    const double a_out = 2.0 * std::numbers::pi * u(rng);
    const double a_off = 2.0 * std::numbers::pi * u(rng);
    const Vector2 spot =
        center + o.meet_spread * u(rng) * Vector2(std::cos(a_off), std::sin(a_off));
    const Vector2 start =
        spot - o.speed * static_cast<double>(meet - 1) * Vector2(std::cos(a_in), std::sin(a_in));
    const Vector2 end = spot + o.speed * static_cast<double>(o.n_frames - leave) *
                                   Vector2(std::cos(a_out), std::sin(a_out));
    t.waypoints.push_back({1, start.x(), start.y()});
    if (meet > 1) t.waypoints.push_back({meet, spot.x(), spot.y()});
    if (leave > meet) t.waypoints.push_back({leave, spot.x(), spot.y()});
    if (o.n_frames > leave) t.waypoints.push_back({o.n_frames, end.x(), end.y()});
    s.targets.push_back(std::move(t));
  }
  return s;
}

ScenarioSpec BuildRandomScenario(const ScenarioOptions& o) {
  CheckOptions(o);
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScenarioSpec s = BaseSpec(o);
  auto models = BuildAppearanceModels(o, rng);
  const double mx = 0.5 * o.box_width;
  const double my = 0.5 * o.box_height;
  auto point = [&] {
    return Vector2(mx + u(rng) * (o.image_width - 2.0 * mx),
                   my + u(rng) * (o.image_height - 2.0 * my));
  };
  for (int k = 0; k < o.n_targets; ++k) {
    TargetSpec t;
    t.appearance = std::move(models[static_cast<std::size_t>(k)]);
    t.height = o.box_height;
    t.width = o.box_width;
    // Lifetime covers at least half the sequence.
    const long len = std::max<long>(1, o.n_frames / 2 +
                                           static_cast<long>(u(rng) * static_cast<double>(o.n_frames / 2)));
    const long first = 1 + static_cast<long>(u(rng) * static_cast<double>(o.n_frames - len));
    const long last = std::min(o.n_frames, first + len - 1);
    Vector2 p = point();
    t.waypoints.push_back({first, p.x(), p.y()});
    long f = first;
    while (f < last) {
      const long step = std::min(last - f, 10 + static_cast<long>(u(rng) * 20.0));
      f += step;
      // Bounded step so the speed stays plausible.
      const Vector2 target = point();
      const Vector2 dir = target - p;
      const double max_move = o.speed * static_cast<double>(step);
      if (dir.norm() > max_move) p += dir * (max_move / dir.norm());
      else p = target;
      t.waypoints.push_back({f, p.x(), p.y()});
    }
    s.targets.push_back(std::move(t));
  }
  return s;
}

ScenarioSpec BuildScenario(const ScenarioOptions& options) {
  if (options.type == "crossing") return BuildCrossingScenario(options);
  if (options.type == "random") return BuildRandomScenario(options);
  throw InputError("scenario: unknown type '" + options.type + "'");
}

}  // namespace tdam::io
