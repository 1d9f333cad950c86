// Copyright 2026 The scenebm Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCENEBM_TASKS_HPP
#define SCENEBM_TASKS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "scenebm/sampler.hpp"
#include "scenebm/split.hpp"
#include "scenebm/synth.hpp"
#include "scenebm/trainer.hpp"

namespace scenebm {

struct SceneRecord {
  std::string scene_id;
  double numerator = 0.0;    // correct relations, correct predictions, or flipped objects
  double denominator = 0.0;  // scored relations, 1, or V
  bool skipped = false;
  nlohmann::json detail = nlohmann::json::object();
};

struct TaskReport {
  int task = 0;
  std::string model;
  std::uint64_t seed = 0;
  std::vector<SceneRecord> records;  // in input scene order
  double aggregate = 0.0;            // sum of numerators / sum of denominators
  double chance = 0.0;
  std::size_t skipped = 0;

  // Recomputes aggregate and skipped from the records.
  void finalize();
};

nlohmann::json report_to_json(const TaskReport& report);
// scene_id,numerator,denominator,skipped
std::string report_to_csv(const TaskReport& report);
std::string report_to_text(const TaskReport& report);

struct ChanceLevels {
  double task1 = 0.0;  // 1 / (Tc V^2)
  double task2 = 0.0;  // 1 / V
  double task2_printed = 5.75e-6;  // reference value for V=417 as usually quoted, in percent
  double task3 = 0.5;
};
ChanceLevels chance_levels(const NetworkConfig& config);

// Every object node is clamped to the scene and the relations settle
// freely. A ground-truth relation counts as recovered when its averaged
// activation probability is at least 0.5. Scenes without relations are
// skipped.
TaskReport task1_relation_estimation(const Model& model, std::span<const EncodedScene> scenes,
                                     const SamplerSettings& settings, std::uint64_t seed, unsigned threads = 1);

// One random object and its relations are removed; remaining active objects
// and relations stay clamped and everything else settles. The prediction is
// the free object with the highest averaged probability. Scenes with fewer
// than two objects are skipped.
TaskReport task2_missing_object(const Model& model, std::span<const EncodedScene> scenes,
                                const SamplerSettings& settings, std::uint64_t seed, unsigned threads = 1);

// A random active object and its relations are removed and a random absent
// object is added. The hidden layers are inferred with the corrupted
// visibles clamped for k_pos sweeps, then the object nodes are released
// and settle. Scores sum_j |v_j - v'_j| over object nodes per scene, with
// V as the denominator.
TaskReport task3_out_of_context(const Model& model, std::span<const EncodedScene> scenes,
                                const SamplerSettings& settings, std::uint64_t seed, unsigned threads = 1);

// Keeps only relations whose endpoints are both active.
SceneVector vector_from_state(const NetworkConfig& config, const NetworkState& state);

// Mean posterior activation of each bottom-layer hidden unit over the
// scenes of `category`, visibles clamped for k_pos sweeps.
std::vector<double> category_activation(const Model& model, std::span<const EncodedScene> scenes,
                                        const std::string& category, const SamplerSettings& settings,
                                        std::uint64_t seed);

// The unit with the highest category_activation; the lowest index wins ties.
NodeRef select_category_unit(const Model& model, std::span<const EncodedScene> scenes, const std::string& category,
                             const SamplerSettings& settings, std::uint64_t seed);

// Every unit whose category_activation exceeds `threshold`, in index order;
// the single most active unit when none does. Generating with these on and
// HiddenRest::off reproduces the category's typical context.
std::vector<NodeRef> select_category_context(const Model& model, std::span<const EncodedScene> scenes,
                                             const std::string& category, const SamplerSettings& settings,
                                             std::uint64_t seed, double threshold = 0.5);

struct Generation {
  SceneVector scene;
  std::size_t motif_hits = 0;  // active relations found in the category motif table
};

struct GenerationReport {
  std::string model;
  std::string category;
  std::vector<Generation> generations;
  // Fraction of generations holding at least one motif of the category.
  double motif_rate = 0.0;
  // Fraction of all active relations that are motifs of any category.
  double motif_precision = 0.0;
};

// `count` samples with the listed hidden units clamped on; sample i uses
// the stream (seed, i). Motif scores are zero when `motifs` is null.
GenerationReport task4_generate(const Model& model, std::span<const NodeRef> hidden,
                                const SamplerSettings& settings, std::uint64_t seed, std::size_t count,
                                const MotifTable* motifs = nullptr, const std::string& category = {},
                                unsigned threads = 1, HiddenRest rest = HiddenRest::free);
// Same, seeded from a partial scene whose objects and relations stay clamped.
GenerationReport task4_complete(const Model& model, const SceneVector& partial, const SamplerSettings& settings,
                                std::uint64_t seed, std::size_t count, const MotifTable* motifs = nullptr,
                                const std::string& category = {}, unsigned threads = 1);

nlohmann::json generation_to_json(const GenerationReport& report, const Vocabulary& vocab);

// Baseline comparison: every config is trained on the same split for every
// seed, then scored on Tasks 1-3 over the test scenes.
struct ModelRun {
  std::string model;
  std::uint64_t seed = 0;
  TrainHistory history;
  TaskReport task1;
  TaskReport task2;
  TaskReport task3;
};

struct Comparison {
  std::vector<std::string> models;  // in config order
  std::vector<std::uint64_t> seeds;
  std::vector<ModelRun> runs;  // seed-major, then config order
  ChanceLevels chance;

  const ModelRun& run(const std::string& model, std::uint64_t seed) const;
};

struct CompareOptions {
  unsigned threads = 1;
  std::function<void(const ModelRun&)> on_run;
};

Comparison compare_models(std::span<const NetworkConfig> configs, const DatasetSplit& split, const HyperParams& hyper,
                          const SamplerSettings& settings, std::span<const std::uint64_t> seeds,
                          const CompareOptions& options = {});

nlohmann::json comparison_to_json(const Comparison& comparison);
// One table per task: a row per model with each seed and the mean, then the
// chance row.
std::string comparison_to_text(const Comparison& comparison);
// task,model,seed,metric rows; seed "mean" for averages and model "chance".
std::string comparison_to_csv(const Comparison& comparison);

}  // namespace scenebm

#endif  // SCENEBM_TASKS_HPP
