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

#include "scenebm/tasks.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "scenebm/common.hpp"

namespace scenebm {

using nlohmann::json;

namespace {

// Stream tags, one per task, so that tasks never share draws.
constexpr std::uint64_t kTask1 = 0x7a51;
constexpr std::uint64_t kTask2 = 0x7a52;
constexpr std::uint64_t kTask3 = 0x7a53;
constexpr std::uint64_t kTask4 = 0x7a54;
constexpr std::uint64_t kSelect = 0x7a55;

void check_scenes(const NetworkConfig& c, std::span<const EncodedScene> scenes) {
  for (const EncodedScene& s : scenes) {
    if (s.vector.label_count() != c.V || s.vector.relation_types() != c.Tc) {
      throw ValidationError("scene '" + s.scene_id + "' has V=" + std::to_string(s.vector.label_count()) +
                            " but the model has V=" + std::to_string(c.V));
    }
  }
}

template <typename Fn>
TaskReport run_task(int task, const Model& model, std::span<const EncodedScene> scenes, std::uint64_t seed,
                    unsigned threads, Fn&& per_scene) {
  model.validate();
  check_scenes(model.config, scenes);
  TaskReport report;
  report.task = task;
  report.model = model_label(model.config);
  report.seed = seed;
  report.records.resize(scenes.size());
  parallel_for(scenes.size(), threads, [&](std::size_t i) {
    SceneRecord& rec = report.records[i];
    rec.scene_id = scenes[i].scene_id;
    per_scene(scenes[i], rec);
  });
  const ChanceLevels chance = chance_levels(model.config);
  report.chance = task == 1 ? chance.task1 : task == 2 ? chance.task2 : chance.task3;
  report.finalize();
  return report;
}

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

}  // namespace

void TaskReport::finalize() {
  double num = 0.0;
  double den = 0.0;
  skipped = 0;
  for (const SceneRecord& r : records) {
    if (r.skipped) {
      ++skipped;
      continue;
    }
    num += r.numerator;
    den += r.denominator;
  }
  aggregate = den > 0.0 ? num / den : 0.0;
}

json report_to_json(const TaskReport& report) {
  json records = json::array();
  for (const SceneRecord& r : report.records) {
    records.push_back({{"scene_id", r.scene_id},
                       {"numerator", r.numerator},
                       {"denominator", r.denominator},
                       {"skipped", r.skipped},
                       {"detail", r.detail}});
  }
  return {{"task", report.task},     {"model", report.model},     {"seed", report.seed},
          {"aggregate", report.aggregate}, {"chance", report.chance}, {"skipped", report.skipped},
          {"records", records}};
}

std::string report_to_csv(const TaskReport& report) {
  std::string out = "scene_id,numerator,denominator,skipped\n";
  for (const SceneRecord& r : report.records) {
    out += r.scene_id + "," + fmt("%.17g", r.numerator) + "," + fmt("%.17g", r.denominator) + "," +
           (r.skipped ? "1" : "0") + "\n";
  }
  return out;
}

std::string report_to_text(const TaskReport& report) {
  static const char* names[] = {"", "relation estimation (accuracy)", "missing object (top-1 accuracy)",
                                "out of context (error)", "generation"};
  const char* name = report.task >= 1 && report.task <= 4 ? names[report.task] : "";
  std::ostringstream out;
  out << "Task " << report.task << ": " << name << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "  %-8s %-14s\n", "", report.model.c_str());
  out << line;
  std::snprintf(line, sizeof line, "  %-8s %-14.6g\n", "metric", report.aggregate);
  out << line;
  std::snprintf(line, sizeof line, "  %-8s %-14.6g\n", "chance", report.chance);
  out << line;
  out << "  scenes " << report.records.size() << ", skipped " << report.skipped << ", seed " << report.seed << "\n";
  return out.str();
}

ChanceLevels chance_levels(const NetworkConfig& config) {
  ChanceLevels out;
  out.task1 = 1.0 / static_cast<double>(config.relation_count());
  out.task2 = 1.0 / static_cast<double>(config.V);
  return out;
}

TaskReport task1_relation_estimation(const Model& model, std::span<const EncodedScene> scenes,
                                     const SamplerSettings& settings, std::uint64_t seed, unsigned threads) {
  settings.validate();
  const NetworkConfig& c = model.config;
  const ClampMask mask = ClampMask::objects_only(c);
  return run_task(1, model, scenes, seed, threads, [&](const EncodedScene& s, SceneRecord& rec) {
    const auto& truth = s.vector.relations();
    if (truth.empty()) {
      rec.skipped = true;
      return;
    }
    Rng rng = make_stream({seed, kTask1, s.index});
    NetworkState init = NetworkState::zeros(c);
    for (std::size_t j : s.vector.objects()) init.v[j] = 1;
    const Completion done = conditional_complete(model, std::move(init), mask, settings, rng);
    std::size_t correct = 0;
    for (std::size_t rel : truth) {
      if (done.probabilities.r[rel] >= 0.5) ++correct;
    }
    rec.numerator = static_cast<double>(correct);
    rec.denominator = static_cast<double>(truth.size());
  });
}

TaskReport task2_missing_object(const Model& model, std::span<const EncodedScene> scenes,
                                const SamplerSettings& settings, std::uint64_t seed, unsigned threads) {
  settings.validate();
  const NetworkConfig& c = model.config;
  return run_task(2, model, scenes, seed, threads, [&](const EncodedScene& s, SceneRecord& rec) {
    const auto& objects = s.vector.objects();
    if (objects.size() < 2) {
      rec.skipped = true;
      return;
    }
    Rng rng = make_stream({seed, kTask2, s.index});
    const std::size_t removed = objects[uniform_index(rng, objects.size())];
    SceneVector partial = s.vector;
    partial.remove_object(removed);

    ClampMask mask = ClampMask::none(c);
    for (std::size_t j : partial.objects()) mask.objects[j] = 1;
    for (std::size_t rel : partial.relations()) mask.relations[rel] = 1;
    const Completion done = conditional_complete(model, partial, mask, settings, rng);

    std::size_t best = c.V;
    double best_p = -1.0;
    for (std::size_t j = 0; j < c.V; ++j) {
      if (mask.objects[j]) continue;
      if (done.probabilities.v[j] > best_p) {
        best_p = done.probabilities.v[j];
        best = j;
      }
    }
    rec.numerator = best == removed ? 1.0 : 0.0;
    rec.denominator = 1.0;
    rec.detail = {{"removed", removed},
                  {"predicted", best},
                  {"probability", best_p},
                  {"in_sample", done.state.v[removed] == 1}};
  });
}

TaskReport task3_out_of_context(const Model& model, std::span<const EncodedScene> scenes,
                                const SamplerSettings& settings, std::uint64_t seed, unsigned threads) {
  settings.validate();
  const NetworkConfig& c = model.config;
  return run_task(3, model, scenes, seed, threads, [&](const EncodedScene& s, SceneRecord& rec) {
    const auto& objects = s.vector.objects();
    if (objects.empty() || objects.size() >= c.V) {
      rec.skipped = true;
      return;
    }
    Rng rng = make_stream({seed, kTask3, s.index});
    const std::size_t removed = objects[uniform_index(rng, objects.size())];
    std::vector<std::size_t> absent;
    for (std::size_t j = 0; j < c.V; ++j) {
      if (!s.vector.has_object(j)) absent.push_back(j);
    }
    const std::size_t added = absent[uniform_index(rng, absent.size())];
    SceneVector corrupted = s.vector;
    corrupted.remove_object(removed);
    corrupted.add_object(added);

    NetworkState state = state_from_scene(c, corrupted);
    const ClampMask clamp_all = ClampMask::visibles(c);
    for (std::size_t k = 0; k < settings.k_pos; ++k) sweep_hidden(model, state, clamp_all, rng, settings.temperature);

    ClampMask release = ClampMask::none(c);
    std::fill(release.relations.begin(), release.relations.end(), 1);
    const Completion done = conditional_complete(model, std::move(state), release, settings, rng);

    std::size_t flipped = 0;
    for (std::size_t j = 0; j < c.V; ++j) {
      if (done.state.v[j] != (s.vector.has_object(j) ? 1 : 0)) ++flipped;
    }
    rec.numerator = static_cast<double>(flipped);
    rec.denominator = static_cast<double>(c.V);
    rec.detail = {{"removed", removed},
                  {"added", added},
                  {"restored", done.state.v[removed] == 1},
                  {"rejected", done.state.v[added] == 0}};
  });
}

SceneVector vector_from_state(const NetworkConfig& c, const NetworkState& state) {
  state.check_shape(c);
  SceneVector out(c.V, c.Tc);
  for (std::size_t j = 0; j < c.V; ++j) {
    if (state.v[j]) out.add_object(j);
  }
  for (std::size_t rel = 0; rel < c.relation_count(); ++rel) {
    if (!state.r[rel]) continue;
    const RelationId id = RelationId::from_flat(rel, c.V);
    if (state.v[id.subject] && state.v[id.object]) out.add_relation(id);
  }
  return out;
}

std::vector<double> category_activation(const Model& model, std::span<const EncodedScene> scenes,
                                        const std::string& category, const SamplerSettings& settings,
                                        std::uint64_t seed) {
  settings.validate();
  const NetworkConfig& c = model.config;
  check_scenes(c, scenes);
  std::vector<double> mean(c.H1, 0.0);
  std::size_t n = 0;
  const ClampMask mask = ClampMask::visibles(c);
  for (const EncodedScene& s : scenes) {
    if (s.category != category) continue;
    Rng rng = make_stream({seed, kSelect, s.index});
    NetworkState state = state_from_scene(c, s.vector);
    for (std::size_t k = 0; k < settings.k_pos; ++k) sweep_hidden(model, state, mask, rng, settings.temperature);
    for (std::size_t m = 0; m < c.H1; ++m) mean[m] += state.prob.h1[m];
    ++n;
  }
  if (n == 0) throw ValidationError("no scene of category '" + category + "'");
  for (double& x : mean) x /= static_cast<double>(n);
  return mean;
}

NodeRef select_category_unit(const Model& model, std::span<const EncodedScene> scenes, const std::string& category,
                             const SamplerSettings& settings, std::uint64_t seed) {
  const std::vector<double> mean = category_activation(model, scenes, category, settings, seed);
  const std::size_t best = static_cast<std::size_t>(std::max_element(mean.begin(), mean.end()) - mean.begin());
  return {NodeKind::hidden1, best};
}

std::vector<NodeRef> select_category_context(const Model& model, std::span<const EncodedScene> scenes,
                                             const std::string& category, const SamplerSettings& settings,
                                             std::uint64_t seed, double threshold) {
  const std::vector<double> mean = category_activation(model, scenes, category, settings, seed);
  std::vector<NodeRef> units;
  for (std::size_t m = 0; m < mean.size(); ++m) {
    if (mean[m] > threshold) units.push_back({NodeKind::hidden1, m});
  }
  if (units.empty()) {
    units.push_back({NodeKind::hidden1,
                     static_cast<std::size_t>(std::max_element(mean.begin(), mean.end()) - mean.begin())});
  }
  return units;
}

namespace {

template <typename Fn>
GenerationReport generate(const Model& model, const SamplerSettings& settings, std::uint64_t seed, std::size_t count,
                          const MotifTable* motifs, const std::string& category, unsigned threads, Fn&& sample) {
  settings.validate();
  model.validate();
  GenerationReport report;
  report.model = model_label(model.config);
  report.category = category;
  report.generations.resize(count);
  parallel_for(count, threads, [&](std::size_t i) {
    Rng rng = make_stream({seed, kTask4, i});
    Generation& g = report.generations[i];
    g.scene = vector_from_state(model.config, sample(rng).state);
    if (motifs) {
      for (std::size_t rel : g.scene.relations()) {
        if (motifs->contains(category, RelationId::from_flat(rel, model.config.V))) ++g.motif_hits;
      }
    }
  });
  if (motifs && count > 0) {
    std::size_t with_motif = 0;
    std::size_t active = 0;
    std::size_t any = 0;
    for (const Generation& g : report.generations) {
      if (g.motif_hits > 0) ++with_motif;
      for (std::size_t rel : g.scene.relations()) {
        ++active;
        if (motifs->contains_any(RelationId::from_flat(rel, model.config.V))) ++any;
      }
    }
    report.motif_rate = static_cast<double>(with_motif) / static_cast<double>(count);
    report.motif_precision = active > 0 ? static_cast<double>(any) / static_cast<double>(active) : 0.0;
  }
  return report;
}

}  // namespace

GenerationReport task4_generate(const Model& model, std::span<const NodeRef> hidden, const SamplerSettings& settings,
                                std::uint64_t seed, std::size_t count, const MotifTable* motifs,
                                const std::string& category, unsigned threads, HiddenRest rest) {
  return generate(model, settings, seed, count, motifs, category, threads,
                  [&](Rng& rng) { return generate_from_hidden(model, hidden, settings, rng, rest); });
}

GenerationReport task4_complete(const Model& model, const SceneVector& partial, const SamplerSettings& settings,
                                std::uint64_t seed, std::size_t count, const MotifTable* motifs,
                                const std::string& category, unsigned threads) {
  const NetworkConfig& c = model.config;
  ClampMask mask = ClampMask::none(c);
  for (std::size_t j : partial.objects()) mask.objects[j] = 1;
  for (std::size_t rel : partial.relations()) mask.relations[rel] = 1;
  return generate(model, settings, seed, count, motifs, category, threads,
                  [&](Rng& rng) { return conditional_complete(model, partial, mask, settings, rng); });
}

json generation_to_json(const GenerationReport& report, const Vocabulary& vocab) {
  json scenes = json::array();
  for (std::size_t i = 0; i < report.generations.size(); ++i) {
    const Generation& g = report.generations[i];
    json objects = json::array();
    for (std::size_t j : g.scene.objects()) objects.push_back(vocab.label(j));
    json relations = json::array();
    for (std::size_t rel : g.scene.relations()) {
      const RelationId id = RelationId::from_flat(rel, vocab.size());
      relations.push_back({{"type", std::string(canonical_name(id.type))},
                           {"subject", vocab.label(id.subject)},
                           {"object", vocab.label(id.object)}});
    }
    scenes.push_back({{"sample", i}, {"objects", objects}, {"relations", relations}, {"motif_hits", g.motif_hits}});
  }
  return {{"task", 4},
          {"model", report.model},
          {"category", report.category},
          {"motif_rate", report.motif_rate},
          {"motif_precision", report.motif_precision},
          {"generations", scenes}};
}

const ModelRun& Comparison::run(const std::string& model, std::uint64_t seed) const {
  for (const ModelRun& r : runs) {
    if (r.model == model && r.seed == seed) return r;
  }
  throw ValidationError("comparison has no run for " + model + " with seed " + std::to_string(seed));
}

Comparison compare_models(std::span<const NetworkConfig> configs, const DatasetSplit& split, const HyperParams& hyper,
                          const SamplerSettings& settings, std::span<const std::uint64_t> seeds,
                          const CompareOptions& options) {
  if (configs.empty()) throw ValidationError("compare: no model configs");
  if (seeds.empty()) throw ValidationError("compare: at least one seed is required");
  Comparison out;
  out.chance = chance_levels(configs.front());
  for (const NetworkConfig& c : configs) {
    const std::string label = model_label(c);
    if (std::find(out.models.begin(), out.models.end(), label) != out.models.end()) {
      throw ValidationError("compare: duplicate model " + label);
    }
    out.models.push_back(label);
  }
  out.seeds.assign(seeds.begin(), seeds.end());
  for (std::uint64_t seed : seeds) {
    for (NetworkConfig config : configs) {
      config.seed = seed;
      HyperParams h = hyper;
      h.seed = seed;
      TrainOptions train_options;
      train_options.threads = options.threads;
      TrainResult trained = train(init_model(config), split.train, split.validation, h, train_options);
      ModelRun run;
      run.model = model_label(config);
      run.seed = seed;
      run.history = std::move(trained.history);
      run.task1 = task1_relation_estimation(trained.model, split.test, settings, seed, options.threads);
      run.task2 = task2_missing_object(trained.model, split.test, settings, seed, options.threads);
      run.task3 = task3_out_of_context(trained.model, split.test, settings, seed, options.threads);
      if (options.on_run) options.on_run(run);
      out.runs.push_back(std::move(run));
    }
  }
  return out;
}

namespace {

const TaskReport& task_of(const ModelRun& run, int task) {
  return task == 1 ? run.task1 : task == 2 ? run.task2 : run.task3;
}

double chance_of(const ChanceLevels& c, int task) { return task == 1 ? c.task1 : task == 2 ? c.task2 : c.task3; }

double mean_metric(const Comparison& cmp, const std::string& model, int task) {
  double sum = 0.0;
  for (std::uint64_t seed : cmp.seeds) sum += task_of(cmp.run(model, seed), task).aggregate;
  return sum / static_cast<double>(cmp.seeds.size());
}

}  // namespace

json comparison_to_json(const Comparison& cmp) {
  json tasks = json::array();
  for (int task = 1; task <= 3; ++task) {
    json rows = json::array();
    for (const std::string& model : cmp.models) {
      json per_seed = json::object();
      for (std::uint64_t seed : cmp.seeds) per_seed[std::to_string(seed)] = task_of(cmp.run(model, seed), task).aggregate;
      rows.push_back({{"model", model}, {"per_seed", per_seed}, {"mean", mean_metric(cmp, model, task)}});
    }
    tasks.push_back({{"task", task}, {"rows", rows}, {"chance", chance_of(cmp.chance, task)}});
  }
  json runs = json::array();
  for (const ModelRun& r : cmp.runs) {
    runs.push_back({{"model", r.model}, {"seed", r.seed}, {"history", history_to_json(r.history)}});
  }
  return {{"models", cmp.models},
          {"seeds", cmp.seeds},
          {"tasks", tasks},
          {"task2_chance_printed_percent", cmp.chance.task2_printed},
          {"runs", runs}};
}

std::string comparison_to_text(const Comparison& cmp) {
  static const char* titles[] = {"", "Task 1: relation estimation (accuracy)", "Task 2: missing object (top-1 accuracy)",
                                 "Task 3: out of context (error)"};
  std::ostringstream out;
  char cell[64];
  for (int task = 1; task <= 3; ++task) {
    out << titles[task] << "\n";
    std::snprintf(cell, sizeof cell, "  %-10s", "model");
    out << cell;
    for (std::uint64_t seed : cmp.seeds) {
      std::snprintf(cell, sizeof cell, " %12s", ("seed " + std::to_string(seed)).c_str());
      out << cell;
    }
    std::snprintf(cell, sizeof cell, " %12s\n", "mean");
    out << cell;
    for (const std::string& model : cmp.models) {
      std::snprintf(cell, sizeof cell, "  %-10s", model.c_str());
      out << cell;
      for (std::uint64_t seed : cmp.seeds) {
        std::snprintf(cell, sizeof cell, " %12.6f", task_of(cmp.run(model, seed), task).aggregate);
        out << cell;
      }
      std::snprintf(cell, sizeof cell, " %12.6f\n", mean_metric(cmp, model, task));
      out << cell;
    }
    std::snprintf(cell, sizeof cell, "  %-10s", "chance");
    out << cell;
    for (std::size_t i = 0; i < cmp.seeds.size(); ++i) out << std::string(13, ' ');
    std::snprintf(cell, sizeof cell, " %12.6g\n", chance_of(cmp.chance, task));
    out << cell;
    if (task == 2) {
      std::snprintf(cell, sizeof cell, "  %-10s", "printed");
      out << cell << " " << fmt("%.3g", cmp.chance.task2_printed) << " %\n";
    }
    out << "\n";
  }
  return out.str();
}

std::string comparison_to_csv(const Comparison& cmp) {
  std::string out = "task,model,seed,metric\n";
  for (int task = 1; task <= 3; ++task) {
    const std::string t = std::to_string(task);
    for (const std::string& model : cmp.models) {
      for (std::uint64_t seed : cmp.seeds) {
        out += t + "," + model + "," + std::to_string(seed) + "," +
               fmt("%.17g", task_of(cmp.run(model, seed), task).aggregate) + "\n";
      }
      out += t + "," + model + ",mean," + fmt("%.17g", mean_metric(cmp, model, task)) + "\n";
    }
    out += t + ",chance,," + fmt("%.17g", chance_of(cmp.chance, task)) + "\n";
  }
  return out;
}

}  // namespace scenebm
