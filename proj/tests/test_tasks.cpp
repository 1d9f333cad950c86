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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "scenebm/scene_io.hpp"
#include "scenebm/synth.hpp"
#include "scenebm/tasks.hpp"

using namespace scenebm;

namespace {

SamplerSettings quick_settings() {
  SamplerSettings s;
  s.settle_sweeps = 20;
  return s;
}

EncodedScene encoded(std::size_t index, SceneVector v, const std::string& category = "office") {
  return {index, "s" + std::to_string(index), category, std::move(v)};
}

// Every scene holds desk and monitor with on_top(monitor, desk).
std::vector<EncodedScene> desk_monitor_scenes(std::size_t n, std::size_t V = 4) {
  std::vector<EncodedScene> out;
  for (std::size_t i = 0; i < n; ++i) {
    SceneVector v(V);
    v.add_object(0);
    v.add_object(1);
    v.add_relation(RelationId{2, 1, 0});
    out.push_back(encoded(i, v));
  }
  return out;
}

std::vector<EncodedScene> fixture_scenes() {
  const SynthSpec spec = synth_spec_from_json(read_json_file(SCENEBM_CONFIG_DIR "/fixture_synth.json"));
  const SynthResult r = synth_generate(spec);
  return encode_all(r.scenes, r.vocabulary);
}

// Zero weights except object biases of +-20.
Model biased_objects(std::size_t V, const std::vector<std::size_t>& on) {
  NetworkConfig c = triway_config(V, 4, 2, 1);
  c.use_biases = true;
  Model m{c, zero_params(c)};
  for (std::size_t j = 0; j < V; ++j) m.params.biases->objects[j] = -20.0;
  for (std::size_t j : on) m.params.biases->objects[j] = 20.0;
  return m;
}

}  // namespace

TEST_CASE("chance levels") {
  NetworkConfig large = triway_config(417, 4, 200, 100);
  const ChanceLevels c = chance_levels(large);
  CHECK(c.task1 == doctest::Approx(1.0 / (4.0 * 417 * 417)).epsilon(1e-12));
  CHECK(c.task1 == doctest::Approx(1.4377e-6).epsilon(1e-4));
  CHECK(std::round(c.task1 * 1e8) / 100.0 == doctest::Approx(1.44));
  CHECK(c.task2 == doctest::Approx(2.398e-3).epsilon(1e-3));
  CHECK(c.task2_printed == 5.75e-6);
  CHECK(c.task3 == 0.5);
  CHECK(chance_levels(triway_config(30, 4, 40, 20)).task3 == 0.5);
}

TEST_CASE("task 1: relation estimation") {
  SUBCASE("a model that switches every relation on scores 100%") {
    NetworkConfig c = triway_config(4, 4, 2, 1);
    Model m{c, zero_params(c)};
    m.params.w_tri = {30.0, 30.0, 30.0, 30.0};
    const auto scenes = desk_monitor_scenes(10);
    const TaskReport r = task1_relation_estimation(m, scenes, quick_settings(), 1);
    CHECK(r.aggregate == 1.0);
    CHECK(r.chance == doctest::Approx(1.0 / 64.0));
  }

  SUBCASE("scenes without relations are skipped and counted") {
    const NetworkConfig c = triway_config(4, 4, 2, 1);
    const Model m{c, zero_params(c)};
    auto scenes = desk_monitor_scenes(3);
    SceneVector bare(4);
    bare.add_object(2);
    scenes.push_back(encoded(3, bare));
    const TaskReport r = task1_relation_estimation(m, scenes, quick_settings(), 1);
    CHECK(r.skipped == 1);
    CHECK(r.records.size() == 4);
    CHECK(r.records[3].skipped);
    CHECK(r.aggregate >= 0.0);
    CHECK(r.aggregate <= 1.0);
  }

  SUBCASE("aggregate is the pooled ratio of the records") {
    const NetworkConfig c = triway_config(30, 4, 4, 2);
    Rng rng(3);
    Model m{c, init_params(c, rng)};
    for (double& w : m.params.w_rh.values()) w *= 100.0;
    const auto all = fixture_scenes();
    std::vector<EncodedScene> scenes(all.begin(), all.begin() + 40);
    const TaskReport r = task1_relation_estimation(m, scenes, quick_settings(), 2);
    double num = 0.0, den = 0.0;
    for (const auto& rec : r.records) {
      if (rec.skipped) continue;
      num += rec.numerator;
      den += rec.denominator;
    }
    CHECK(r.aggregate == doctest::Approx(num / den));
    CHECK(r.aggregate >= 0.0);
    CHECK(r.aggregate <= 1.0);
  }
}

TEST_CASE("task 2: missing object") {
  SUBCASE("single-object scenes are excluded") {
    const NetworkConfig c = triway_config(4, 4, 2, 1);
    SceneVector one(4);
    one.add_object(1);
    const std::vector<EncodedScene> scenes = {encoded(0, one)};
    const TaskReport r = task2_missing_object(Model{c, zero_params(c)}, scenes, quick_settings(), 1);
    CHECK(r.skipped == 1);
  }

  SUBCASE("a trained model recovers a certain partner") {
    const auto data = desk_monitor_scenes(40);
    NetworkConfig c = triway_config(4, 4, 6, 3);
    c.seed = 5;
    HyperParams h;
    h.batch_size = 8;
    h.max_epochs = 20;
    h.patience = 20;
    h.seed = 5;
    const TrainResult trained = train(init_model(c), data, data, h);
    const TaskReport r = task2_missing_object(trained.model, data, quick_settings(), 7);
    CHECK(r.aggregate == 1.0);
    for (const auto& rec : r.records) {
      const std::size_t removed = rec.detail["removed"];
      CHECK(rec.detail["predicted"] == removed);
    }
  }
}

TEST_CASE("task 3: out of context") {
  SUBCASE("a null model scores about one half") {
    const auto scenes = fixture_scenes();
    const NetworkConfig c = triway_config(30, 4, 10, 5);
    const TaskReport r = task3_out_of_context(Model{c, zero_params(c)}, scenes, quick_settings(), 3);
    CHECK(r.aggregate == doctest::Approx(0.5).epsilon(0.04));
    CHECK(std::abs(r.aggregate - 0.5) < 0.02);
    CHECK(r.chance == 0.5);
  }

  SUBCASE("perfect restoration scores zero") {
    const Model m = biased_objects(4, {0, 1});
    const TaskReport r = task3_out_of_context(m, desk_monitor_scenes(20), quick_settings(), 4);
    CHECK(r.aggregate == 0.0);
    for (const auto& rec : r.records) {
      CHECK(rec.detail["restored"] == true);
      CHECK(rec.detail["rejected"] == true);
    }
  }

  SUBCASE("measure lies in [0, 1]") {
    const Model m = biased_objects(4, {2, 3});
    const TaskReport r = task3_out_of_context(m, desk_monitor_scenes(20), quick_settings(), 4);
    CHECK(r.aggregate == 1.0);
  }
}

TEST_CASE("task properties") {
  const auto all = fixture_scenes();
  std::vector<EncodedScene> scenes(all.begin(), all.begin() + 30);
  NetworkConfig c = triway_config(30, 4, 4, 2);
  Rng rng(8);
  Model m{c, init_params(c, rng)};
  for (double& w : m.params.w_hv.values()) w *= 100.0;
  const SamplerSettings s = quick_settings();

  SUBCASE("deterministic in the seed and the thread count") {
    for (int task = 1; task <= 3; ++task) {
      auto run = [&](std::uint64_t seed, unsigned threads) {
        if (task == 1) return task1_relation_estimation(m, scenes, s, seed, threads);
        if (task == 2) return task2_missing_object(m, scenes, s, seed, threads);
        return task3_out_of_context(m, scenes, s, seed, threads);
      };
      const TaskReport a = run(5, 1);
      const TaskReport b = run(5, 3);
      CHECK(report_to_json(a) == report_to_json(b));
    }
  }

  SUBCASE("scene order does not change the metric") {
    std::vector<EncodedScene> reversed(scenes.rbegin(), scenes.rend());
    CHECK(task2_missing_object(m, scenes, s, 5).aggregate == task2_missing_object(m, reversed, s, 5).aggregate);
    CHECK(task3_out_of_context(m, scenes, s, 5).aggregate == task3_out_of_context(m, reversed, s, 5).aggregate);
    CHECK(task1_relation_estimation(m, scenes, s, 5).aggregate ==
          task1_relation_estimation(m, reversed, s, 5).aggregate);
  }

  SUBCASE("network and data must agree on V") {
    const NetworkConfig other = triway_config(31, 4, 4, 2);
    const Model wrong{other, zero_params(other)};
    CHECK_THROWS_AS(task1_relation_estimation(wrong, scenes, s, 1), ValidationError);
    CHECK_THROWS_AS(task2_missing_object(wrong, scenes, s, 1), ValidationError);
    CHECK_THROWS_AS(task3_out_of_context(wrong, scenes, s, 1), ValidationError);
  }

  SUBCASE("report formats") {
    const TaskReport r = task1_relation_estimation(m, scenes, s, 5);
    const auto j = report_to_json(r);
    CHECK(j["task"] == 1);
    CHECK(j["chance"] == r.chance);
    CHECK(j["records"].size() == scenes.size());
    const std::string csv = report_to_csv(r);
    CHECK(csv.rfind("scene_id,numerator,denominator,skipped\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(scenes.size() + 1));
    const std::string text = report_to_text(r);
    CHECK(text.find("chance") != std::string::npos);
    CHECK(text.find("0.000277778") != std::string::npos);
  }
}

TEST_CASE("task 4: generation") {
  SUBCASE("generated scenes only relate active objects") {
    const NetworkConfig c = triway_config(5, 4, 3, 2);
    Rng rng(9);
    Model m{c, init_params(c, rng)};
    for (double& w : m.params.w_rh.values()) w *= 500.0;
    SceneVector partial(5);
    partial.add_object(0);
    const GenerationReport r = task4_complete(m, partial, quick_settings(), 1, 20);
    CHECK(r.generations.size() == 20);
    for (const auto& g : r.generations) {
      CHECK(g.scene.has_object(0));
      for (std::size_t rel : g.scene.relations()) {
        const RelationId id = RelationId::from_flat(rel, 5);
        CHECK(g.scene.has_object(id.subject));
        CHECK(g.scene.has_object(id.object));
      }
    }
  }

  SUBCASE("a null model produces noise") {
    SynthSpec spec = synth_spec_from_json(read_json_file(SCENEBM_CONFIG_DIR "/fixture_synth.json"));
    const SynthResult data = synth_generate(spec);
    const NetworkConfig c = triway_config(30, 4, 4, 2);
    const Model m{c, zero_params(c)};
    const std::vector<NodeRef> none;
    const GenerationReport r = task4_generate(m, none, quick_settings(), 2, 50, &data.motifs, "office");
    double objects = 0.0;
    for (const auto& g : r.generations) objects += static_cast<double>(g.scene.objects().size());
    CHECK(objects / 50.0 == doctest::Approx(15.0).epsilon(0.1));
    // About 30 of 3600 relation nodes are motifs of some category.
    CHECK(r.motif_precision < 0.05);
  }

  SUBCASE("a trained category unit reproduces its motifs") {
    SynthSpec spec;
    spec.object_labels = {"desk", "monitor", "keyboard", "chair", "lamp", "bed"};
    spec.categories = {{"office",
                        {{"desk", 0.95}, {"monitor", 0.9}, {"keyboard", 0.8}, {"chair", 0.5}},
                        {{"on_top", "monitor", "desk"}, {"on_top", "keyboard", "desk"}, {"left", "chair", "desk"}}}};
    spec.noise_rate = 0.02;
    spec.scenes_per_category = 60;
    spec.seed = 6;
    const SynthResult data = synth_generate(spec);
    const auto scenes = encode_all(data.scenes, data.vocabulary);
    NetworkConfig c = triway_config(6, 4, 8, 4);
    c.seed = 6;
    HyperParams h;
    h.batch_size = 8;
    h.max_epochs = 30;
    h.patience = 30;
    h.seed = 6;
    const Model m = train(init_model(c), scenes, scenes, h).model;
    SamplerSettings s;
    const NodeRef unit = select_category_unit(m, scenes, "office", s, 1);
    CHECK(unit.kind == NodeKind::hidden1);
    const GenerationReport r =
        task4_generate(m, std::span<const NodeRef>(&unit, 1), s, 3, 100, &data.motifs, "office");
    INFO("motif rate " << r.motif_rate);
    CHECK(r.motif_rate >= 0.8);
    const auto j = generation_to_json(r, data.vocabulary);
    CHECK(j["generations"].size() == 100);
  }
}

TEST_CASE("task 4: category context on the trained fixture") {
  const auto scenes = fixture_scenes();
  const DatasetSplit split = split_dataset(scenes, {}, 7);
  SynthSpec spec = synth_spec_from_json(read_json_file(SCENEBM_CONFIG_DIR "/fixture_synth.json"));
  const SynthResult data = synth_generate(spec);
  const nlohmann::json run = read_json_file(SCENEBM_CONFIG_DIR "/fixture_run.json");
  NetworkConfig c = triway_config(30, 4, 40, 20);
  c.use_biases = true;
  c.seed = 1;
  HyperParams h = hyper_from_json(run["hyper"]);
  h.seed = 1;
  const Model m = train(init_model(c), split.train, split.validation, h).model;
  const SamplerSettings s;

  SUBCASE("context units are those above the threshold") {
    const std::vector<double> mean = category_activation(m, split.train, "kitchen", s, 1);
    const std::vector<NodeRef> units = select_category_context(m, split.train, "kitchen", s, 1);
    std::size_t above = 0;
    for (double x : mean) above += x > 0.5 ? 1 : 0;
    CHECK(units.size() == above);
    for (const NodeRef& u : units) CHECK(mean[u.index] > 0.5);
    const std::vector<NodeRef> fallback = select_category_context(m, split.train, "kitchen", s, 1, 2.0);
    REQUIRE(fallback.size() == 1);
    CHECK(fallback[0] == select_category_unit(m, split.train, "kitchen", s, 1));
    CHECK_THROWS_AS(category_activation(m, split.train, "garage", s, 1), ValidationError);
  }

  SUBCASE("every category reproduces its motifs") {
    for (const auto& cat : spec.categories) {
      const std::vector<NodeRef> units = select_category_context(m, split.train, cat.name, s, 1);
      const GenerationReport r = task4_generate(m, units, s, 3, 100, &data.motifs, cat.name, 1, HiddenRest::off);
      INFO(cat.name << " motif rate " << r.motif_rate);
      CHECK(r.motif_rate >= 0.8);
    }
  }
}

TEST_CASE("comparison harness") {
  const auto all = fixture_scenes();
  const DatasetSplit split = split_dataset(all, {}, 7);
  DatasetSplit small;
  small.train.assign(split.train.begin(), split.train.begin() + 40);
  small.validation.assign(split.validation.begin(), split.validation.begin() + 10);
  small.test.assign(split.test.begin(), split.test.begin() + 10);
  HyperParams h;
  h.max_epochs = 2;
  h.k_pos = 1;
  SamplerSettings s = quick_settings();
  const std::vector<NetworkConfig> configs = {rbm_config(30, 4, 4)};
  const std::vector<std::uint64_t> seeds = {1};
  const Comparison cmp = compare_models(configs, small, h, s, seeds);
  CHECK(cmp.models == std::vector<std::string>{"RBM"});
  CHECK(cmp.runs.size() == 1);
  CHECK(cmp.run("RBM", 1).history.epochs.size() == 2);
  const std::string text = comparison_to_text(cmp);
  CHECK(text.find("chance") != std::string::npos);
  CHECK(text.find("RBM") != std::string::npos);
  const std::string csv = comparison_to_csv(cmp);
  CHECK(csv.find("chance") != std::string::npos);
  CHECK(comparison_to_json(cmp)["runs"].size() == 1);
}
