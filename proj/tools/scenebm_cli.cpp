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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "run_config.hpp"
#include "scenebm/checkpoint.hpp"
#include "scenebm/derive.hpp"
#include "scenebm/scene_io.hpp"
#include "scenebm/selfcheck.hpp"
#include "scenebm/svg_plot.hpp"
#include "scenebm/synth.hpp"
#include "scenebm/tasks.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scenebm;
using scenebm::cli::RunConfig;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "Run config JSON");
  sub->add_option("--seed", c.seed, "Seed override");
  sub->add_option("--out", c.out, "Output directory");
  sub->add_option("--threads", c.threads, "Worker threads (default: SCENEBM_THREADS or 1)");
}

RunConfig load_config(const Common& c) {
  if (c.config.empty()) return RunConfig{};
  return cli::load_run_config(c.config);
}

unsigned threads_of(const Common& c) {
  if (c.threads) return std::max(1u, *c.threads);
  return default_threads();
}

std::uint64_t seed_of(const Common& c, const RunConfig& config) { return c.seed ? *c.seed : config.seeds.front(); }

struct Dataset {
  Vocabulary vocab;
  std::vector<SceneInstance> scenes;
  std::optional<MotifTable> motifs;
  std::vector<EncodedScene> encoded;
};

Dataset load_dataset(const fs::path& dir) {
  Dataset d;
  d.vocab = vocabulary_from_json(read_json_file(dir / "vocabulary.json"));
  try {
    d.scenes = scenes_from_json(read_json_file(dir / "scenes.json"));
  } catch (const ValidationError& e) {
    throw ValidationError((dir / "scenes.json").string() + ": " + e.what());
  }
  if (fs::exists(dir / "motifs.json")) d.motifs = motifs_from_json(read_json_file(dir / "motifs.json"), d.vocab);
  d.encoded = encode_all(d.scenes, d.vocab);
  return d;
}

const char* kSplitNames[] = {"train", "test", "validation"};

DatasetSplit load_split(const Dataset& d, const fs::path& dir, const RunConfig& config) {
  if (!fs::exists(dir / "split_train.json")) return split_dataset(d.encoded, config.ratios, config.split_seed);
  DatasetSplit s;
  s.train = manifest_select(read_json_file(dir / "split_train.json"), d.encoded);
  s.test = manifest_select(read_json_file(dir / "split_test.json"), d.encoded);
  s.validation = manifest_select(read_json_file(dir / "split_validation.json"), d.encoded);
  return s;
}

const std::vector<EncodedScene>& pick_split(const DatasetSplit& s, const std::string& name) {
  if (name == "train") return s.train;
  if (name == "test") return s.test;
  if (name == "validation") return s.validation;
  throw ValidationError("unknown split '" + name + "' (expected train, test or validation)");
}

fs::path data_dir_of(const std::string& flag, const RunConfig& config) {
  return flag.empty() ? config.resolve(config.paths.data_dir) : fs::path(flag);
}

void check_vocabulary(const Model& model, const Vocabulary& vocab) {
  if (model.config.V != vocab.size()) {
    throw ValidationError("checkpoint has V=" + std::to_string(model.config.V) + " but the dataset vocabulary has " +
                          std::to_string(vocab.size()) + " labels");
  }
}

// synth

struct SynthArgs {
  Common common;
  std::string spec;
};

int cmd_synth(const SynthArgs& a) {
  const RunConfig config = load_config(a.common);
  const fs::path spec_path = a.spec.empty() ? config.resolve(config.paths.synth_spec) : fs::path(a.spec);
  if (spec_path.empty()) throw ValidationError("synth: no --spec and no paths.synth_spec in the config");
  SynthSpec spec = synth_spec_from_json(read_json_file(spec_path));
  if (a.common.seed) spec.seed = *a.common.seed;
  const SynthResult result = synth_generate(spec);
  const fs::path out = a.common.out.empty() ? config.resolve(config.paths.data_dir) : fs::path(a.common.out);
  write_json_file(out / "vocabulary.json", vocabulary_to_json(result.vocabulary));
  write_json_file(out / "scenes.json", scenes_to_json(result.scenes));
  write_json_file(out / "motifs.json", motifs_to_json(result.motifs, result.vocabulary));
  std::printf("synth: %zu scenes, %zu labels, %zu categories -> %s\n", result.scenes.size(), spec.label_count(),
              spec.category_count(), out.string().c_str());
  return 0;
}

// derive

struct DeriveArgs {
  Common common;
  std::string scenes;
  std::string thresholds;
};

int cmd_derive(const DeriveArgs& a) {
  DeriveThresholds th;
  if (!a.thresholds.empty()) th = thresholds_from_json(read_json_file(a.thresholds));
  th.validate();
  const auto scenes = scenes_from_json(read_json_file(a.scenes));
  std::vector<SceneInstance> derived;
  derived.reserve(scenes.size());
  std::size_t relations = 0;
  for (const auto& s : scenes) {
    try {
      derived.push_back(derive_relations(s, th));
    } catch (const ValidationError& e) {
      throw ValidationError(a.scenes + ": " + e.what());
    }
    relations += derived.back().relations.size();
  }
  const fs::path out = a.common.out.empty() ? fs::path("derived") : fs::path(a.common.out);
  write_json_file(out / "scenes.json", scenes_to_json(derived));
  std::printf("derive: %zu scenes, %zu raw relations -> %s\n", derived.size(), relations,
              (out / "scenes.json").string().c_str());
  return 0;
}

// encode

struct EncodeArgs {
  Common common;
  std::string data;
  std::optional<std::size_t> vocab_size;
};

void print_dimension(std::size_t V, std::size_t Tc) {
  NetworkConfig probe;
  probe.V = V;
  probe.Tc = Tc;
  std::printf("V=%zu Tc=%zu dimension=%zu task1_chance=%.6g\n", V, Tc, implied_dimension(V, Tc),
              chance_levels(probe).task1);
}

int cmd_encode(const EncodeArgs& a) {
  if (a.vocab_size) {
    print_dimension(*a.vocab_size, kCanonicalRelationCount);
    return 0;
  }
  const RunConfig config = load_config(a.common);
  const fs::path dir = data_dir_of(a.data, config);
  const Dataset d = load_dataset(dir);
  const fs::path out = a.common.out.empty() ? dir : fs::path(a.common.out);
  write_json_file(out / "encoded.json", encoded_to_json(d.encoded, d.vocab));
  print_dimension(d.vocab.size(), kCanonicalRelationCount);
  return 0;
}

// split

struct SplitArgs {
  Common common;
  std::string data;
  std::vector<double> ratios;
};

int cmd_split(const SplitArgs& a) {
  RunConfig config = load_config(a.common);
  if (!a.ratios.empty()) config.ratios = {a.ratios[0], a.ratios[1], a.ratios[2]};
  if (a.common.seed) config.split_seed = *a.common.seed;
  config.ratios.validate();
  const fs::path dir = data_dir_of(a.data, config);
  const Dataset d = load_dataset(dir);
  const DatasetSplit s = split_dataset(d.encoded, config.ratios, config.split_seed);
  const fs::path out = a.common.out.empty() ? dir : fs::path(a.common.out);
  const std::vector<EncodedScene>* parts[] = {&s.train, &s.test, &s.validation};
  for (int i = 0; i < 3; ++i) {
    write_json_file(out / ("split_" + std::string(kSplitNames[i]) + ".json"), manifest_to_json(kSplitNames[i], *parts[i]));
  }
  std::printf("split: train %zu, test %zu, validation %zu -> %s\n", s.train.size(), s.test.size(),
              s.validation.size(), out.string().c_str());
  return 0;
}

// train

struct TrainArgs {
  Common common;
  std::string data;
  std::string resume;
  std::string model;
};

std::string history_log(const TrainHistory& history) {
  std::string out;
  for (const auto& e : history.epochs) out += epoch_log_line(e) + "\n";
  return out;
}

int cmd_train(const TrainArgs& a) {
  RunConfig config = load_config(a.common);
  const std::uint64_t seed = seed_of(a.common, config);
  const fs::path dir = data_dir_of(a.data, config);
  const Dataset d = load_dataset(dir);
  const DatasetSplit split = load_split(d, dir, config);

  fs::path ckpt_path = config.resolve(config.paths.checkpoint);
  if (!a.common.out.empty()) ckpt_path = fs::path(a.common.out) / "checkpoint.json";
  const fs::path out = ckpt_path.parent_path();

  HyperParams hyper = config.hyper;
  hyper.seed = seed;
  Model model;
  std::optional<TrainHistory> resume;
  if (!a.resume.empty()) {
    Checkpoint c = load_checkpoint(a.resume);
    check_vocabulary(c.model, d.vocab);
    model = c.model;
    resume = history_from_json(c.history);
  } else {
    NetworkConfig network = a.model.empty() ? config.network : cli::network_for(config, a.model, d.vocab.size());
    network.V = d.vocab.size();
    network.seed = seed;
    model = init_model(network);
  }

  std::vector<EpochRecord> done;
  if (resume) done = resume->epochs;
  TrainOptions options;
  options.threads = threads_of(a.common);
  options.on_epoch = [&](const EpochRecord& e) {
    done.push_back(e);
    std::printf("%s\n", epoch_log_line(e).c_str());
    std::fflush(stdout);
  };
  TrainResult result;
  try {
    result = train(model, split.train, split.validation, hyper, options, resume ? &*resume : nullptr);
  } catch (const NumericError& e) {
    TrainHistory partial;
    partial.epochs = done;
    write_text_file(out / "train_log.jsonl", history_log(partial));
    std::fprintf(stderr, "error: training diverged: %s\n", e.what());
    return 1;
  }

  Checkpoint c;
  c.model = result.model;
  c.history = history_to_json(result.history);
  save_checkpoint(c, ckpt_path);
  write_text_file(out / "train_log.jsonl", history_log(result.history));
  write_text_file(out / "training_curve.svg", training_curve_svg(result.history));
  std::printf("train: %s, %zu epochs, best epoch %zu (val %.6f) -> %s\n", model_label(result.model.config).c_str(),
              result.history.epochs.size(), result.history.best_epoch, result.history.best_val_err,
              ckpt_path.string().c_str());
  return 0;
}

// eval / generate

struct EvalArgs {
  Common common;
  std::string data;
  std::string checkpoint;
  std::optional<int> task;
  std::string split = "test";
  std::string category;
  std::size_t count = 10;
  bool single_unit = false;
};

struct Loaded {
  RunConfig config;
  Dataset data;
  DatasetSplit split;
  Model model;
};

Loaded load_for_eval(const EvalArgs& a) {
  Loaded l;
  l.config = load_config(a.common);
  const fs::path dir = data_dir_of(a.data, l.config);
  const fs::path ckpt = a.checkpoint.empty() ? l.config.resolve(l.config.paths.checkpoint) : fs::path(a.checkpoint);
  l.model = load_checkpoint(ckpt).model;
  l.data = load_dataset(dir);
  check_vocabulary(l.model, l.data.vocab);
  l.split = load_split(l.data, dir, l.config);
  return l;
}

fs::path report_dir_of(const Common& c, const RunConfig& config) {
  return c.out.empty() ? config.resolve(config.paths.report_dir) : fs::path(c.out);
}

json generation_json(const Loaded& l, const GenerationReport& report, const std::vector<NodeRef>& units,
                     bool single, std::uint64_t seed) {
  json j = generation_to_json(report, l.data.vocab);
  json ids = json::array();
  for (const NodeRef& u : units) ids.push_back(u.index);
  j["hidden_units"] = ids;
  j["other_hidden"] = single ? "free" : "off";
  j["seed"] = seed;
  return j;
}

std::string generation_text(const GenerationReport& report, const std::vector<NodeRef>& units, bool single) {
  std::string ids;
  for (const NodeRef& u : units) ids += (ids.empty() ? "" : ",") + std::to_string(u.index);
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "Task 4 generation, %s, category %s, hidden units %s (others %s)\n"
                "samples %zu  motif rate %.4f  motif precision %.4f\n",
                report.model.c_str(), report.category.c_str(), ids.c_str(), single ? "free" : "off",
                report.generations.size(), report.motif_rate, report.motif_precision);
  return buf;
}

int run_generation(const EvalArgs& a, const Loaded& l, const fs::path& out, const std::string& stem) {
  if (a.category.empty()) throw ValidationError("generation needs --category");
  const std::uint64_t seed = seed_of(a.common, l.config);
  std::vector<NodeRef> units;
  if (a.single_unit) {
    units.push_back(select_category_unit(l.model, l.split.train, a.category, l.config.sampler, seed));
  } else {
    units = select_category_context(l.model, l.split.train, a.category, l.config.sampler, seed);
  }
  const GenerationReport report =
      task4_generate(l.model, units, l.config.sampler, seed, a.count, l.data.motifs ? &*l.data.motifs : nullptr,
                     a.category, threads_of(a.common), a.single_unit ? HiddenRest::free : HiddenRest::off);
  const json j = generation_json(l, report, units, a.single_unit, seed);
  const std::string text = generation_text(report, units, a.single_unit);
  write_json_file(out / (stem + ".json"), j);
  write_text_file(out / (stem + ".txt"), text);
  std::printf("%s", text.c_str());
  return 0;
}

int cmd_eval(const EvalArgs& a) {
  const Loaded l = load_for_eval(a);
  const int task = a.task ? *a.task : l.config.task;
  if (task < 1 || task > 4) throw ValidationError("--task must be 1, 2, 3 or 4");
  const fs::path out = report_dir_of(a.common, l.config);
  if (task == 4) return run_generation(a, l, out, "task4");

  const auto& scenes = pick_split(l.split, a.split);
  const std::uint64_t seed = seed_of(a.common, l.config);
  const unsigned threads = threads_of(a.common);
  TaskReport report;
  if (task == 1) report = task1_relation_estimation(l.model, scenes, l.config.sampler, seed, threads);
  if (task == 2) report = task2_missing_object(l.model, scenes, l.config.sampler, seed, threads);
  if (task == 3) report = task3_out_of_context(l.model, scenes, l.config.sampler, seed, threads);
  const std::string stem = "task" + std::to_string(task);
  const std::string text = report_to_text(report);
  write_json_file(out / (stem + ".json"), report_to_json(report));
  write_text_file(out / (stem + ".csv"), report_to_csv(report));
  write_text_file(out / (stem + ".txt"), text);
  std::printf("%s", text.c_str());
  return 0;
}

int cmd_generate(const EvalArgs& a) {
  const Loaded l = load_for_eval(a);
  const fs::path out = a.common.out.empty() ? l.config.resolve(l.config.paths.report_dir) : fs::path(a.common.out);
  return run_generation(a, l, out, "generation");
}

// oracle-check

int cmd_oracle_check(const Common& c) {
  const auto results = run_all_checks(c.seed ? *c.seed : 1);
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%s\n", format_check(r).c_str());
    ok = ok && r.passed;
  }
  std::printf("oracle-check: %s\n", ok ? "all checks passed" : "FAILED");
  return ok ? 0 : 1;
}

// inspect

struct InspectArgs {
  Common common;
  std::string checkpoint;
  std::string data;
};

double rms(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s / static_cast<double>(values.size()));
}

int cmd_inspect(const InspectArgs& a) {
  if (a.checkpoint.empty() && a.data.empty()) throw ValidationError("inspect needs --checkpoint or --data");
  if (!a.checkpoint.empty()) {
    const Checkpoint c = load_checkpoint(a.checkpoint);
    const NetworkConfig& n = c.model.config;
    const ModelParams& p = c.model.params;
    std::printf("model %s  V=%zu Tc=%zu H1=%zu H2=%zu  rh_sharing=%s support=%s biases=%s T=%g seed=%llu\n",
                model_label(n).c_str(), n.V, n.Tc, n.H1, n.H2, std::string(to_string(n.rh_sharing)).c_str(),
                std::string(to_string(n.relation_support)).c_str(), n.use_biases ? "on" : "off", n.temperature,
                static_cast<unsigned long long>(n.seed));
    std::printf("rms  W_hv %.6f  W_rh %.6f  W_12 %.6f\n", rms(p.w_hv.values()), rms(p.w_rh.values()),
                rms(p.w_12.values()));
    if (!p.w_tri.empty()) {
      std::printf("w_tri");
      for (std::size_t t = 0; t < p.w_tri.size(); ++t) {
        std::printf("  %s %.6f", std::string(canonical_name(t)).c_str(), p.w_tri[t]);
      }
      std::printf("\n");
    }
    const TrainHistory h = history_from_json(c.history);
    if (!h.epochs.empty()) {
      std::printf("history: %zu epochs, best epoch %zu, best val %.6f%s\n", h.epochs.size(), h.best_epoch,
                  h.best_val_err, h.early_stopped ? ", early stopped" : "");
    }
  }
  if (!a.data.empty()) {
    const Dataset d = load_dataset(a.data);
    std::map<std::string, std::size_t> per_category;
    std::size_t objects = 0;
    std::size_t relations = 0;
    for (const auto& e : d.encoded) {
      ++per_category[e.category];
      objects += e.vector.objects().size();
      relations += e.vector.relations().size();
    }
    const double n = d.encoded.empty() ? 1.0 : static_cast<double>(d.encoded.size());
    std::printf("dataset: %zu scenes, V=%zu, dimension %zu, mean %.2f objects and %.2f relations per scene\n",
                d.encoded.size(), d.vocab.size(), implied_dimension(d.vocab.size(), kCanonicalRelationCount),
                static_cast<double>(objects) / n, static_cast<double>(relations) / n);
    for (const auto& [category, count] : per_category) std::printf("  %-16s %zu\n", category.c_str(), count);
  }
  return 0;
}

// compare

struct CompareArgs {
  Common common;
  std::string data;
};

int cmd_compare(const CompareArgs& a) {
  RunConfig config = load_config(a.common);
  if (a.common.seed) config.seeds = {*a.common.seed};
  const fs::path dir = data_dir_of(a.data, config);
  const Dataset d = load_dataset(dir);
  const DatasetSplit split = load_split(d, dir, config);
  std::vector<NetworkConfig> configs;
  for (const auto& m : config.models) configs.push_back(cli::network_for(config, m, d.vocab.size()));
  CompareOptions options;
  options.threads = threads_of(a.common);
  options.on_run = [](const ModelRun& r) {
    std::printf("%-7s seed %llu  task1 %.4f  task2 %.4f  task3 %.4f  (%zu epochs)\n", r.model.c_str(),
                static_cast<unsigned long long>(r.seed), r.task1.aggregate, r.task2.aggregate, r.task3.aggregate,
                r.history.epochs.size());
    std::fflush(stdout);
  };
  const Comparison cmp = compare_models(configs, split, config.hyper, config.sampler, config.seeds, options);
  const fs::path out = report_dir_of(a.common, config);
  const std::string text = comparison_to_text(cmp);
  write_json_file(out / "comparison.json", comparison_to_json(cmp));
  write_text_file(out / "comparison.csv", comparison_to_csv(cmp));
  write_text_file(out / "comparison.txt", text);
  for (const auto& r : cmp.runs) {
    write_text_file(out / ("curve_" + r.model + "_" + std::to_string(r.seed) + ".svg"), training_curve_svg(r.history));
  }
  std::printf("%s", text.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scenebm: Boltzmann machines over objects and spatial relations"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s_synth = app.add_subcommand("synth", "Generate a synthetic scene dataset");
  add_common(s_synth, synth.common);
  s_synth->add_option("--spec", synth.spec, "Synthetic dataset spec JSON");

  DeriveArgs derive;
  auto* s_derive = app.add_subcommand("derive", "Derive spatial relations from 3D boxes");
  add_common(s_derive, derive.common);
  s_derive->add_option("--scenes", derive.scenes, "Scenes JSON with boxes")->required();
  s_derive->add_option("--thresholds", derive.thresholds, "Threshold JSON");

  EncodeArgs encode;
  auto* s_encode = app.add_subcommand("encode", "Encode scenes as label-level binary vectors");
  add_common(s_encode, encode.common);
  s_encode->add_option("--data", encode.data, "Dataset directory");
  s_encode->add_option("--vocab-size", encode.vocab_size, "Only report the vector length for V labels");

  SplitArgs split;
  auto* s_split = app.add_subcommand("split", "Stratified train/test/validation split");
  add_common(s_split, split.common);
  s_split->add_option("--data", split.data, "Dataset directory");
  s_split->add_option("--ratios", split.ratios, "Train, test and validation fractions")->expected(3);

  TrainArgs trainer;
  auto* s_train = app.add_subcommand("train", "Train a model");
  add_common(s_train, trainer.common);
  s_train->add_option("--data", trainer.data, "Dataset directory");
  s_train->add_option("--resume", trainer.resume, "Continue from a checkpoint");
  s_train->add_option("--model", trainer.model, "RBM, GBM or Triway (default: the config network)");

  EvalArgs eval;
  auto* s_eval = app.add_subcommand("eval", "Run a reasoning task on a checkpoint");
  add_common(s_eval, eval.common);
  s_eval->add_option("--data", eval.data, "Dataset directory");
  s_eval->add_option("--checkpoint", eval.checkpoint, "Checkpoint JSON");
  s_eval->add_option("--task", eval.task, "1, 2, 3 or 4");
  s_eval->add_option("--split", eval.split, "train, test or validation");
  s_eval->add_option("--category", eval.category, "Scene category for task 4");
  s_eval->add_option("--count", eval.count, "Samples for task 4");
  s_eval->add_flag("--single-unit", eval.single_unit, "Task 4: clamp only the most active unit, others free");

  EvalArgs gen;
  auto* s_gen = app.add_subcommand("generate", "Sample scenes from a category's hidden context");
  add_common(s_gen, gen.common);
  s_gen->add_option("--data", gen.data, "Dataset directory");
  s_gen->add_option("--checkpoint", gen.checkpoint, "Checkpoint JSON");
  s_gen->add_option("--category", gen.category, "Scene category")->required();
  s_gen->add_option("--count", gen.count, "Number of samples");
  s_gen->add_flag("--single-unit", gen.single_unit, "Clamp only the most active unit, others free");

  Common oracle;
  auto* s_oracle = app.add_subcommand("oracle-check", "Run the exact-enumeration self-checks");
  add_common(s_oracle, oracle);

  InspectArgs inspect;
  auto* s_inspect = app.add_subcommand("inspect", "Summarize a checkpoint or dataset");
  add_common(s_inspect, inspect.common);
  s_inspect->add_option("--checkpoint", inspect.checkpoint, "Checkpoint JSON");
  s_inspect->add_option("--data", inspect.data, "Dataset directory");

  CompareArgs compare;
  auto* s_compare = app.add_subcommand("compare", "Train RBM, GBM and Triway over seeds and score tasks 1-3");
  add_common(s_compare, compare.common);
  s_compare->add_option("--data", compare.data, "Dataset directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*s_synth) return cmd_synth(synth);
    if (*s_derive) return cmd_derive(derive);
    if (*s_encode) return cmd_encode(encode);
    if (*s_split) return cmd_split(split);
    if (*s_train) return cmd_train(trainer);
    if (*s_eval) return cmd_eval(eval);
    if (*s_gen) return cmd_generate(gen);
    if (*s_oracle) return cmd_oracle_check(oracle);
    if (*s_inspect) return cmd_inspect(inspect);
    if (*s_compare) return cmd_compare(compare);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
