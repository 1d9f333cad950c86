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

#include "scenebm/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scenebm {

using nlohmann::json;

namespace {

constexpr std::uint64_t kTrainPhase = 1;
constexpr std::uint64_t kValidationPhase = 2;
constexpr std::uint64_t kShufflePhase = 3;

ReconstructionError sample_error(const SceneVector& clamped, const NodeProbabilities& recon) {
  ReconstructionError e;
  std::vector<std::uint8_t> v(clamped.label_count(), 0);
  for (std::size_t j : clamped.objects()) v[j] = 1;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double d = v[j] - recon.v[j];
    e.objects += d * d;
  }
  std::vector<std::uint8_t> r(clamped.relation_count(), 0);
  for (std::size_t rel : clamped.relations()) r[rel] = 1;
  for (std::size_t rel = 0; rel < r.size(); ++rel) {
    const double d = r[rel] - recon.r[rel];
    e.relations += d * d;
  }
  return e;
}

}  // namespace

void HyperParams::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("hyper: learning_rate must be finite and >= 0");
  }
  if (tri_learning_rate && (!(*tri_learning_rate >= 0.0) || !std::isfinite(*tri_learning_rate))) {
    throw ValidationError("hyper: tri_learning_rate must be finite and >= 0");
  }
  if (batch_size < 1) throw ValidationError("hyper: batch_size must be >= 1");
  if (k_pos < 1 || k_cd < 1) throw ValidationError("hyper: k_pos and k_cd must be >= 1");
  if (patience < 1) throw ValidationError("hyper: patience must be >= 1");
  if (!(bias_floor > 0.0 && bias_floor < 0.5)) throw ValidationError("hyper: bias_floor must lie in (0, 0.5)");
}

json hyper_to_json(const HyperParams& h) {
  return {{"learning_rate", h.learning_rate},
          {"tri_learning_rate", h.tri_learning_rate ? json(*h.tri_learning_rate) : json(nullptr)},
          {"batch_size", h.batch_size},
          {"k_pos", h.k_pos},                 {"k_cd", h.k_cd},
          {"max_epochs", h.max_epochs},       {"patience", h.patience},
          {"seed", h.seed},                   {"use_probabilities", h.use_probabilities},
          {"order", std::string(to_string(h.order))},
          {"data_bias_init", h.data_bias_init},
          {"bias_floor", h.bias_floor}};
}

HyperParams hyper_from_json(const json& j) {
  HyperParams h;
  try {
    h.learning_rate = j.value("learning_rate", h.learning_rate);
    if (j.contains("tri_learning_rate") && !j.at("tri_learning_rate").is_null()) {
      h.tri_learning_rate = j.at("tri_learning_rate").get<double>();
    }
    h.batch_size = j.value("batch_size", h.batch_size);
    h.k_pos = j.value("k_pos", h.k_pos);
    h.k_cd = j.value("k_cd", h.k_cd);
    h.max_epochs = j.value("max_epochs", h.max_epochs);
    h.patience = j.value("patience", h.patience);
    h.seed = j.value("seed", h.seed);
    h.use_probabilities = j.value("use_probabilities", h.use_probabilities);
    h.order = parse_object_order(j.value("order", std::string(to_string(h.order))));
    h.data_bias_init = j.value("data_bias_init", h.data_bias_init);
    h.bias_floor = j.value("bias_floor", h.bias_floor);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("hyper: ") + e.what());
  }
  h.validate();
  return h;
}

ReconstructionError reconstruction_error(std::span<const SceneVector> clamped,
                                         std::span<const NodeProbabilities> reconstructed) {
  if (clamped.size() != reconstructed.size()) {
    throw ValidationError("reconstruction_error: sample counts differ");
  }
  ReconstructionError total;
  if (clamped.empty()) return total;
  for (std::size_t i = 0; i < clamped.size(); ++i) {
    if (reconstructed[i].v.size() != clamped[i].label_count() ||
        reconstructed[i].r.size() != clamped[i].relation_count()) {
      throw ValidationError("reconstruction_error: shapes differ");
    }
    const ReconstructionError e = sample_error(clamped[i], reconstructed[i]);
    total.objects += e.objects;
    total.relations += e.relations;
  }
  const double n = static_cast<double>(clamped.size());
  return {total.objects / n, total.relations / n};
}

json history_to_json(const TrainHistory& h) {
  json epochs = json::array();
  for (const auto& e : h.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"obj_err", e.obj_err},
                      {"rel_err", e.rel_err},
                      {"val_obj_err", e.val_obj_err},
                      {"val_rel_err", e.val_rel_err},
                      {"val_err", e.val_err}});
  }
  json best = std::isfinite(h.best_val_err) ? json(h.best_val_err) : json(nullptr);
  return {{"epochs", epochs},
          {"best_epoch", h.best_epoch},
          {"best_val_err", best},
          {"stop_epoch", h.stop_epoch},
          {"early_stopped", h.early_stopped}};
}

TrainHistory history_from_json(const json& j) {
  TrainHistory h;
  if (j.is_null() || (j.is_object() && j.empty())) return h;
  try {
    for (const auto& e : j.at("epochs")) {
      h.epochs.push_back({e.at("epoch").get<std::size_t>(), e.at("obj_err").get<double>(),
                          e.at("rel_err").get<double>(), e.value("val_obj_err", 0.0), e.value("val_rel_err", 0.0),
                          e.at("val_err").get<double>()});
    }
    h.best_epoch = j.value("best_epoch", std::size_t{0});
    const auto& best = j.at("best_val_err");
    h.best_val_err = best.is_null() ? std::numeric_limits<double>::infinity() : best.get<double>();
    h.stop_epoch = j.value("stop_epoch", std::size_t{0});
    h.early_stopped = j.value("early_stopped", false);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("history: ") + e.what());
  }
  return h;
}

std::string epoch_log_line(const EpochRecord& e) {
  const json line = {{"epoch", e.epoch},       {"obj_err", e.obj_err},         {"rel_err", e.rel_err},
                     {"val_err", e.val_err},   {"val_obj_err", e.val_obj_err}, {"val_rel_err", e.val_rel_err}};
  return line.dump();
}

PhaseResult run_phases(const Model& model, const SceneVector& scene, const HyperParams& hyper, Rng& rng) {
  const NetworkConfig& c = model.config;
  const double T = c.temperature;
  NetworkState state = state_from_scene(c, scene);

  const ClampMask clamped = ClampMask::visibles(c);
  for (std::size_t k = 0; k < hyper.k_pos; ++k) sweep_hidden(model, state, clamped, rng, T);
  state.prob.v.assign(state.v.begin(), state.v.end());
  state.prob.r.assign(state.r.begin(), state.r.end());
  PhaseResult out;
  out.positive = node_values(state, hyper.use_probabilities);

  const ClampMask free = ClampMask::none(c);
  for (std::size_t k = 0; k < hyper.k_cd; ++k) negative_phase_step(model, state, free, rng, T, hyper.order);
  NodeProbabilities reconstruction{state.prob.v, state.prob.r, {}, {}};
  sweep_hidden(model, state, free, rng, T);
  out.negative = node_values(state, hyper.use_probabilities);
  out.error = sample_error(scene, reconstruction);
  return out;
}

namespace {

std::vector<std::size_t> index_order(std::span<const EncodedScene> scenes) {
  std::vector<std::size_t> order(scenes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scenes[a].index < scenes[b].index;
  });
  return order;
}

std::vector<PhaseResult> phases_for(const Model& model, std::span<const EncodedScene> scenes,
                                    std::span<const std::size_t> order, std::size_t epoch,
                                    std::uint64_t phase, const HyperParams& hyper, unsigned threads) {
  std::vector<PhaseResult> results(order.size());
  parallel_for(order.size(), threads, [&](std::size_t i) {
    const EncodedScene& scene = scenes[order[i]];
    Rng rng = make_stream({hyper.seed, phase, scene.index, epoch});
    results[i] = run_phases(model, scene.vector, hyper, rng);
  });
  return results;
}

}  // namespace

std::vector<ReconstructionError> train_batch(Model& model, std::span<const EncodedScene> batch,
                                             std::size_t epoch, const HyperParams& hyper, unsigned threads) {
  if (batch.empty()) return {};
  const std::vector<std::size_t> order = index_order(batch);
  const std::vector<PhaseResult> results = phases_for(model, batch, order, epoch, kTrainPhase, hyper, threads);

  EdgeStats positive = EdgeStats::zeros(model.config);
  EdgeStats negative = EdgeStats::zeros(model.config);
  std::vector<ReconstructionError> errors;
  errors.reserve(results.size());
  for (const PhaseResult& r : results) {
    accumulate_phase_statistics(positive, model.config, r.positive);
    accumulate_phase_statistics(negative, model.config, r.negative);
    errors.push_back(r.error);
  }
  const double inv = 1.0 / static_cast<double>(results.size());
  positive *= inv;
  negative *= inv;
  apply_update(model, positive, negative, hyper.learning_rate, hyper.tri_rate());
  return errors;
}

ReconstructionError evaluate_reconstruction(const Model& model, std::span<const EncodedScene> scenes,
                                            std::size_t epoch, const HyperParams& hyper, unsigned threads) {
  ReconstructionError mean;
  if (scenes.empty()) return mean;
  const std::vector<std::size_t> order = index_order(scenes);
  const auto results = phases_for(model, scenes, order, epoch, kValidationPhase, hyper, threads);
  for (const PhaseResult& r : results) {
    mean.objects += r.error.objects;
    mean.relations += r.error.relations;
  }
  mean.objects /= static_cast<double>(results.size());
  mean.relations /= static_cast<double>(results.size());
  return mean;
}

void init_visible_biases(Model& model, std::span<const EncodedScene> scenes, double floor) {
  const NetworkConfig& c = model.config;
  if (!model.params.biases) throw ValidationError("init_visible_biases: the model has no biases");
  if (scenes.empty()) throw ValidationError("init_visible_biases: no scenes");
  std::vector<double> objects(c.V, 0.0);
  std::vector<double> relations(c.relation_count(), 0.0);
  for (const EncodedScene& s : scenes) {
    for (std::size_t j : s.vector.objects()) objects[j] += 1.0;
    for (std::size_t rel : s.vector.relations()) relations[rel] += 1.0;
  }
  const double n = static_cast<double>(scenes.size());
  auto log_odds = [&](double count) {
    const double p = std::clamp(count / n, floor, 1.0 - floor);
    return std::log(p / (1.0 - p));
  };
  for (std::size_t j = 0; j < c.V; ++j) model.params.biases->objects[j] = log_odds(objects[j]);
  for (std::size_t rel = 0; rel < relations.size(); ++rel) model.params.biases->relations[rel] = log_odds(relations[rel]);
}

TrainResult train(const Model& initial, std::span<const EncodedScene> train_set,
                  std::span<const EncodedScene> validation_set, const HyperParams& hyper,
                  const TrainOptions& options, const TrainHistory* resume) {
  hyper.validate();
  initial.validate();
  if (train_set.empty()) throw ValidationError("train: empty training set");
  if (validation_set.empty()) throw ValidationError("train: empty validation set");
  for (const auto* set : {&train_set, &validation_set}) {
    for (const EncodedScene& s : *set) {
      if (s.vector.label_count() != initial.config.V || s.vector.relation_types() != initial.config.Tc) {
        throw ValidationError("train: scene '" + s.scene_id + "' does not match the network size");
      }
    }
  }

  TrainResult result{initial, resume ? *resume : TrainHistory{}};
  TrainHistory& history = result.history;
  Model model = initial;
  if (hyper.data_bias_init && !(resume && !resume->epochs.empty())) {
    init_visible_biases(model, train_set, hyper.bias_floor);
    result.model = model;
  }
  std::size_t since_best = 0;
  if (resume && !history.epochs.empty()) since_best = history.epochs.back().epoch - history.best_epoch;
  const std::size_t first_epoch = history.epochs.empty() ? 1 : history.epochs.back().epoch + 1;
  const std::size_t last_epoch = first_epoch + hyper.max_epochs;  // exclusive
  history.early_stopped = false;

  std::vector<std::size_t> shuffled(train_set.size());
  for (std::size_t epoch = first_epoch; epoch < last_epoch; ++epoch) {
    std::iota(shuffled.begin(), shuffled.end(), 0);
    Rng shuffle_rng = make_stream({hyper.seed, kShufflePhase, epoch});
    std::shuffle(shuffled.begin(), shuffled.end(), shuffle_rng);

    EpochRecord record;
    record.epoch = epoch;
    std::vector<EncodedScene> batch;
    for (std::size_t start = 0; start < shuffled.size(); start += hyper.batch_size) {
      const std::size_t end = std::min(shuffled.size(), start + hyper.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(train_set[shuffled[i]]);
      std::vector<ReconstructionError> errors;
      try {
        errors = train_batch(model, batch, epoch, hyper, options.threads);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " during epoch " + std::to_string(epoch) +
                           " (last good epoch " + std::to_string(epoch - 1) + ")");
      }
      for (const auto& e : errors) {
        record.obj_err += e.objects;
        record.rel_err += e.relations;
      }
    }
    record.obj_err /= static_cast<double>(train_set.size());
    record.rel_err /= static_cast<double>(train_set.size());

    const ReconstructionError val = evaluate_reconstruction(model, validation_set, epoch, hyper, options.threads);
    record.val_obj_err = val.objects;
    record.val_rel_err = val.relations;
    record.val_err = val.objects + val.relations;
    history.epochs.push_back(record);
    history.stop_epoch = epoch;
    if (options.on_epoch) options.on_epoch(record);

    if (record.val_err < history.best_val_err) {
      history.best_val_err = record.val_err;
      history.best_epoch = epoch;
      result.model = model;
      since_best = 0;
    } else if (++since_best >= hyper.patience) {
      history.early_stopped = true;
      break;
    }
  }
  return result;
}

}  // namespace scenebm
