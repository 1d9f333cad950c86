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

#ifndef SCENEBM_TRAINER_HPP
#define SCENEBM_TRAINER_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "scenebm/edge_stats.hpp"
#include "scenebm/model.hpp"
#include "scenebm/sampler.hpp"
#include "scenebm/split.hpp"

namespace scenebm {

struct HyperParams {
  double learning_rate = 0.5;
  // Rate for the shared tri-way weights; learning_rate when unset.
  std::optional<double> tri_learning_rate;
  std::size_t batch_size = 32;
  std::size_t k_pos = 5;
  std::size_t k_cd = 1;
  std::size_t max_epochs = 50;
  std::size_t patience = 3;
  std::uint64_t seed = 0;
  bool use_probabilities = true;
  ObjectOrder order = ObjectOrder::sequential_random;
  // Start object and relation biases at the log-odds of their training
  // frequency, clipped to [bias_floor, 1 - bias_floor]. Needs use_biases.
  bool data_bias_init = false;
  double bias_floor = 1e-3;

  void validate() const;
  double tri_rate() const { return tri_learning_rate.value_or(learning_rate); }
};

nlohmann::json hyper_to_json(const HyperParams& hyper);
HyperParams hyper_from_json(const nlohmann::json& j);

struct ReconstructionError {
  double objects = 0.0;
  double relations = 0.0;
};

// Mean over samples of sum_j (p(x_j+) - p(x_j-))^2, kept separately for
// object nodes and relation nodes.
ReconstructionError reconstruction_error(std::span<const SceneVector> clamped,
                                         std::span<const NodeProbabilities> reconstructed);

struct EpochRecord {
  std::size_t epoch = 0;
  double obj_err = 0.0;
  double rel_err = 0.0;
  double val_obj_err = 0.0;
  double val_rel_err = 0.0;
  double val_err = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_val_err = std::numeric_limits<double>::infinity();
  std::size_t stop_epoch = 0;
  bool early_stopped = false;
};

nlohmann::json history_to_json(const TrainHistory& history);
TrainHistory history_from_json(const nlohmann::json& j);
// One JSON object per line: {"epoch", "obj_err", "rel_err", "val_err", ...}.
std::string epoch_log_line(const EpochRecord& record);

// Outcome of the two phases for one training scene.
struct PhaseResult {
  NodeProbabilities positive;
  NodeProbabilities negative;
  ReconstructionError error;
};

// Positive phase: clamp v and r, k_pos hidden sweeps. Negative phase: k_cd
// negative-phase steps from there, then one hidden sweep for the hidden
// statistics.
PhaseResult run_phases(const Model& model, const SceneVector& scene, const HyperParams& hyper, Rng& rng);

// Applies one batch update. The reduction runs in ascending scene index and
// every scene draws from its own stream keyed by (seed, index, epoch), so
// the order of `batch` does not affect the result. Returns the per-scene
// reconstruction errors in ascending index order.
std::vector<ReconstructionError> train_batch(Model& model, std::span<const EncodedScene> batch,
                                             std::size_t epoch, const HyperParams& hyper, unsigned threads = 1);

// Mean reconstruction error of `scenes` under the current weights.
ReconstructionError evaluate_reconstruction(const Model& model, std::span<const EncodedScene> scenes,
                                            std::size_t epoch, const HyperParams& hyper, unsigned threads = 1);

// Object and relation biases set to log(p / (1 - p)) of their frequency in
// `scenes`, p clipped to [floor, 1 - floor].
void init_visible_biases(Model& model, std::span<const EncodedScene> scenes, double floor);

struct TrainOptions {
  unsigned threads = 1;
  std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainResult {
  Model model;  // weights of the best validation epoch
  TrainHistory history;
};

// Mini-batch contrastive training with early stopping on the validation
// reconstruction error (objects + relations). With data_bias_init a fresh
// run first calls init_visible_biases on the training set. When `resume` is given the
// epoch count, best error and patience continue from it and `initial` is
// taken as the best weights so far.
TrainResult train(const Model& initial, std::span<const EncodedScene> train_set,
                  std::span<const EncodedScene> validation_set, const HyperParams& hyper,
                  const TrainOptions& options = {}, const TrainHistory* resume = nullptr);

}  // namespace scenebm

#endif  // SCENEBM_TRAINER_HPP
