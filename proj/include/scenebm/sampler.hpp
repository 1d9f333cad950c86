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

#ifndef SCENEBM_SAMPLER_HPP
#define SCENEBM_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <span>

#include "scenebm/model.hpp"
#include "scenebm/scene.hpp"

namespace scenebm {

// Which nodes are held fixed. Visible nodes are held at whatever value the
// state carries; clamped hidden units carry their forced value here.
struct ClampMask {
  std::vector<std::uint8_t> objects;
  std::vector<std::uint8_t> relations;
  std::vector<std::int8_t> hidden1;  // -1 free, 0 or 1 forced
  std::vector<std::int8_t> hidden2;

  static ClampMask none(const NetworkConfig& config);
  // Every object and relation node clamped, hidden free.
  static ClampMask visibles(const NetworkConfig& config);
  static ClampMask objects_only(const NetworkConfig& config);

  // Writes forced hidden values into the state.
  void apply(NetworkState& state) const;
  void check_shape(const NetworkConfig& config) const;
};

enum class ObjectOrder {
  sequential_random,  // exact Gibbs over the coupled object nodes
  parallel_block,     // all objects from the same snapshot; approximate
};

std::string_view to_string(ObjectOrder order);
ObjectOrder parse_object_order(std::string_view name);

// Geometric temperature schedule from t_start to t_end over the settle
// sweeps.
struct Anneal {
  double t_start = 2.0;
  double t_end = 0.5;
};

struct SamplerSettings {
  std::size_t k_pos = 5;
  std::size_t k_cd = 1;
  std::size_t settle_sweeps = 50;
  double temperature = 1.0;
  std::optional<Anneal> anneal;
  ObjectOrder order = ObjectOrder::sequential_random;

  void validate() const;
  // Temperature of settle sweep `sweep` out of settle_sweeps.
  double temperature_at(std::size_t sweep) const;
};

NetworkState state_from_scene(const NetworkConfig& config, const SceneVector& scene);

// h1 from (v, r, h2), then h2 from h1. Units within a layer are sampled in
// parallel. Records prob.h1 and prob.h2.
void sweep_hidden(const Model& model, NetworkState& state, const ClampMask& mask, Rng& rng,
                  double temperature);

// One negative-phase step: sweep_hidden, then free objects given (h1, r),
// then free relations given the new objects and h1. Records all
// probabilities. Under RelationSupport::active_pairs a free relation whose
// endpoints are not both active is set to 0 with probability 0.
void negative_phase_step(const Model& model, NetworkState& state, const ClampMask& mask, Rng& rng,
                         double temperature, ObjectOrder order = ObjectOrder::sequential_random);

struct Completion {
  NetworkState state;
  // Averaged over the last ceil(settle_sweeps / 2) sweeps.
  NodeProbabilities probabilities;
};

// Runs settle_sweeps negative-phase steps from `initial` under `mask`.
Completion conditional_complete(const Model& model, NetworkState initial, const ClampMask& mask,
                                const SamplerSettings& settings, Rng& rng);
Completion conditional_complete(const Model& model, const SceneVector& partial, const ClampMask& mask,
                                const SamplerSettings& settings, Rng& rng);

// What happens to the hidden units that are not listed for generation.
enum class HiddenRest {
  free,  // sampled like every other free node
  off,   // clamped to 0
};

// Clamps the listed hidden units to 1 with everything else starting at 0,
// then settles. An empty list with HiddenRest::free gives a free-running
// sample.
Completion generate_from_hidden(const Model& model, std::span<const NodeRef> hidden,
                                const SamplerSettings& settings, Rng& rng, HiddenRest rest = HiddenRest::free);

}  // namespace scenebm

#endif  // SCENEBM_SAMPLER_HPP
