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

#include "scenebm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scenebm {

ClampMask ClampMask::none(const NetworkConfig& config) {
  ClampMask m;
  m.objects.assign(config.V, 0);
  m.relations.assign(config.relation_count(), 0);
  m.hidden1.assign(config.H1, -1);
  m.hidden2.assign(config.H2, -1);
  return m;
}

ClampMask ClampMask::visibles(const NetworkConfig& config) {
  ClampMask m = none(config);
  std::fill(m.objects.begin(), m.objects.end(), 1);
  std::fill(m.relations.begin(), m.relations.end(), 1);
  return m;
}

ClampMask ClampMask::objects_only(const NetworkConfig& config) {
  ClampMask m = none(config);
  std::fill(m.objects.begin(), m.objects.end(), 1);
  return m;
}

void ClampMask::check_shape(const NetworkConfig& config) const {
  if (objects.size() != config.V || relations.size() != config.relation_count() ||
      hidden1.size() != config.H1 || hidden2.size() != config.H2) {
    throw ValidationError("clamp mask shape does not match the config");
  }
}

void ClampMask::apply(NetworkState& state) const {
  for (std::size_t m = 0; m < hidden1.size(); ++m) {
    if (hidden1[m] >= 0) state.h1[m] = static_cast<std::uint8_t>(hidden1[m]);
  }
  for (std::size_t n = 0; n < hidden2.size(); ++n) {
    if (hidden2[n] >= 0) state.h2[n] = static_cast<std::uint8_t>(hidden2[n]);
  }
}

std::string_view to_string(ObjectOrder order) {
  return order == ObjectOrder::sequential_random ? "sequential_random" : "parallel_block";
}

ObjectOrder parse_object_order(std::string_view name) {
  if (name == "sequential_random") return ObjectOrder::sequential_random;
  if (name == "parallel_block") return ObjectOrder::parallel_block;
  throw ValidationError("unknown object order '" + std::string(name) + "'");
}

void SamplerSettings::validate() const {
  if (k_pos < 1 || k_cd < 1 || settle_sweeps < 1) {
    throw ValidationError("sampler: k_pos, k_cd and settle_sweeps must be >= 1");
  }
  if (!(temperature > 0.0)) throw ValidationError("sampler: temperature must be > 0");
  if (anneal) {
    if (!(anneal->t_end > 0.0) || !(anneal->t_start > 0.0)) {
      throw ValidationError("sampler: anneal temperatures must be > 0");
    }
    if (anneal->t_end > anneal->t_start) throw ValidationError("sampler: anneal needs t_end <= t_start");
  }
}

double SamplerSettings::temperature_at(std::size_t sweep) const {
  if (!anneal) return temperature;
  if (settle_sweeps <= 1) return anneal->t_end;
  const double frac = static_cast<double>(sweep) / static_cast<double>(settle_sweeps - 1);
  return anneal->t_start * std::pow(anneal->t_end / anneal->t_start, frac);
}

NetworkState state_from_scene(const NetworkConfig& config, const SceneVector& scene) {
  if (scene.label_count() != config.V || scene.relation_types() != config.Tc) {
    throw ValidationError("scene vector (V=" + std::to_string(scene.label_count()) +
                          ") does not match the network (V=" + std::to_string(config.V) + ")");
  }
  NetworkState state = NetworkState::zeros(config);
  for (std::size_t j : scene.objects()) state.v[j] = 1;
  for (std::size_t rel : scene.relations()) state.r[rel] = 1;
  return state;
}

void sweep_hidden(const Model& model, NetworkState& state, const ClampMask& mask, Rng& rng,
                  double temperature) {
  const NetworkConfig& c = model.config;
  mask.apply(state);
  state.prob.h1.resize(c.H1);
  state.prob.h2.resize(c.H2);

  const std::vector<double> in1 = hidden1_inputs(model, state);
  for (std::size_t m = 0; m < c.H1; ++m) {
    if (mask.hidden1[m] >= 0) {
      state.prob.h1[m] = state.h1[m];
      continue;
    }
    const double p = activation_prob(in1[m], temperature);
    state.prob.h1[m] = p;
    state.h1[m] = bernoulli(rng, p);
  }
  const std::vector<double> in2 = hidden2_inputs(model, state);
  for (std::size_t n = 0; n < c.H2; ++n) {
    if (mask.hidden2[n] >= 0) {
      state.prob.h2[n] = state.h2[n];
      continue;
    }
    const double p = activation_prob(in2[n], temperature);
    state.prob.h2[n] = p;
    state.h2[n] = bernoulli(rng, p);
  }
}

namespace {

void update_objects(const Model& model, NetworkState& state, const ClampMask& mask, Rng& rng,
                    double temperature, ObjectOrder order) {
  const std::size_t V = model.config.V;
  state.prob.v.resize(V);
  if (order == ObjectOrder::sequential_random) {
    std::vector<std::size_t> perm(V);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t j : perm) {
      if (mask.objects[j]) {
        state.prob.v[j] = state.v[j];
        continue;
      }
      const double p = activation_prob(object_input(model, state, j), temperature);
      state.prob.v[j] = p;
      state.v[j] = bernoulli(rng, p);
    }
    return;
  }
  std::vector<double> inputs(V);
  for (std::size_t j = 0; j < V; ++j) inputs[j] = object_input(model, state, j);
  for (std::size_t j = 0; j < V; ++j) {
    if (mask.objects[j]) {
      state.prob.v[j] = state.v[j];
      continue;
    }
    const double p = activation_prob(inputs[j], temperature);
    state.prob.v[j] = p;
    state.v[j] = bernoulli(rng, p);
  }
}

void update_relations(const Model& model, NetworkState& state, const ClampMask& mask, Rng& rng,
                      double temperature) {
  const NetworkConfig& c = model.config;
  const std::size_t V = c.V;
  const bool active_only = c.relation_support == RelationSupport::active_pairs;
  const std::vector<double> inputs = relation_inputs(model, state);
  state.prob.r.resize(c.relation_count());
  for (std::size_t rel = 0; rel < inputs.size(); ++rel) {
    if (mask.relations[rel]) {
      state.prob.r[rel] = state.r[rel];
      continue;
    }
    if (active_only) {
      const std::size_t j = (rel / V) % V;
      const std::size_t k = rel % V;
      if (!(state.v[j] && state.v[k])) {
        state.prob.r[rel] = 0.0;
        state.r[rel] = 0;
        continue;
      }
    }
    const double p = activation_prob(inputs[rel], temperature);
    state.prob.r[rel] = p;
    state.r[rel] = bernoulli(rng, p);
  }
}

void accumulate(std::vector<double>& acc, const std::vector<double>& x) {
  if (acc.size() != x.size()) acc.assign(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) acc[i] += x[i];
}

void scale(std::vector<double>& acc, double factor) {
  for (double& x : acc) x *= factor;
}

}  // namespace

void negative_phase_step(const Model& model, NetworkState& state, const ClampMask& mask, Rng& rng,
                         double temperature, ObjectOrder order) {
  sweep_hidden(model, state, mask, rng, temperature);
  update_objects(model, state, mask, rng, temperature, order);
  update_relations(model, state, mask, rng, temperature);
}

Completion conditional_complete(const Model& model, NetworkState initial, const ClampMask& mask,
                                const SamplerSettings& settings, Rng& rng) {
  settings.validate();
  initial.check_shape(model.config);
  mask.check_shape(model.config);
  Completion out{std::move(initial), {}};
  NetworkState& state = out.state;
  mask.apply(state);

  const std::size_t n = settings.settle_sweeps;
  const std::size_t tail = (n + 1) / 2;
  NodeProbabilities& avg = out.probabilities;
  for (std::size_t s = 0; s < n; ++s) {
    negative_phase_step(model, state, mask, rng, settings.temperature_at(s), settings.order);
    if (s >= n - tail) {
      accumulate(avg.v, state.prob.v);
      accumulate(avg.r, state.prob.r);
      accumulate(avg.h1, state.prob.h1);
      accumulate(avg.h2, state.prob.h2);
    }
  }
  const double inv = 1.0 / static_cast<double>(tail);
  scale(avg.v, inv);
  scale(avg.r, inv);
  scale(avg.h1, inv);
  scale(avg.h2, inv);
  return out;
}

Completion conditional_complete(const Model& model, const SceneVector& partial, const ClampMask& mask,
                                const SamplerSettings& settings, Rng& rng) {
  return conditional_complete(model, state_from_scene(model.config, partial), mask, settings, rng);
}

Completion generate_from_hidden(const Model& model, std::span<const NodeRef> hidden,
                                const SamplerSettings& settings, Rng& rng, HiddenRest rest) {
  const NetworkConfig& c = model.config;
  ClampMask mask = ClampMask::none(c);
  if (rest == HiddenRest::off) {
    std::fill(mask.hidden1.begin(), mask.hidden1.end(), 0);
    std::fill(mask.hidden2.begin(), mask.hidden2.end(), 0);
  }
  for (const NodeRef& node : hidden) {
    if (node.kind == NodeKind::hidden1 && node.index < c.H1) {
      mask.hidden1[node.index] = 1;
    } else if (node.kind == NodeKind::hidden2 && node.index < c.H2) {
      mask.hidden2[node.index] = 1;
    } else {
      throw ValidationError("generate_from_hidden: not a valid hidden unit");
    }
  }
  return conditional_complete(model, NetworkState::zeros(c), mask, settings, rng);
}

}  // namespace scenebm
