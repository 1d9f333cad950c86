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

#ifndef SCENEBM_ORACLE_HPP
#define SCENEBM_ORACLE_HPP

#include <span>
#include <vector>

#include "scenebm/edge_stats.hpp"
#include "scenebm/model.hpp"
#include "scenebm/sampler.hpp"

namespace scenebm {

// Brute-force ground truth for tiny networks. Every function enumerates
// all joint states in lexicographic order (node 0 most significant, nodes
// ordered v, r, h1, h2) and throws NumericError when the network exceeds
// the limit.
struct TinyLimit {
  std::size_t max_total_nodes = 20;
};

// Visible configuration (objects and relations) of a tiny network. Unlike
// SceneVector it may carry relations between inactive objects.
struct VisibleState {
  std::vector<std::uint8_t> v;
  std::vector<std::uint8_t> r;
};

// log Z with Z = sum over states of exp(-E / T), by max-shifted log-sum-exp.
double log_partition_function(const Model& model, TinyLimit limit = {});
double partition_function(const Model& model, TinyLimit limit = {});

// p(x = 1) for every node under p ~ exp(-E / T). Clamped nodes take their
// value from `values` (hidden ones from the mask) and report it exactly.
NodeProbabilities exact_marginals(const Model& model, const ClampMask& mask, const NetworkState& values,
                                  TinyLimit limit = {});
NodeProbabilities exact_marginals(const Model& model, TinyLimit limit = {});

// Mean over the dataset of log p(v, r), hidden units summed out.
double exact_loglik(const Model& model, std::span<const VisibleState> data, TinyLimit limit = {});

// Exact expectations of the sufficient statistics: `data` averages the
// hidden posterior over the dataset, `model` is the free-running joint.
struct ExactPhaseStats {
  EdgeStats data;
  EdgeStats model;
};
ExactPhaseStats exact_phase_statistics(const Model& model, std::span<const VisibleState> data,
                                       TinyLimit limit = {});

// Gradient of exact_loglik: (data - model) / T.
EdgeStats exact_gradient(const Model& model, std::span<const VisibleState> data, TinyLimit limit = {});

// d exact_loglik / d w_tri[t] restricted to one label pair, i.e.
// (E_data[r_tjk v_j v_k] - E_model[r_tjk v_j v_k]) / T, from its own
// enumeration.
double exact_pair_gradient(const Model& model, std::span<const VisibleState> data, const RelationId& pair,
                           TinyLimit limit = {});

// All 2^(V + Tc V^2) visible configurations.
std::vector<VisibleState> all_visible_states(const NetworkConfig& config, TinyLimit limit = {});

}  // namespace scenebm

#endif  // SCENEBM_ORACLE_HPP
