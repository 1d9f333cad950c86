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

#ifndef SCENEBM_MODEL_HPP
#define SCENEBM_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scenebm/common.hpp"
#include "scenebm/vocabulary.hpp"

namespace scenebm {

enum class RhSharing { per_node, per_type };
enum class RelationSupport { all, active_pairs };

std::string_view to_string(RhSharing sharing);
std::string_view to_string(RelationSupport support);
RhSharing parse_rh_sharing(std::string_view name);
RelationSupport parse_relation_support(std::string_view name);

// Architecture of one network. The three model families of the comparison:
//   RBM    H2 == 0, use_triway off
//   GBM    H2 > 0,  use_triway off
//   Triway H2 > 0,  use_triway on
struct NetworkConfig {
  std::size_t V = 1;   // object nodes
  std::size_t Tc = kCanonicalRelationCount;
  std::size_t H1 = 1;  // bottom hidden layer
  std::size_t H2 = 0;  // top hidden layer, 0 for a single layer
  bool use_triway = true;
  RhSharing rh_sharing = RhSharing::per_node;
  bool use_biases = false;
  double temperature = 1.0;
  RelationSupport relation_support = RelationSupport::all;
  std::uint64_t seed = 0;

  std::size_t relation_count() const { return Tc * V * V; }
  std::size_t visible_dimension() const { return V + relation_count(); }
  std::size_t total_nodes() const { return visible_dimension() + H1 + H2; }
  // Columns of the relation-hidden weight matrix.
  std::size_t rh_columns() const { return rh_sharing == RhSharing::per_node ? relation_count() : Tc; }
  std::size_t rh_column(std::size_t relation) const {
    return rh_sharing == RhSharing::per_node ? relation : relation / (V * V);
  }

  void validate() const;
  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

NetworkConfig rbm_config(std::size_t V, std::size_t Tc, std::size_t H1);
NetworkConfig gbm_config(std::size_t V, std::size_t Tc, std::size_t H1, std::size_t H2);
NetworkConfig triway_config(std::size_t V, std::size_t Tc, std::size_t H1, std::size_t H2);

// "RBM", "GBM", "Triway", or "Triway-1L" for a single-layer tri-way net.
std::string model_label(const NetworkConfig& config);

struct Biases {
  std::vector<double> objects;
  std::vector<double> relations;
  std::vector<double> hidden1;
  std::vector<double> hidden2;

  friend bool operator==(const Biases&, const Biases&) = default;
};

// All weight families. The tri-way weights are one scalar per canonical
// relation type, shared by every (subject, object) label pair.
struct ModelParams {
  Matrix w_hv;                 // H1 x V
  Matrix w_rh;                 // H1 x rh_columns()
  Matrix w_12;                 // H1 x H2
  std::vector<double> w_tri;   // Tc when use_triway, else empty
  std::optional<Biases> biases;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct Model {
  NetworkConfig config;
  ModelParams params;

  // Shapes agree with config and every value is finite.
  void validate() const;
  friend bool operator==(const Model&, const Model&) = default;
};

// Zero weights with the shapes implied by config.
ModelParams zero_params(const NetworkConfig& config);
// Weights ~ N(0, 0.01^2); biases zero when enabled.
ModelParams init_params(const NetworkConfig& config, Rng& rng);
// init_params seeded from config.seed.
Model init_model(const NetworkConfig& config);

struct NodeProbabilities {
  std::vector<double> v;
  std::vector<double> r;
  std::vector<double> h1;
  std::vector<double> h2;

  bool empty() const { return v.empty() && r.empty() && h1.empty() && h2.empty(); }
};

// Joint binary assignment of every node. `prob` holds the activation
// probabilities from the most recent update of each node, when tracked.
struct NetworkState {
  std::vector<std::uint8_t> v;
  std::vector<std::uint8_t> r;
  std::vector<std::uint8_t> h1;
  std::vector<std::uint8_t> h2;
  NodeProbabilities prob;

  static NetworkState zeros(const NetworkConfig& config);
  void check_shape(const NetworkConfig& config) const;
};

enum class NodeKind { object, relation, hidden1, hidden2 };

struct NodeRef {
  NodeKind kind = NodeKind::object;
  std::size_t index = 0;

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

// E(v, r, h1, h2) = - h1' W_hv v - h1' W_12 h2 - sum_t w_t sum_jk r_tjk v_j v_k
//                   - sum_rel r_rel (W_rh[:, col(rel)] . h1)  [- bias terms]
// Temperature is not applied here.
double energy(const Model& model, const NetworkState& state);

// I(x) with E(x=1) - E(x=0) = -I(x), all other nodes held at their values.
double node_input(const Model& model, const NetworkState& state, NodeRef node);

// 1 / (1 + exp(-input / T)). Throws ValidationError when T <= 0.
double activation_prob(double input, double temperature);

// Bulk inputs used by the sampler. Each equals node_input for its node.
std::vector<double> hidden1_inputs(const Model& model, const NetworkState& state);
std::vector<double> hidden2_inputs(const Model& model, const NetworkState& state);
double object_input(const Model& model, const NetworkState& state, std::size_t object);
// Relation inputs for all relation nodes given v and h1.
std::vector<double> relation_inputs(const Model& model, const NetworkState& state);

}  // namespace scenebm

#endif  // SCENEBM_MODEL_HPP
