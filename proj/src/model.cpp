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

#include "scenebm/model.hpp"

#include <cmath>

namespace scenebm {

std::string_view to_string(RhSharing sharing) {
  return sharing == RhSharing::per_node ? "per_node" : "per_type";
}

std::string_view to_string(RelationSupport support) {
  return support == RelationSupport::all ? "all" : "active_pairs";
}

RhSharing parse_rh_sharing(std::string_view name) {
  if (name == "per_node") return RhSharing::per_node;
  if (name == "per_type") return RhSharing::per_type;
  throw ValidationError("unknown rh_sharing '" + std::string(name) + "'");
}

RelationSupport parse_relation_support(std::string_view name) {
  if (name == "all") return RelationSupport::all;
  if (name == "active_pairs") return RelationSupport::active_pairs;
  throw ValidationError("unknown relation_support '" + std::string(name) + "'");
}

void NetworkConfig::validate() const {
  if (V < 1) throw ValidationError("config: V must be >= 1");
  if (Tc < 1) throw ValidationError("config: Tc must be >= 1");
  if (H1 < 1) throw ValidationError("config: H1 must be >= 1");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("config: temperature must be > 0");
  }
}

NetworkConfig rbm_config(std::size_t V, std::size_t Tc, std::size_t H1) {
  NetworkConfig c;
  c.V = V;
  c.Tc = Tc;
  c.H1 = H1;
  c.H2 = 0;
  c.use_triway = false;
  return c;
}

NetworkConfig gbm_config(std::size_t V, std::size_t Tc, std::size_t H1, std::size_t H2) {
  NetworkConfig c = rbm_config(V, Tc, H1);
  c.H2 = H2;
  return c;
}

NetworkConfig triway_config(std::size_t V, std::size_t Tc, std::size_t H1, std::size_t H2) {
  NetworkConfig c = gbm_config(V, Tc, H1, H2);
  c.use_triway = true;
  return c;
}

std::string model_label(const NetworkConfig& config) {
  if (config.use_triway) return config.H2 > 0 ? "Triway" : "Triway-1L";
  return config.H2 > 0 ? "GBM" : "RBM";
}

namespace {

void check_vector(const std::vector<double>& v, std::size_t n, const char* name) {
  if (v.size() != n) throw ValidationError(std::string("params: ") + name + " has the wrong size");
  for (double x : v) {
    if (!std::isfinite(x)) throw NumericError(std::string("params: ") + name + " is not finite");
  }
}

void check_matrix(const Matrix& m, std::size_t rows, std::size_t cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ValidationError(std::string("params: ") + name + " has shape " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
  for (double x : m.values()) {
    if (!std::isfinite(x)) throw NumericError(std::string("params: ") + name + " is not finite");
  }
}

}  // namespace

void Model::validate() const {
  config.validate();
  check_matrix(params.w_hv, config.H1, config.V, "W_hv");
  check_matrix(params.w_rh, config.H1, config.rh_columns(), "W_rh");
  check_matrix(params.w_12, config.H1, config.H2, "W_12");
  check_vector(params.w_tri, config.use_triway ? config.Tc : 0, "w_tri");
  if (config.use_biases != params.biases.has_value()) {
    throw ValidationError("params: biases present iff use_biases");
  }
  if (params.biases) {
    check_vector(params.biases->objects, config.V, "b_v");
    check_vector(params.biases->relations, config.relation_count(), "b_r");
    check_vector(params.biases->hidden1, config.H1, "b_h1");
    check_vector(params.biases->hidden2, config.H2, "b_h2");
  }
}

ModelParams zero_params(const NetworkConfig& config) {
  config.validate();
  ModelParams p;
  p.w_hv = Matrix(config.H1, config.V);
  p.w_rh = Matrix(config.H1, config.rh_columns());
  p.w_12 = Matrix(config.H1, config.H2);
  if (config.use_triway) p.w_tri.assign(config.Tc, 0.0);
  if (config.use_biases) {
    p.biases = Biases{std::vector<double>(config.V, 0.0), std::vector<double>(config.relation_count(), 0.0),
                      std::vector<double>(config.H1, 0.0), std::vector<double>(config.H2, 0.0)};
  }
  return p;
}

ModelParams init_params(const NetworkConfig& config, Rng& rng) {
  ModelParams p = zero_params(config);
  std::normal_distribution<double> gauss(0.0, 0.01);
  for (double& w : p.w_hv.values()) w = gauss(rng);
  for (double& w : p.w_rh.values()) w = gauss(rng);
  for (double& w : p.w_12.values()) w = gauss(rng);
  for (double& w : p.w_tri) w = gauss(rng);
  return p;
}

Model init_model(const NetworkConfig& config) {
  Rng rng = make_stream({config.seed, 0x1417});
  return {config, init_params(config, rng)};
}

NetworkState NetworkState::zeros(const NetworkConfig& config) {
  NetworkState s;
  s.v.assign(config.V, 0);
  s.r.assign(config.relation_count(), 0);
  s.h1.assign(config.H1, 0);
  s.h2.assign(config.H2, 0);
  return s;
}

void NetworkState::check_shape(const NetworkConfig& config) const {
  if (v.size() != config.V || r.size() != config.relation_count() || h1.size() != config.H1 ||
      h2.size() != config.H2) {
    throw ValidationError("network state shape does not match the config");
  }
}

double energy(const Model& model, const NetworkState& state) {
  const NetworkConfig& c = model.config;
  const ModelParams& p = model.params;
  state.check_shape(c);
  double harmony = 0.0;
  for (std::size_t m = 0; m < c.H1; ++m) {
    if (!state.h1[m]) continue;
    for (std::size_t j = 0; j < c.V; ++j) {
      if (state.v[j]) harmony += p.w_hv(m, j);
    }
    for (std::size_t n = 0; n < c.H2; ++n) {
      if (state.h2[n]) harmony += p.w_12(m, n);
    }
  }
  const std::size_t VV = c.V * c.V;
  for (std::size_t rel = 0; rel < c.relation_count(); ++rel) {
    if (!state.r[rel]) continue;
    if (c.use_triway) {
      const std::size_t t = rel / VV;
      const std::size_t j = (rel % VV) / c.V;
      const std::size_t k = rel % c.V;
      if (state.v[j] && state.v[k]) harmony += p.w_tri[t];
    }
    const std::size_t col = c.rh_column(rel);
    for (std::size_t m = 0; m < c.H1; ++m) {
      if (state.h1[m]) harmony += p.w_rh(m, col);
    }
  }
  if (p.biases) {
    for (std::size_t j = 0; j < c.V; ++j) harmony += state.v[j] * p.biases->objects[j];
    for (std::size_t rel = 0; rel < c.relation_count(); ++rel) harmony += state.r[rel] * p.biases->relations[rel];
    for (std::size_t m = 0; m < c.H1; ++m) harmony += state.h1[m] * p.biases->hidden1[m];
    for (std::size_t n = 0; n < c.H2; ++n) harmony += state.h2[n] * p.biases->hidden2[n];
  }
  return -harmony;
}

double object_input(const Model& model, const NetworkState& state, std::size_t j) {
  const NetworkConfig& c = model.config;
  const ModelParams& p = model.params;
  double input = 0.0;
  for (std::size_t m = 0; m < c.H1; ++m) {
    if (state.h1[m]) input += p.w_hv(m, j);
  }
  if (c.use_triway) {
    const std::size_t V = c.V;
    for (std::size_t t = 0; t < c.Tc; ++t) {
      const std::size_t base = t * V * V;
      std::size_t count = state.r[base + j * V + j];  // r_tjj v_j v_j = r_tjj v_j
      for (std::size_t k = 0; k < V; ++k) {
        if (k == j || !state.v[k]) continue;
        count += state.r[base + j * V + k] + state.r[base + k * V + j];
      }
      input += p.w_tri[t] * static_cast<double>(count);
    }
  }
  if (p.biases) input += p.biases->objects[j];
  return input;
}

std::vector<double> hidden1_inputs(const Model& model, const NetworkState& state) {
  const NetworkConfig& c = model.config;
  const ModelParams& p = model.params;
  std::vector<double> in(c.H1, 0.0);
  for (std::size_t m = 0; m < c.H1; ++m) {
    const auto row = p.w_hv.row(m);
    double acc = 0.0;
    for (std::size_t j = 0; j < c.V; ++j) {
      if (state.v[j]) acc += row[j];
    }
    const auto row12 = p.w_12.row(m);
    for (std::size_t n = 0; n < c.H2; ++n) {
      if (state.h2[n]) acc += row12[n];
    }
    in[m] = acc;
  }
  for (std::size_t rel = 0; rel < c.relation_count(); ++rel) {
    if (!state.r[rel]) continue;
    const std::size_t col = c.rh_column(rel);
    for (std::size_t m = 0; m < c.H1; ++m) in[m] += p.w_rh(m, col);
  }
  if (p.biases) {
    for (std::size_t m = 0; m < c.H1; ++m) in[m] += p.biases->hidden1[m];
  }
  return in;
}

std::vector<double> hidden2_inputs(const Model& model, const NetworkState& state) {
  const NetworkConfig& c = model.config;
  const ModelParams& p = model.params;
  std::vector<double> in(c.H2, 0.0);
  for (std::size_t m = 0; m < c.H1; ++m) {
    if (!state.h1[m]) continue;
    const auto row = p.w_12.row(m);
    for (std::size_t n = 0; n < c.H2; ++n) in[n] += row[n];
  }
  if (p.biases) {
    for (std::size_t n = 0; n < c.H2; ++n) in[n] += p.biases->hidden2[n];
  }
  return in;
}

std::vector<double> relation_inputs(const Model& model, const NetworkState& state) {
  const NetworkConfig& c = model.config;
  const ModelParams& p = model.params;
  // Hidden drive per W_rh column, accumulated over active h1 rows.
  std::vector<double> drive(c.rh_columns(), 0.0);
  for (std::size_t m = 0; m < c.H1; ++m) {
    if (!state.h1[m]) continue;
    const auto row = p.w_rh.row(m);
    for (std::size_t col = 0; col < drive.size(); ++col) drive[col] += row[col];
  }
  const std::size_t V = c.V;
  std::vector<double> in(c.relation_count());
  for (std::size_t rel = 0; rel < in.size(); ++rel) in[rel] = drive[c.rh_column(rel)];
  if (c.use_triway) {
    for (std::size_t t = 0; t < c.Tc; ++t) {
      for (std::size_t j = 0; j < V; ++j) {
        if (!state.v[j]) continue;
        for (std::size_t k = 0; k < V; ++k) {
          if (state.v[k]) in[(t * V + j) * V + k] += p.w_tri[t];
        }
      }
    }
  }
  if (p.biases) {
    for (std::size_t rel = 0; rel < in.size(); ++rel) in[rel] += p.biases->relations[rel];
  }
  return in;
}

double node_input(const Model& model, const NetworkState& state, NodeRef node) {
  const NetworkConfig& c = model.config;
  state.check_shape(c);
  switch (node.kind) {
    case NodeKind::object:
      if (node.index >= c.V) throw ValidationError("node_input: object index out of range");
      return object_input(model, state, node.index);
    case NodeKind::relation: {
      if (node.index >= c.relation_count()) throw ValidationError("node_input: relation index out of range");
      const auto id = RelationId::from_flat(node.index, c.V);
      double input = 0.0;
      if (c.use_triway && state.v[id.subject] && state.v[id.object]) input += model.params.w_tri[id.type];
      const std::size_t col = c.rh_column(node.index);
      for (std::size_t m = 0; m < c.H1; ++m) {
        if (state.h1[m]) input += model.params.w_rh(m, col);
      }
      if (model.params.biases) input += model.params.biases->relations[node.index];
      return input;
    }
    case NodeKind::hidden1:
      if (node.index >= c.H1) throw ValidationError("node_input: hidden1 index out of range");
      return hidden1_inputs(model, state)[node.index];
    case NodeKind::hidden2:
      if (node.index >= c.H2) throw ValidationError("node_input: hidden2 index out of range");
      return hidden2_inputs(model, state)[node.index];
  }
  throw ValidationError("node_input: unknown node kind");
}

double activation_prob(double input, double temperature) {
  if (!(temperature > 0.0)) throw ValidationError("activation_prob: temperature must be > 0");
  const double x = input / temperature;
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace scenebm
