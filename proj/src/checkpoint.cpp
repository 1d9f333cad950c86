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

#include "scenebm/checkpoint.hpp"

#include <fstream>

namespace scenebm {

using nlohmann::json;

json config_to_json(const NetworkConfig& c) {
  return {{"V", c.V},
          {"Tc", c.Tc},
          {"H1", c.H1},
          {"H2", c.H2},
          {"use_triway", c.use_triway},
          {"rh_sharing", std::string(to_string(c.rh_sharing))},
          {"use_biases", c.use_biases},
          {"temperature", c.temperature},
          {"relation_support", std::string(to_string(c.relation_support))},
          {"seed", c.seed}};
}

NetworkConfig config_from_json(const json& j) {
  NetworkConfig c;
  try {
    c.V = j.at("V").get<std::size_t>();
    c.Tc = j.value("Tc", c.Tc);
    c.H1 = j.value("H1", c.H1);
    c.H2 = j.value("H2", c.H2);
    c.use_triway = j.value("use_triway", c.use_triway);
    c.rh_sharing = parse_rh_sharing(j.value("rh_sharing", std::string(to_string(c.rh_sharing))));
    c.use_biases = j.value("use_biases", c.use_biases);
    c.temperature = j.value("temperature", c.temperature);
    c.relation_support =
        parse_relation_support(j.value("relation_support", std::string(to_string(c.relation_support))));
    c.seed = j.value("seed", c.seed);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

namespace {

json hex_vector(std::span<const double> values) {
  json out = json::array();
  for (double v : values) out.push_back(to_hex(v));
  return out;
}

json hex_matrix(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(hex_vector(m.row(r)));
  return out;
}

std::vector<double> read_hex_vector(const json& j, std::size_t n, const char* name) {
  if (!j.is_array() || j.size() != n) {
    throw ValidationError(std::string("checkpoint: weights.") + name + " must have " + std::to_string(n) +
                          " entries");
  }
  std::vector<double> out;
  out.reserve(n);
  for (const auto& v : j) out.push_back(from_hex(v.get<std::string>()));
  return out;
}

Matrix read_hex_matrix(const json& j, std::size_t rows, std::size_t cols, const char* name) {
  if (!j.is_array() || j.size() != rows) {
    throw ValidationError(std::string("checkpoint: weights.") + name + " must have " + std::to_string(rows) +
                          " rows");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = read_hex_vector(j[r], cols, name);
    std::copy(row.begin(), row.end(), m.row(r).begin());
  }
  return m;
}

}  // namespace

json checkpoint_to_json(const Checkpoint& checkpoint) {
  const Model& model = checkpoint.model;
  model.validate();
  const ModelParams& p = model.params;
  json weights = {{"W_hv", hex_matrix(p.w_hv)},
                  {"W_rh", hex_matrix(p.w_rh)},
                  {"W_12", hex_matrix(p.w_12)},
                  {"w_tri", hex_vector(p.w_tri)},
                  {"biases", nullptr}};
  if (p.biases) {
    weights["biases"] = {{"b_v", hex_vector(p.biases->objects)},
                         {"b_r", hex_vector(p.biases->relations)},
                         {"b_h1", hex_vector(p.biases->hidden1)},
                         {"b_h2", hex_vector(p.biases->hidden2)}};
  }
  return {{"format_version", kCheckpointFormatVersion},
          {"config", config_to_json(model.config)},
          {"weights", std::move(weights)},
          {"history", checkpoint.history}};
}

Checkpoint checkpoint_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("format_version")) {
      throw ValidationError("checkpoint: missing format_version");
    }
    const auto& version = j.at("format_version");
    if (!version.is_number_integer() || version.get<int>() != kCheckpointFormatVersion) {
      throw ValidationError("checkpoint: unsupported format_version " + version.dump() + " (expected " +
                            std::to_string(kCheckpointFormatVersion) + ")");
    }
    Checkpoint out;
    out.model.config = config_from_json(j.at("config"));
    const NetworkConfig& c = out.model.config;
    const json& w = j.at("weights");
    ModelParams& p = out.model.params;
    p.w_hv = read_hex_matrix(w.at("W_hv"), c.H1, c.V, "W_hv");
    p.w_rh = read_hex_matrix(w.at("W_rh"), c.H1, c.rh_columns(), "W_rh");
    p.w_12 = read_hex_matrix(w.at("W_12"), c.H1, c.H2, "W_12");
    p.w_tri = read_hex_vector(w.at("w_tri"), c.use_triway ? c.Tc : 0, "w_tri");
    const json& b = w.at("biases");
    if (!b.is_null()) {
      p.biases = Biases{read_hex_vector(b.at("b_v"), c.V, "b_v"),
                        read_hex_vector(b.at("b_r"), c.relation_count(), "b_r"),
                        read_hex_vector(b.at("b_h1"), c.H1, "b_h1"), read_hex_vector(b.at("b_h2"), c.H2, "b_h2")};
    }
    out.history = j.value("history", json::object());
    out.model.validate();
    return out;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("checkpoint: malformed: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  const std::string text = checkpoint_to_json(checkpoint).dump(1) + "\n";
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("checkpoint " + path.string() + ": " + e.what());
  }
  try {
    return checkpoint_from_json(j);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace scenebm
