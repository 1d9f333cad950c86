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

#include "run_config.hpp"

#include "scenebm/checkpoint.hpp"
#include "scenebm/scene_io.hpp"

namespace scenebm::cli {

using nlohmann::json;

std::filesystem::path RunConfig::resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.empty() || p.is_absolute()) return p;
  return base_dir / p;
}

void RunConfig::validate() const {
  NetworkConfig probe = network;
  probe.V = 1;
  probe.validate();
  hyper.validate();
  sampler.validate();
  ratios.validate();
  if (task < 1 || task > 4) throw ValidationError("run config: task must be 1, 2, 3 or 4");
  if (seeds.empty()) throw ValidationError("run config: seeds is empty");
  if (models.empty()) throw ValidationError("run config: models is empty");
  for (const auto& m : models) network_for(*this, m, 1);
}

json sampler_to_json(const SamplerSettings& s) {
  json anneal = nullptr;
  if (s.anneal) anneal = {{"t_start", s.anneal->t_start}, {"t_end", s.anneal->t_end}};
  return {{"k_pos", s.k_pos},
          {"k_cd", s.k_cd},
          {"settle_sweeps", s.settle_sweeps},
          {"temperature", s.temperature},
          {"anneal", anneal},
          {"order", std::string(to_string(s.order))}};
}

SamplerSettings sampler_from_json(const json& j) {
  SamplerSettings s;
  try {
    s.k_pos = j.value("k_pos", s.k_pos);
    s.k_cd = j.value("k_cd", s.k_cd);
    s.settle_sweeps = j.value("settle_sweeps", s.settle_sweeps);
    s.temperature = j.value("temperature", s.temperature);
    if (j.contains("anneal") && !j.at("anneal").is_null()) {
      Anneal a;
      a.t_start = j.at("anneal").value("t_start", a.t_start);
      a.t_end = j.at("anneal").value("t_end", a.t_end);
      s.anneal = a;
    }
    s.order = parse_object_order(j.value("order", std::string(to_string(s.order))));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("sampler: ") + e.what());
  }
  s.validate();
  return s;
}

json run_config_to_json(const RunConfig& c) {
  json network = config_to_json(c.network);
  network.erase("V");
  network.erase("seed");
  return {{"paths",
           {{"synth_spec", c.paths.synth_spec},
            {"data_dir", c.paths.data_dir},
            {"checkpoint", c.paths.checkpoint},
            {"report_dir", c.paths.report_dir}}},
          {"network", network},
          {"models", c.models},
          {"hyper", hyper_to_json(c.hyper)},
          {"sampler", sampler_to_json(c.sampler)},
          {"split", {{"ratios", {c.ratios.train, c.ratios.test, c.ratios.validation}}, {"seed", c.split_seed}}},
          {"task", c.task},
          {"seeds", c.seeds}};
}

RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ValidationError("run config: expected an object");
  RunConfig c;
  c.base_dir = base_dir;
  try {
    if (j.contains("paths")) {
      const json& p = j.at("paths");
      c.paths.synth_spec = p.value("synth_spec", c.paths.synth_spec);
      c.paths.data_dir = p.value("data_dir", c.paths.data_dir);
      c.paths.checkpoint = p.value("checkpoint", c.paths.checkpoint);
      c.paths.report_dir = p.value("report_dir", c.paths.report_dir);
    }
    if (j.contains("network")) {
      json n = config_to_json(c.network);
      n.update(j.at("network"));
      n["V"] = 1;
      c.network = config_from_json(n);
    }
    c.models = j.value("models", c.models);
    if (j.contains("hyper")) c.hyper = hyper_from_json(j.at("hyper"));
    if (j.contains("sampler")) c.sampler = sampler_from_json(j.at("sampler"));
    if (j.contains("split")) {
      const json& s = j.at("split");
      if (s.contains("ratios")) {
        const auto r = s.at("ratios").get<std::vector<double>>();
        if (r.size() != 3) throw ValidationError("run config: split.ratios needs three values");
        c.ratios = {r[0], r[1], r[2]};
      }
      c.split_seed = s.value("seed", c.split_seed);
    }
    c.task = j.value("task", c.task);
    c.seeds = j.value("seeds", c.seeds);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("run config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  try {
    return run_config_from_json(read_json_file(path), path.parent_path());
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.find(path.string()) != std::string::npos) throw;
    throw ValidationError(path.string() + ": " + what);
  }
}

NetworkConfig network_for(const RunConfig& config, const std::string& model, std::size_t V) {
  NetworkConfig n = config.network;
  n.V = V;
  if (model == "RBM") {
    n.H2 = 0;
    n.use_triway = false;
  } else if (model == "GBM") {
    n.use_triway = false;
  } else if (model != "Triway") {
    throw ValidationError("unknown model '" + model + "' (expected RBM, GBM or Triway)");
  }
  if (model != "RBM" && n.H2 == 0) throw ValidationError(model + " needs H2 > 0");
  n.validate();
  return n;
}

}  // namespace scenebm::cli
