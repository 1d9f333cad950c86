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

#ifndef SCENEBM_TOOLS_RUN_CONFIG_HPP
#define SCENEBM_TOOLS_RUN_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "scenebm/model.hpp"
#include "scenebm/sampler.hpp"
#include "scenebm/split.hpp"
#include "scenebm/trainer.hpp"

namespace scenebm::cli {

// Relative paths resolve against the directory of the config file.
struct RunPaths {
  std::string synth_spec;
  std::string data_dir = "data";
  std::string checkpoint = "run/checkpoint.json";
  std::string report_dir = "run/reports";
};

struct RunConfig {
  RunPaths paths;
  // V is taken from the vocabulary at run time.
  NetworkConfig network = triway_config(1, kCanonicalRelationCount, 200, 100);
  // Families for `compare`, any of RBM, GBM, Triway.
  std::vector<std::string> models = {"RBM", "GBM", "Triway"};
  HyperParams hyper;
  SamplerSettings sampler;
  SplitRatios ratios;
  std::uint64_t split_seed = 7;
  int task = 1;
  std::vector<std::uint64_t> seeds = {1};
  std::filesystem::path base_dir = ".";

  std::filesystem::path resolve(const std::string& path) const;
  void validate() const;
};

nlohmann::json sampler_to_json(const SamplerSettings& settings);
SamplerSettings sampler_from_json(const nlohmann::json& j);

nlohmann::json run_config_to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
RunConfig load_run_config(const std::filesystem::path& path);

// The network section with V filled in and the family switched to `model`.
NetworkConfig network_for(const RunConfig& config, const std::string& model, std::size_t V);

}  // namespace scenebm::cli

#endif  // SCENEBM_TOOLS_RUN_CONFIG_HPP
