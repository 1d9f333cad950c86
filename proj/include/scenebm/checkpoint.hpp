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

#ifndef SCENEBM_CHECKPOINT_HPP
#define SCENEBM_CHECKPOINT_HPP

#include <filesystem>

#include "json.hpp"
#include "scenebm/model.hpp"

namespace scenebm {

inline constexpr int kCheckpointFormatVersion = 1;

nlohmann::json config_to_json(const NetworkConfig& config);
// Missing keys take NetworkConfig defaults; V is required.
NetworkConfig config_from_json(const nlohmann::json& j);

struct Checkpoint {
  Model model;
  nlohmann::json history = nlohmann::json::object();
};

// Weights are stored as 16 lowercase hex digits of their IEEE-754 bits,
// row-major, so a load reproduces them bit for bit.
nlohmann::json checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
// Throws ValidationError on a version mismatch or a malformed file.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace scenebm

#endif  // SCENEBM_CHECKPOINT_HPP
