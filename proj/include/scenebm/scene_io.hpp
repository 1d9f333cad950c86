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

#ifndef SCENEBM_SCENE_IO_HPP
#define SCENEBM_SCENE_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "scenebm/derive.hpp"
#include "scenebm/scene.hpp"
#include "scenebm/split.hpp"
#include "scenebm/synth.hpp"

namespace scenebm {

// Scene: {"scene_id", "category", "objects": [{"id", "label", "box": {...} | null}],
//         "relations": [{"type", "subject", "object"}]}
nlohmann::json scene_to_json(const SceneInstance& scene);
SceneInstance scene_from_json(const nlohmann::json& j);

// A dataset file is a JSON array of scenes.
nlohmann::json scenes_to_json(const std::vector<SceneInstance>& scenes);
std::vector<SceneInstance> scenes_from_json(const nlohmann::json& j);

// {"objects": [...], "canonical_relations": ["left", "front", "on_top", "above"]}
nlohmann::json vocabulary_to_json(const Vocabulary& vocab);
Vocabulary vocabulary_from_json(const nlohmann::json& j);

nlohmann::json synth_spec_to_json(const SynthSpec& spec);
SynthSpec synth_spec_from_json(const nlohmann::json& j);

// {"category": [{"type", "subject", "object"}, ...]} with label names.
nlohmann::json motifs_to_json(const MotifTable& motifs, const Vocabulary& vocab);
MotifTable motifs_from_json(const nlohmann::json& j, const Vocabulary& vocab);

nlohmann::json thresholds_to_json(const DeriveThresholds& th);
DeriveThresholds thresholds_from_json(const nlohmann::json& j);

// {"V", "Tc", "dimension", "vectors": [{"scene_id", "category", "objects": [...], "relations": [...]}]}
nlohmann::json encoded_to_json(const std::vector<EncodedScene>& scenes, const Vocabulary& vocab);

// Split manifest: {"split": name, "scene_ids": [...], "category_counts": {...}}
nlohmann::json manifest_to_json(const std::string& name, const std::vector<EncodedScene>& scenes);
// Resolves a manifest against the encoded dataset by scene_id.
std::vector<EncodedScene> manifest_select(const nlohmann::json& manifest, const std::vector<EncodedScene>& all);

// File helpers; errors name the file.
nlohmann::json read_json_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline, so reruns are byte-identical.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace scenebm

#endif  // SCENEBM_SCENE_IO_HPP
