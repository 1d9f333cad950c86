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

#ifndef SCENEBM_SYNTH_HPP
#define SCENEBM_SYNTH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "scenebm/scene.hpp"
#include "scenebm/vocabulary.hpp"

namespace scenebm {

struct AnchorObject {
  std::string label;
  double probability = 1.0;
};

// Canonical relation type between two labels, e.g. on_top(monitor, desk).
struct MotifSpec {
  std::string type;
  std::string subject;
  std::string object;
};

struct CategorySpec {
  std::string name;
  std::vector<AnchorObject> anchors;
  std::vector<MotifSpec> motifs;
};

// Generator for synthetic scene datasets with known structure. Each scene
// of a category includes every anchor with its probability; with
// probability noise_rate a random absent label is added, and each motif
// whose endpoints are both present is emitted with probability
// 1 - noise_rate.
struct SynthSpec {
  std::vector<std::string> object_labels;
  std::vector<CategorySpec> categories;
  double noise_rate = 0.0;
  std::size_t scenes_per_category = 0;
  std::uint64_t seed = 0;

  std::size_t label_count() const { return object_labels.size(); }
  std::size_t category_count() const { return categories.size(); }
  void validate() const;
};

// Ground-truth canonical relations per category.
struct MotifTable {
  std::map<std::string, std::vector<RelationId>> by_category;

  bool contains(const std::string& category, const RelationId& id) const;
  bool contains_any(const RelationId& id) const;
  friend bool operator==(const MotifTable&, const MotifTable&) = default;
};

struct SynthResult {
  Vocabulary vocabulary;
  std::vector<SceneInstance> scenes;
  MotifTable motifs;
};

// Deterministic in (spec, spec.seed). Scenes come out grouped by category
// in the order of spec.categories; a scene that draws no anchor keeps its most likely one.
SynthResult synth_generate(const SynthSpec& spec);

}  // namespace scenebm

#endif  // SCENEBM_SYNTH_HPP
