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

#include "scenebm/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "scenebm/common.hpp"

namespace scenebm {

void SynthSpec::validate() const {
  if (object_labels.empty()) throw ValidationError("synth: object_labels is empty");
  if (categories.empty()) throw ValidationError("synth: no categories");
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) throw ValidationError("synth: noise_rate must be in [0,1]");
  const Vocabulary vocab(object_labels);
  std::set<std::string> names;
  for (const auto& cat : categories) {
    if (!names.insert(cat.name).second) throw ValidationError("synth: duplicate category '" + cat.name + "'");
    if (cat.anchors.empty()) throw ValidationError("synth: category '" + cat.name + "' has no anchors");
    for (const auto& anchor : cat.anchors) {
      vocab.index_of(anchor.label);
      if (!(anchor.probability >= 0.0 && anchor.probability <= 1.0)) {
        throw ValidationError("synth: anchor '" + anchor.label + "' probability must be in [0,1]");
      }
    }
    for (const auto& motif : cat.motifs) {
      parse_canonical_relation(motif.type);
      vocab.index_of(motif.subject);
      vocab.index_of(motif.object);
    }
  }
}

bool MotifTable::contains(const std::string& category, const RelationId& id) const {
  auto it = by_category.find(category);
  if (it == by_category.end()) return false;
  return std::find(it->second.begin(), it->second.end(), id) != it->second.end();
}

bool MotifTable::contains_any(const RelationId& id) const {
  for (const auto& [name, motifs] : by_category) {
    if (std::find(motifs.begin(), motifs.end(), id) != motifs.end()) return true;
  }
  return false;
}

SynthResult synth_generate(const SynthSpec& spec) {
  spec.validate();
  SynthResult result;
  result.vocabulary = Vocabulary(spec.object_labels);
  const Vocabulary& vocab = result.vocabulary;
  const std::size_t V = vocab.size();

  for (const auto& cat : spec.categories) {
    auto& motifs = result.motifs.by_category[cat.name];
    for (const auto& m : cat.motifs) {
      motifs.push_back({parse_canonical_relation(m.type), vocab.index_of(m.subject), vocab.index_of(m.object)});
    }
  }

  static constexpr std::array<RawRelation, kCanonicalRelationCount> kCanonical = {
      RawRelation::left, RawRelation::front, RawRelation::on_top, RawRelation::above};

  for (std::size_t c = 0; c < spec.categories.size(); ++c) {
    const CategorySpec& cat = spec.categories[c];
    const auto& motifs = result.motifs.by_category.at(cat.name);
    for (std::size_t s = 0; s < spec.scenes_per_category; ++s) {
      Rng rng = make_stream({spec.seed, 0x5c3e, c, s});
      std::set<std::size_t> present;
      for (const auto& anchor : cat.anchors) {
        if (bernoulli(rng, anchor.probability)) present.insert(vocab.index_of(anchor.label));
      }
      if (present.empty()) {
        const auto best = std::max_element(cat.anchors.begin(), cat.anchors.end(),
                                           [](const auto& a, const auto& b) { return a.probability < b.probability; });
        present.insert(vocab.index_of(best->label));
      }
      if (bernoulli(rng, spec.noise_rate) && present.size() < V) {
        std::vector<std::size_t> absent;
        for (std::size_t j = 0; j < V; ++j) {
          if (!present.count(j)) absent.push_back(j);
        }
        present.insert(absent[uniform_index(rng, absent.size())]);
      }

      SceneInstance scene;
      char id[32];
      std::snprintf(id, sizeof(id), "_%04zu", s);
      scene.scene_id = cat.name + id;
      scene.category = cat.name;
      std::vector<std::int64_t> instance_of(V, -1);
      for (std::size_t label : present) {
        instance_of[label] = static_cast<std::int64_t>(scene.objects.size());
        scene.objects.push_back({instance_of[label], vocab.label(label), std::nullopt});
      }
      for (const RelationId& m : motifs) {
        if (instance_of[m.subject] < 0 || instance_of[m.object] < 0) continue;
        if (m.subject == m.object) continue;  // would need two instances
        if (bernoulli(rng, spec.noise_rate)) continue;
        const std::int64_t a = instance_of[m.subject];
        const std::int64_t b = instance_of[m.object];
        // Half the relations are written in their opposite form so that
        // downstream folding is exercised.
        if (bernoulli(rng, 0.5)) {
          scene.relations.push_back({kCanonical[m.type], a, b});
        } else {
          scene.relations.push_back({opposite(kCanonical[m.type]), b, a});
        }
      }
      result.scenes.push_back(std::move(scene));
    }
  }
  return result;
}

}  // namespace scenebm
