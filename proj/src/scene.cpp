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

#include "scenebm/scene.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "scenebm/common.hpp"

namespace scenebm {

void OrientedBox::validate() const {
  for (double v : center) {
    if (!std::isfinite(v)) throw ValidationError("box center must be finite");
  }
  for (double v : size) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("box size components must be > 0");
  }
  if (!std::isfinite(yaw)) throw ValidationError("box yaw must be finite");
}

void SceneInstance::validate() const {
  std::set<std::int64_t> ids;
  for (const auto& obj : objects) {
    if (!ids.insert(obj.id).second) {
      throw ValidationError("scene '" + scene_id + "': duplicate instance id " + std::to_string(obj.id));
    }
    if (obj.box) obj.box->validate();
  }
  for (const auto& rel : relations) {
    if (!ids.count(rel.subject) || !ids.count(rel.object)) {
      throw ValidationError("scene '" + scene_id + "': relation " + std::string(to_string(rel.type)) +
                            " references a missing instance");
    }
    if (rel.subject == rel.object) {
      throw ValidationError("scene '" + scene_id + "': relation " + std::string(to_string(rel.type)) +
                            " relates instance " + std::to_string(rel.subject) + " to itself");
    }
  }
}

const SceneObject* SceneInstance::find_object(std::int64_t id) const {
  for (const auto& obj : objects) {
    if (obj.id == id) return &obj;
  }
  return nullptr;
}

std::size_t implied_dimension(std::size_t label_count, std::size_t relation_types) {
  return label_count + relation_types * label_count * label_count;
}

SceneVector::SceneVector(std::size_t label_count, std::size_t relation_types)
    : label_count_(label_count), relation_types_(relation_types) {}

SceneVector::SceneVector(std::size_t label_count, std::size_t relation_types,
                         std::vector<std::size_t> objects, std::vector<std::size_t> relations)
    : label_count_(label_count), relation_types_(relation_types) {
  std::sort(objects.begin(), objects.end());
  objects.erase(std::unique(objects.begin(), objects.end()), objects.end());
  std::sort(relations.begin(), relations.end());
  relations.erase(std::unique(relations.begin(), relations.end()), relations.end());
  if (!objects.empty() && objects.back() >= label_count_) {
    throw ValidationError("scene vector: object index out of range");
  }
  objects_ = std::move(objects);
  for (std::size_t flat : relations) {
    if (flat >= relation_count()) throw ValidationError("scene vector: relation index out of range");
    const auto id = RelationId::from_flat(flat, label_count_);
    if (!has_object(id.subject) || !has_object(id.object)) {
      throw ValidationError("scene vector: relation " + std::to_string(flat) +
                            " references an inactive object");
    }
  }
  relations_ = std::move(relations);
}

bool SceneVector::has_object(std::size_t label) const {
  return std::binary_search(objects_.begin(), objects_.end(), label);
}

bool SceneVector::has_relation(std::size_t flat) const {
  return std::binary_search(relations_.begin(), relations_.end(), flat);
}

void SceneVector::add_object(std::size_t label) {
  if (label >= label_count_) throw ValidationError("scene vector: object index out of range");
  auto it = std::lower_bound(objects_.begin(), objects_.end(), label);
  if (it == objects_.end() || *it != label) objects_.insert(it, label);
}

void SceneVector::add_relation(const RelationId& id) {
  if (id.type >= relation_types_ || id.subject >= label_count_ || id.object >= label_count_) {
    throw ValidationError("scene vector: relation out of range");
  }
  if (!has_object(id.subject) || !has_object(id.object)) {
    throw ValidationError("scene vector: relation endpoints must be active objects");
  }
  const std::size_t flat = id.flat(label_count_);
  auto it = std::lower_bound(relations_.begin(), relations_.end(), flat);
  if (it == relations_.end() || *it != flat) relations_.insert(it, flat);
}

void SceneVector::remove_object(std::size_t label) {
  auto it = std::lower_bound(objects_.begin(), objects_.end(), label);
  if (it == objects_.end() || *it != label) return;
  objects_.erase(it);
  std::erase_if(relations_, [&](std::size_t flat) {
    const auto id = RelationId::from_flat(flat, label_count_);
    return id.subject == label || id.object == label;
  });
}

void SceneVector::remove_relation(const RelationId& id) {
  const std::size_t flat = id.flat(label_count_);
  auto it = std::lower_bound(relations_.begin(), relations_.end(), flat);
  if (it != relations_.end() && *it == flat) relations_.erase(it);
}

SceneVector encode_scene(const SceneInstance& scene, const Vocabulary& vocab) {
  scene.validate();
  std::map<std::int64_t, std::size_t> label_of;
  std::vector<std::size_t> objects;
  for (const auto& obj : scene.objects) {
    const auto idx = vocab.find(obj.label);
    if (!idx) {
      throw ValidationError("scene '" + scene.scene_id + "': label '" + obj.label +
                            "' is not in the vocabulary");
    }
    label_of[obj.id] = *idx;
    objects.push_back(*idx);
  }
  std::vector<std::size_t> relations;
  relations.reserve(scene.relations.size());
  for (const auto& rel : scene.relations) {
    const RelationId id = fold_relation(rel.type, label_of.at(rel.subject), label_of.at(rel.object));
    relations.push_back(id.flat(vocab.size()));
  }
  return SceneVector(vocab.size(), kCanonicalRelationCount, std::move(objects), std::move(relations));
}

SceneInstance decode_scene(const SceneVector& vector, const Vocabulary& vocab, std::string scene_id,
                           std::string category) {
  if (vector.label_count() != vocab.size()) {
    throw ValidationError("decode: vector has V=" + std::to_string(vector.label_count()) +
                          " but vocabulary has " + std::to_string(vocab.size()) + " labels");
  }
  if (vector.relation_types() != kCanonicalRelationCount) {
    throw ValidationError("decode: scene vectors need exactly 4 canonical relation types");
  }
  SceneInstance scene;
  scene.scene_id = std::move(scene_id);
  scene.category = std::move(category);

  std::set<std::size_t> needs_twin;
  for (std::size_t flat : vector.relations()) {
    const auto id = RelationId::from_flat(flat, vector.label_count());
    if (id.subject == id.object) needs_twin.insert(id.subject);
  }
  std::map<std::size_t, std::int64_t> first_instance;
  std::map<std::size_t, std::int64_t> second_instance;
  std::int64_t next_id = 0;
  for (std::size_t label : vector.objects()) {
    first_instance[label] = next_id;
    scene.objects.push_back({next_id++, vocab.label(label), std::nullopt});
    if (needs_twin.count(label)) {
      second_instance[label] = next_id;
      scene.objects.push_back({next_id++, vocab.label(label), std::nullopt});
    }
  }
  static constexpr std::array<RawRelation, kCanonicalRelationCount> kCanonical = {
      RawRelation::left, RawRelation::front, RawRelation::on_top, RawRelation::above};
  for (std::size_t flat : vector.relations()) {
    const auto id = RelationId::from_flat(flat, vector.label_count());
    const std::int64_t subject = first_instance.at(id.subject);
    const std::int64_t object =
        id.subject == id.object ? second_instance.at(id.object) : first_instance.at(id.object);
    scene.relations.push_back({kCanonical[id.type], subject, object});
  }
  return scene;
}

}  // namespace scenebm
