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

#ifndef SCENEBM_SCENE_HPP
#define SCENEBM_SCENE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scenebm/vocabulary.hpp"

namespace scenebm {

// Oriented 3D box: center and full extents in meters, yaw about +z.
struct OrientedBox {
  std::array<double, 3> center{};
  std::array<double, 3> size{1.0, 1.0, 1.0};
  double yaw = 0.0;

  void validate() const;
  friend bool operator==(const OrientedBox&, const OrientedBox&) = default;
};

struct SceneObject {
  std::int64_t id = 0;
  std::string label;
  std::optional<OrientedBox> box;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

struct SceneRelation {
  RawRelation type = RawRelation::left;
  std::int64_t subject = 0;
  std::int64_t object = 0;

  friend bool operator==(const SceneRelation&, const SceneRelation&) = default;
};

struct SceneInstance {
  std::string scene_id;
  std::string category;
  std::vector<SceneObject> objects;
  std::vector<SceneRelation> relations;

  // Unique instance ids, relation endpoints exist and differ.
  void validate() const;
  const SceneObject* find_object(std::int64_t id) const;

  friend bool operator==(const SceneInstance&, const SceneInstance&) = default;
};

std::size_t implied_dimension(std::size_t label_count, std::size_t relation_types);

// Label-level binary scene vector. Only active bits are stored; the implied
// dense length is V + Tc * V^2. Every active relation has both endpoint
// labels active.
class SceneVector {
 public:
  SceneVector() = default;
  explicit SceneVector(std::size_t label_count,
                       std::size_t relation_types = kCanonicalRelationCount);
  // Throws ValidationError when the sets are out of range or a relation
  // references an inactive object.
  SceneVector(std::size_t label_count, std::size_t relation_types,
              std::vector<std::size_t> objects, std::vector<std::size_t> relations);

  std::size_t label_count() const { return label_count_; }
  std::size_t relation_types() const { return relation_types_; }
  std::size_t relation_count() const { return relation_types_ * label_count_ * label_count_; }
  std::size_t dimension() const { return implied_dimension(label_count_, relation_types_); }

  const std::vector<std::size_t>& objects() const { return objects_; }
  const std::vector<std::size_t>& relations() const { return relations_; }

  bool has_object(std::size_t label) const;
  bool has_relation(std::size_t flat) const;
  bool has_relation(const RelationId& id) const { return has_relation(id.flat(label_count_)); }

  void add_object(std::size_t label);
  // Requires both endpoints active.
  void add_relation(const RelationId& id);
  // Drops the object bit and every relation bit touching it.
  void remove_object(std::size_t label);
  void remove_relation(const RelationId& id);

  friend bool operator==(const SceneVector&, const SceneVector&) = default;

 private:
  std::size_t label_count_ = 0;
  std::size_t relation_types_ = kCanonicalRelationCount;
  std::vector<std::size_t> objects_;
  std::vector<std::size_t> relations_;
};

SceneVector encode_scene(const SceneInstance& scene, const Vocabulary& vocab);

// One instance per active label (a second one for labels with a same-label
// relation) plus the canonical relations between them.
SceneInstance decode_scene(const SceneVector& vector, const Vocabulary& vocab,
                           std::string scene_id = {}, std::string category = {});

}  // namespace scenebm

#endif  // SCENEBM_SCENE_HPP
