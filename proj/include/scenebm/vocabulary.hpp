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

#ifndef SCENEBM_VOCABULARY_HPP
#define SCENEBM_VOCABULARY_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scenebm {

// The eight annotated spatial relations. Opposite pairs fold onto the four
// canonical relations (left, front, on_top, above) by swapping endpoints.
enum class RawRelation { left, right, front, behind, on_top, under, above, below };

inline constexpr std::size_t kRawRelationCount = 8;
inline constexpr std::size_t kCanonicalRelationCount = 4;

inline constexpr std::array<RawRelation, kRawRelationCount> kAllRawRelations = {
    RawRelation::left,   RawRelation::right, RawRelation::front, RawRelation::behind,
    RawRelation::on_top, RawRelation::under, RawRelation::above, RawRelation::below};

std::string_view to_string(RawRelation relation);
RawRelation parse_raw_relation(std::string_view name);
RawRelation opposite(RawRelation relation);

// Name of canonical type t in [0, 4): left, front, on_top, above.
std::string_view canonical_name(std::size_t type);
std::size_t parse_canonical_relation(std::string_view name);
const std::vector<std::string>& canonical_relation_names();

// Flat address of one relation node: type * V^2 + subject * V + object.
struct RelationId {
  std::size_t type = 0;
  std::size_t subject = 0;
  std::size_t object = 0;

  std::size_t flat(std::size_t label_count) const {
    return (type * label_count + subject) * label_count + object;
  }
  static RelationId from_flat(std::size_t flat, std::size_t label_count) {
    const std::size_t per_type = label_count * label_count;
    return {flat / per_type, (flat % per_type) / label_count, flat % label_count};
  }
  auto operator<=>(const RelationId&) const = default;
};

// Maps a raw relation between two labels onto its canonical relation node.
// right/behind/under/below become left/front/on_top/above with the endpoints
// swapped.
RelationId fold_relation(RawRelation raw, std::size_t subject, std::size_t object);
RelationId fold_relation(std::string_view raw, std::size_t subject, std::size_t object);

// Object label vocabulary; the label index is the object node id.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<std::size_t> find(std::string_view label) const;
  // Throws ValidationError naming the label when it is absent.
  std::size_t index_of(std::string_view label) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace scenebm

#endif  // SCENEBM_VOCABULARY_HPP
