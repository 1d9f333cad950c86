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

#include "scenebm/vocabulary.hpp"

#include "scenebm/common.hpp"

namespace scenebm {

namespace {

constexpr std::array<std::string_view, kRawRelationCount> kRawNames = {
    "left", "right", "front", "behind", "on_top", "under", "above", "below"};

struct FoldRule {
  std::size_t type;
  bool swap;
};

constexpr std::array<FoldRule, kRawRelationCount> kFoldRules = {{
    {0, false},  // left
    {0, true},   // right
    {1, false},  // front
    {1, true},   // behind
    {2, false},  // on_top
    {2, true},   // under
    {3, false},  // above
    {3, true},   // below
}};

}  // namespace

std::string_view to_string(RawRelation relation) {
  return kRawNames[static_cast<std::size_t>(relation)];
}

RawRelation parse_raw_relation(std::string_view name) {
  for (std::size_t i = 0; i < kRawNames.size(); ++i) {
    if (kRawNames[i] == name) return static_cast<RawRelation>(i);
  }
  throw ValidationError("unknown relation '" + std::string(name) + "'");
}

RawRelation opposite(RawRelation relation) {
  const auto i = static_cast<std::size_t>(relation);
  return static_cast<RawRelation>(i % 2 == 0 ? i + 1 : i - 1);
}

const std::vector<std::string>& canonical_relation_names() {
  static const std::vector<std::string> names = {"left", "front", "on_top", "above"};
  return names;
}

std::string_view canonical_name(std::size_t type) {
  return canonical_relation_names().at(type);
}

std::size_t parse_canonical_relation(std::string_view name) {
  const auto& names = canonical_relation_names();
  for (std::size_t t = 0; t < names.size(); ++t) {
    if (names[t] == name) return t;
  }
  throw ValidationError("unknown canonical relation '" + std::string(name) + "'");
}

RelationId fold_relation(RawRelation raw, std::size_t subject, std::size_t object) {
  const FoldRule rule = kFoldRules[static_cast<std::size_t>(raw)];
  if (rule.swap) return {rule.type, object, subject};
  return {rule.type, subject, object};
}

RelationId fold_relation(std::string_view raw, std::size_t subject, std::size_t object) {
  return fold_relation(parse_raw_relation(raw), subject, object);
}

Vocabulary::Vocabulary(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw ValidationError("vocabulary: empty label at index " + std::to_string(i));
    if (!index_.emplace(labels_[i], i).second) {
      throw ValidationError("vocabulary: duplicate label '" + labels_[i] + "'");
    }
  }
}

std::optional<std::size_t> Vocabulary::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocabulary::index_of(std::string_view label) const {
  if (auto idx = find(label)) return *idx;
  throw ValidationError("label '" + std::string(label) + "' is not in the vocabulary");
}

}  // namespace scenebm
