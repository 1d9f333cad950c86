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

#ifndef SCENEBM_SPLIT_HPP
#define SCENEBM_SPLIT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scenebm/scene.hpp"

namespace scenebm {

// A scene vector together with its source scene. `index` is the position of
// the source SceneInstance in the dataset and serves as its stable id.
struct EncodedScene {
  std::size_t index = 0;
  std::string scene_id;
  std::string category;
  SceneVector vector;
};

std::vector<EncodedScene> encode_all(std::span<const SceneInstance> scenes, const Vocabulary& vocab);

struct SplitRatios {
  double train = 0.6;
  double test = 0.3;
  double validation = 0.1;

  void validate() const;
};

struct DatasetSplit {
  std::vector<EncodedScene> train;
  std::vector<EncodedScene> test;
  std::vector<EncodedScene> validation;
};

// Per-category sizes: round(n * train), round(n * test), the rest to
// validation, then adjusted so that every split holds at least one scene.
struct SplitCounts {
  std::size_t train = 0;
  std::size_t test = 0;
  std::size_t validation = 0;
};
SplitCounts split_counts(std::size_t n, const SplitRatios& ratios);

// Stratified by category with a seeded shuffle inside each category. Each
// split lists scenes in ascending dataset index. Throws ValidationError on
// an empty input or a category with fewer scenes than splits.
DatasetSplit split_dataset(std::span<const EncodedScene> scenes, const SplitRatios& ratios,
                           std::uint64_t seed);

}  // namespace scenebm

#endif  // SCENEBM_SPLIT_HPP
