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

#include "scenebm/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "scenebm/common.hpp"

namespace scenebm {

std::vector<EncodedScene> encode_all(std::span<const SceneInstance> scenes, const Vocabulary& vocab) {
  std::vector<EncodedScene> out;
  out.reserve(scenes.size());
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    out.push_back({i, scenes[i].scene_id, scenes[i].category, encode_scene(scenes[i], vocab)});
  }
  return out;
}

void SplitRatios::validate() const {
  if (train <= 0.0 || test <= 0.0 || validation <= 0.0) {
    throw ValidationError("split: ratios must be positive");
  }
  if (std::abs(train + test + validation - 1.0) > 1e-9) {
    throw ValidationError("split: ratios must sum to 1");
  }
}

SplitCounts split_counts(std::size_t n, const SplitRatios& ratios) {
  SplitCounts c;
  c.train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratios.train));
  c.test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratios.test));
  c.train = std::min(c.train, n);
  c.test = std::min(c.test, n - c.train);
  c.validation = n - c.train - c.test;
  // Borrow from the largest split so that none is empty.
  for (std::size_t* slot : {&c.validation, &c.test, &c.train}) {
    if (*slot == 0) {
      std::size_t* largest = &c.train;
      if (c.test > *largest) largest = &c.test;
      if (c.validation > *largest) largest = &c.validation;
      if (*largest > 1) {
        --*largest;
        ++*slot;
      }
    }
  }
  return c;
}

DatasetSplit split_dataset(std::span<const EncodedScene> scenes, const SplitRatios& ratios,
                           std::uint64_t seed) {
  ratios.validate();
  if (scenes.empty()) throw ValidationError("split: no scenes");
  std::map<std::string, std::vector<std::size_t>> by_category;
  for (std::size_t i = 0; i < scenes.size(); ++i) by_category[scenes[i].category].push_back(i);

  std::vector<std::size_t> train, test, validation;
  for (auto& [category, members] : by_category) {
    if (members.size() < 3) {
      throw ValidationError("split: category '" + category + "' has " + std::to_string(members.size()) +
                            " scene(s); at least 3 are needed");
    }
    Rng rng = make_stream({seed, hash_string(category)});
    std::shuffle(members.begin(), members.end(), rng);
    const SplitCounts counts = split_counts(members.size(), ratios);
    auto it = members.begin();
    train.insert(train.end(), it, it + counts.train);
    it += counts.train;
    test.insert(test.end(), it, it + counts.test);
    it += counts.test;
    validation.insert(validation.end(), it, members.end());
  }

  auto gather = [&](std::vector<std::size_t>& ids) {
    std::sort(ids.begin(), ids.end());
    std::vector<EncodedScene> out;
    out.reserve(ids.size());
    for (std::size_t i : ids) out.push_back(scenes[i]);
    return out;
  };
  return {gather(train), gather(test), gather(validation)};
}

}  // namespace scenebm
