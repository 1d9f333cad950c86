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

#ifndef SCENEBM_DERIVE_HPP
#define SCENEBM_DERIVE_HPP

#include "scenebm/scene.hpp"

namespace scenebm {

struct DeriveThresholds {
  double axis_margin = 0.05;   // meters of center separation for left/front
  double contact_gap = 0.05;   // meters; vertical contact tolerance
  double overlap_ratio = 0.5;  // footprint overlap needed for on_top, in (0, 1]

  void validate() const;
};

// Rule-based spatial relations from oriented boxes. For every instance pair
// both directions are emitted (left(A,B) with right(B,A), and so on).
//
//   left(A,B)   B.x - A.x > axis_margin and the z-ranges overlap by more
//               than contact_gap
//   front(A,B)  B.y - A.y > axis_margin, same vertical condition (the
//               viewer looks along +y)
//   above(A,B)  A.zmin - B.zmax >= -contact_gap
//   on_top(A,B) above(A,B), |A.zmin - B.zmax| < contact_gap and the
//               footprint intersection covers >= overlap_ratio of the
//               smaller footprint
//
// Existing relations are replaced. Throws ValidationError listing every
// instance without a box.
SceneInstance derive_relations(const SceneInstance& scene, const DeriveThresholds& thresholds = {});

}  // namespace scenebm

#endif  // SCENEBM_DERIVE_HPP
