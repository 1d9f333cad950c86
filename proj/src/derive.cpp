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

#include "scenebm/derive.hpp"

#include <algorithm>
#include <cmath>

#include "scenebm/common.hpp"

namespace scenebm {

namespace {

struct Extent {
  double lo;
  double hi;
};

struct Footprint {
  Extent x;
  Extent y;
  double area() const { return (x.hi - x.lo) * (y.hi - y.lo); }
};

Footprint footprint(const OrientedBox& box) {
  const double c = std::abs(std::cos(box.yaw));
  const double s = std::abs(std::sin(box.yaw));
  const double hx = 0.5 * (c * box.size[0] + s * box.size[1]);
  const double hy = 0.5 * (s * box.size[0] + c * box.size[1]);
  return {{box.center[0] - hx, box.center[0] + hx}, {box.center[1] - hy, box.center[1] + hy}};
}

Extent vertical(const OrientedBox& box) {
  return {box.center[2] - 0.5 * box.size[2], box.center[2] + 0.5 * box.size[2]};
}

double overlap_length(Extent a, Extent b) { return std::min(a.hi, b.hi) - std::max(a.lo, b.lo); }

double footprint_overlap_ratio(const OrientedBox& a, const OrientedBox& b) {
  const Footprint fa = footprint(a);
  const Footprint fb = footprint(b);
  const double w = std::max(0.0, overlap_length(fa.x, fb.x));
  const double h = std::max(0.0, overlap_length(fa.y, fb.y));
  return (w * h) / std::min(fa.area(), fb.area());
}

// Relations with `a` as subject; the caller emits the opposites.
void relate(const SceneObject& a, const SceneObject& b, const DeriveThresholds& th,
            std::vector<SceneRelation>& out) {
  const OrientedBox& ba = *a.box;
  const OrientedBox& bb = *b.box;
  const Extent za = vertical(ba);
  const Extent zb = vertical(bb);
  const bool side_by_side = overlap_length(za, zb) > th.contact_gap;

  auto emit = [&](RawRelation rel) {
    out.push_back({rel, a.id, b.id});
    out.push_back({opposite(rel), b.id, a.id});
  };

  if (side_by_side) {
    const double dx = bb.center[0] - ba.center[0];
    if (dx > th.axis_margin) emit(RawRelation::left);
    if (-dx > th.axis_margin) emit(RawRelation::right);
    const double dy = bb.center[1] - ba.center[1];
    if (dy > th.axis_margin) emit(RawRelation::front);
    if (-dy > th.axis_margin) emit(RawRelation::behind);
  }

  const double gap_up = za.lo - zb.hi;  // a above b
  const double gap_down = zb.lo - za.hi;  // b above a
  const double ratio = footprint_overlap_ratio(ba, bb);
  if (gap_up >= -th.contact_gap) {
    emit(RawRelation::above);
    if (std::abs(gap_up) < th.contact_gap && ratio >= th.overlap_ratio) emit(RawRelation::on_top);
  } else if (gap_down >= -th.contact_gap) {
    emit(RawRelation::below);
    if (std::abs(gap_down) < th.contact_gap && ratio >= th.overlap_ratio) emit(RawRelation::under);
  }
}

}  // namespace

void DeriveThresholds::validate() const {
  if (!(axis_margin >= 0.0)) throw ValidationError("derive: axis_margin must be >= 0");
  if (!(contact_gap >= 0.0)) throw ValidationError("derive: contact_gap must be >= 0");
  if (!(overlap_ratio > 0.0 && overlap_ratio <= 1.0)) {
    throw ValidationError("derive: overlap_ratio must be in (0, 1]");
  }
}

SceneInstance derive_relations(const SceneInstance& scene, const DeriveThresholds& thresholds) {
  thresholds.validate();
  scene.validate();
  std::string missing;
  for (const auto& obj : scene.objects) {
    if (!obj.box) missing += (missing.empty() ? "" : ", ") + std::to_string(obj.id) + " (" + obj.label + ")";
  }
  if (!missing.empty()) {
    throw ValidationError("scene '" + scene.scene_id + "': instances without a box: " + missing);
  }

  SceneInstance out = scene;
  out.relations.clear();
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    for (std::size_t j = i + 1; j < scene.objects.size(); ++j) {
      relate(scene.objects[i], scene.objects[j], thresholds, out.relations);
    }
  }
  return out;
}

}  // namespace scenebm
