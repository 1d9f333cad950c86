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

#include "scenebm/scene_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "scenebm/common.hpp"

namespace scenebm {

using nlohmann::json;

namespace {

template <typename Fn>
auto with_context(const std::string& context, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ValidationError(context + ": " + e.what());
  }
}

std::array<double, 3> read_vec3(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 3) throw ValidationError(std::string("field '") + field + "' must hold 3 numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

json scene_to_json(const SceneInstance& scene) {
  json objects = json::array();
  for (const auto& obj : scene.objects) {
    json box = nullptr;
    if (obj.box) {
      box = {{"center", obj.box->center}, {"size", obj.box->size}, {"yaw", obj.box->yaw}};
    }
    objects.push_back({{"id", obj.id}, {"label", obj.label}, {"box", box}});
  }
  json relations = json::array();
  for (const auto& rel : scene.relations) {
    relations.push_back({{"type", std::string(to_string(rel.type))}, {"subject", rel.subject}, {"object", rel.object}});
  }
  return {{"scene_id", scene.scene_id}, {"category", scene.category}, {"objects", objects}, {"relations", relations}};
}

SceneInstance scene_from_json(const json& j) {
  const std::string id = j.is_object() ? j.value("scene_id", std::string("?")) : std::string("?");
  return with_context("scene '" + id + "'", [&] {
    SceneInstance scene;
    scene.scene_id = j.at("scene_id").get<std::string>();
    scene.category = j.at("category").get<std::string>();
    for (const auto& o : j.at("objects")) {
      SceneObject obj;
      obj.id = o.at("id").get<std::int64_t>();
      obj.label = o.at("label").get<std::string>();
      if (o.contains("box") && !o.at("box").is_null()) {
        const json& b = o.at("box");
        obj.box = OrientedBox{read_vec3(b.at("center"), "center"), read_vec3(b.at("size"), "size"),
                              b.value("yaw", 0.0)};
      }
      scene.objects.push_back(std::move(obj));
    }
    for (const auto& r : j.at("relations")) {
      scene.relations.push_back({parse_raw_relation(r.at("type").get<std::string>()), r.at("subject").get<std::int64_t>(),
                                 r.at("object").get<std::int64_t>()});
    }
    scene.validate();
    return scene;
  });
}

json scenes_to_json(const std::vector<SceneInstance>& scenes) {
  json out = json::array();
  for (const auto& s : scenes) out.push_back(scene_to_json(s));
  return out;
}

std::vector<SceneInstance> scenes_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("dataset must be a JSON array of scenes");
  std::vector<SceneInstance> out;
  out.reserve(j.size());
  for (const auto& s : j) out.push_back(scene_from_json(s));
  return out;
}

json vocabulary_to_json(const Vocabulary& vocab) {
  return {{"objects", vocab.labels()}, {"canonical_relations", canonical_relation_names()}};
}

Vocabulary vocabulary_from_json(const json& j) {
  return with_context("vocabulary", [&] {
    if (j.contains("canonical_relations") &&
        j.at("canonical_relations").get<std::vector<std::string>>() != canonical_relation_names()) {
      throw ValidationError("vocabulary: canonical_relations must be [left, front, on_top, above]");
    }
    return Vocabulary(j.at("objects").get<std::vector<std::string>>());
  });
}

json synth_spec_to_json(const SynthSpec& spec) {
  json categories = json::array();
  for (const auto& cat : spec.categories) {
    json anchors = json::array();
    for (const auto& a : cat.anchors) anchors.push_back({{"label", a.label}, {"probability", a.probability}});
    json motifs = json::array();
    for (const auto& m : cat.motifs) motifs.push_back({{"type", m.type}, {"subject", m.subject}, {"object", m.object}});
    categories.push_back({{"name", cat.name}, {"anchors", anchors}, {"motifs", motifs}});
  }
  return {{"n_categories", spec.category_count()},
          {"V", spec.label_count()},
          {"object_labels", spec.object_labels},
          {"categories", categories},
          {"noise_rate", spec.noise_rate},
          {"scenes_per_category", spec.scenes_per_category},
          {"seed", spec.seed}};
}

SynthSpec synth_spec_from_json(const json& j) {
  SynthSpec spec = with_context("synth spec", [&] {
    SynthSpec s;
    s.object_labels = j.at("object_labels").get<std::vector<std::string>>();
    for (const auto& c : j.at("categories")) {
      CategorySpec cat;
      cat.name = c.at("name").get<std::string>();
      for (const auto& a : c.at("anchors")) {
        cat.anchors.push_back({a.at("label").get<std::string>(), a.at("probability").get<double>()});
      }
      for (const auto& m : c.value("motifs", json::array())) {
        cat.motifs.push_back(
            {m.at("type").get<std::string>(), m.at("subject").get<std::string>(), m.at("object").get<std::string>()});
      }
      s.categories.push_back(std::move(cat));
    }
    s.noise_rate = j.value("noise_rate", 0.0);
    s.scenes_per_category = j.at("scenes_per_category").get<std::size_t>();
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("V") && j.at("V").get<std::size_t>() != s.object_labels.size()) {
      throw ValidationError("synth spec: V does not match object_labels");
    }
    if (j.contains("n_categories") && j.at("n_categories").get<std::size_t>() != s.categories.size()) {
      throw ValidationError("synth spec: n_categories does not match categories");
    }
    return s;
  });
  spec.validate();
  return spec;
}

json motifs_to_json(const MotifTable& motifs, const Vocabulary& vocab) {
  json out = json::object();
  for (const auto& [category, ids] : motifs.by_category) {
    json list = json::array();
    for (const auto& id : ids) {
      list.push_back({{"type", std::string(canonical_name(id.type))},
                      {"subject", vocab.label(id.subject)},
                      {"object", vocab.label(id.object)}});
    }
    out[category] = list;
  }
  return out;
}

MotifTable motifs_from_json(const json& j, const Vocabulary& vocab) {
  return with_context("motif table", [&] {
    MotifTable table;
    for (const auto& [category, list] : j.items()) {
      auto& ids = table.by_category[category];
      for (const auto& m : list) {
        ids.push_back({parse_canonical_relation(m.at("type").get<std::string>()),
                       vocab.index_of(m.at("subject").get<std::string>()),
                       vocab.index_of(m.at("object").get<std::string>())});
      }
    }
    return table;
  });
}

json thresholds_to_json(const DeriveThresholds& th) {
  return {{"axis_margin", th.axis_margin}, {"contact_gap", th.contact_gap}, {"overlap_ratio", th.overlap_ratio}};
}

DeriveThresholds thresholds_from_json(const json& j) {
  DeriveThresholds th;
  th.axis_margin = j.value("axis_margin", th.axis_margin);
  th.contact_gap = j.value("contact_gap", th.contact_gap);
  th.overlap_ratio = j.value("overlap_ratio", th.overlap_ratio);
  th.validate();
  return th;
}

json encoded_to_json(const std::vector<EncodedScene>& scenes, const Vocabulary& vocab) {
  json vectors = json::array();
  for (const auto& s : scenes) {
    vectors.push_back({{"scene_id", s.scene_id},
                       {"category", s.category},
                       {"objects", s.vector.objects()},
                       {"relations", s.vector.relations()}});
  }
  return {{"V", vocab.size()},
          {"Tc", kCanonicalRelationCount},
          {"dimension", implied_dimension(vocab.size(), kCanonicalRelationCount)},
          {"vectors", vectors}};
}

json manifest_to_json(const std::string& name, const std::vector<EncodedScene>& scenes) {
  json ids = json::array();
  std::map<std::string, std::size_t> counts;
  for (const auto& s : scenes) {
    ids.push_back(s.scene_id);
    ++counts[s.category];
  }
  return {{"split", name}, {"scene_ids", ids}, {"category_counts", counts}};
}

std::vector<EncodedScene> manifest_select(const json& manifest, const std::vector<EncodedScene>& all) {
  return with_context("split manifest", [&] {
    std::map<std::string, const EncodedScene*> by_id;
    for (const auto& s : all) by_id[s.scene_id] = &s;
    std::vector<EncodedScene> out;
    for (const auto& id : manifest.at("scene_ids")) {
      const auto name = id.get<std::string>();
      auto it = by_id.find(name);
      if (it == by_id.end()) throw ValidationError("split manifest: unknown scene_id '" + name + "'");
      out.push_back(*it->second);
    }
    return out;
  });
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace scenebm
