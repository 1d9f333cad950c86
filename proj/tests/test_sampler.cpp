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

#include <cmath>

#include "doctest.h"
#include "scenebm/oracle.hpp"
#include "scenebm/sampler.hpp"
#include "scenebm/selfcheck.hpp"

using namespace scenebm;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

TEST_CASE("settings") {
  SamplerSettings s;
  CHECK(s.k_pos == 5);
  CHECK(s.k_cd == 1);
  CHECK(s.settle_sweeps == 50);
  CHECK_NOTHROW(s.validate());
  s.k_cd = 0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s = {};
  s.anneal = Anneal{0.5, 2.0};
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.anneal = Anneal{2.0, 0.5};
  s.settle_sweeps = 5;
  CHECK(s.temperature_at(0) == doctest::Approx(2.0));
  CHECK(s.temperature_at(4) == doctest::Approx(0.5));
  CHECK(s.temperature_at(2) == doctest::Approx(1.0));
  CHECK(parse_object_order(to_string(ObjectOrder::parallel_block)) == ObjectOrder::parallel_block);
}

TEST_CASE("sweep_hidden") {
  SUBCASE("zero weights give fair coins") {
    const NetworkConfig c = triway_config(3, 1, 4, 3);
    const Model m{c, zero_params(c)};
    NetworkState s = NetworkState::zeros(c);
    Rng rng(1);
    double on = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      sweep_hidden(m, s, ClampMask::visibles(c), rng, 1.0);
      for (auto b : s.h1) on += b;
      for (auto b : s.h2) on += b;
      for (double p : s.prob.h1) CHECK(p == 0.5);
    }
    CHECK(on / (n * 7.0) == doctest::Approx(0.5).epsilon(0.02));
  }

  SUBCASE("clamped hidden units keep their value") {
    Rng rng(2);
    const NetworkConfig c = triway_config(3, 1, 2, 2);
    const Model m = random_tiny_model(c, rng, 3.0);
    ClampMask mask = ClampMask::visibles(c);
    mask.hidden1[1] = 1;
    mask.hidden2[0] = 0;
    NetworkState s = NetworkState::zeros(c);
    mask.apply(s);
    for (int i = 0; i < 500; ++i) {
      sweep_hidden(m, s, mask, rng, 1.0);
      CHECK(s.h1[1] == 1);
      CHECK(s.h2[0] == 0);
    }
  }

  SUBCASE("hidden marginals with clamped visibles match enumeration") {
    Rng rng(3);
    const NetworkConfig c = tiny_config();
    const Model m = random_tiny_model(c, rng);
    NetworkState s = NetworkState::zeros(c);
    s.v = {1, 0, 1};
    s.r[RelationId{0, 0, 2}.flat(3)] = 1;
    const ClampMask mask = ClampMask::visibles(c);
    const NodeProbabilities exact = exact_marginals(m, mask, s);
    std::vector<double> h1(c.H1, 0.0), h2(c.H2, 0.0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      sweep_hidden(m, s, mask, rng, 1.0);
      for (std::size_t a = 0; a < c.H1; ++a) h1[a] += s.h1[a];
      for (std::size_t b = 0; b < c.H2; ++b) h2[b] += s.h2[b];
    }
    for (auto& x : h1) x /= n;
    for (auto& x : h2) x /= n;
    CHECK(max_abs_diff(h1, exact.h1) < 0.02);
    CHECK(max_abs_diff(h2, exact.h2) < 0.02);
  }
}

TEST_CASE("negative_phase_step") {
  SUBCASE("nothing moves when everything is clamped") {
    Rng rng(4);
    const NetworkConfig c = tiny_config();
    const Model m = random_tiny_model(c, rng, 2.0);
    ClampMask mask = ClampMask::visibles(c);
    NetworkState s = NetworkState::zeros(c);
    s.v = {1, 1, 0};
    s.r[1] = 1;
    for (auto& h : mask.hidden1) h = 1;
    for (auto& h : mask.hidden2) h = 0;
    mask.apply(s);
    const NetworkState before = s;
    for (int i = 0; i < 100; ++i) negative_phase_step(m, s, mask, rng, 1.0);
    CHECK(s.v == before.v);
    CHECK(s.r == before.r);
    CHECK(s.h1 == before.h1);
    CHECK(s.h2 == before.h2);
  }

  SUBCASE("relation conditional is sigmoid(w_t) between active objects") {
    NetworkConfig c = triway_config(2, 1, 1, 0);
    Model m{c, zero_params(c)};
    m.params.w_tri = {2.0};
    ClampMask mask = ClampMask::objects_only(c);
    mask.hidden1[0] = 0;
    NetworkState s = NetworkState::zeros(c);
    s.v = {1, 1};
    Rng rng(5);
    const std::size_t rel = RelationId{0, 0, 1}.flat(2);
    double on = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      negative_phase_step(m, s, mask, rng, 1.0);
      CHECK(s.prob.r[rel] == doctest::Approx(sigmoid(2.0)).epsilon(1e-12));
      on += s.r[rel];
    }
    CHECK(sigmoid(2.0) == doctest::Approx(0.8808).epsilon(1e-4));
    CHECK(on / n == doctest::Approx(sigmoid(2.0)).epsilon(0.01));
    // The same conditional from enumeration.
    const NodeProbabilities exact = exact_marginals(m, mask, s);
    CHECK(exact.r[rel] == doctest::Approx(sigmoid(2.0)).epsilon(1e-12));
  }

  SUBCASE("active_pairs forces relations between inactive objects off") {
    Rng rng(6);
    NetworkConfig c = triway_config(3, 2, 2, 2);
    c.relation_support = RelationSupport::active_pairs;
    const Model m = random_tiny_model(c, rng, 2.0);
    NetworkState s = NetworkState::zeros(c);
    for (int i = 0; i < 300; ++i) {
      negative_phase_step(m, s, ClampMask::none(c), rng, 1.0);
      for (std::size_t rel = 0; rel < c.relation_count(); ++rel) {
        const RelationId id = RelationId::from_flat(rel, c.V);
        if (!(s.v[id.subject] && s.v[id.object])) {
          CHECK(s.r[rel] == 0);
          CHECK(s.prob.r[rel] == 0.0);
        }
      }
    }
  }

  SUBCASE("both support modes agree on relations between active objects") {
    Rng rng(7);
    NetworkConfig all = triway_config(3, 2, 2, 2);
    NetworkConfig pairs = all;
    pairs.relation_support = RelationSupport::active_pairs;
    const Model ma = random_tiny_model(all, rng);
    Model mp = ma;
    mp.config = pairs;
    ClampMask mask = ClampMask::objects_only(all);
    mask.hidden1 = {1, 0};
    mask.hidden2 = {0, 1};
    NetworkState s = NetworkState::zeros(all);
    s.v = {1, 0, 1};
    mask.apply(s);
    NetworkState sa = s, sp = s;
    Rng ra(8), rp(8);
    negative_phase_step(ma, sa, mask, ra, 1.0);
    negative_phase_step(mp, sp, mask, rp, 1.0);
    for (std::size_t rel = 0; rel < all.relation_count(); ++rel) {
      const RelationId id = RelationId::from_flat(rel, all.V);
      if (s.v[id.subject] && s.v[id.object]) CHECK(sa.prob.r[rel] == sp.prob.r[rel]);
    }
  }
}

TEST_CASE("long-run marginals match enumeration") {
  for (ObjectOrder order : {ObjectOrder::sequential_random}) {
    Rng rng(9);
    const NetworkConfig c = tiny_config();
    const Model m = random_tiny_model(c, rng);
    const NodeProbabilities exact = exact_marginals(m);
    NetworkState s = NetworkState::zeros(c);
    const ClampMask none = ClampMask::none(c);
    for (int i = 0; i < 1000; ++i) negative_phase_step(m, s, none, rng, 1.0, order);
    NodeProbabilities count{std::vector<double>(c.V), std::vector<double>(c.relation_count()),
                            std::vector<double>(c.H1), std::vector<double>(c.H2)};
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      negative_phase_step(m, s, none, rng, 1.0, order);
      for (std::size_t j = 0; j < c.V; ++j) count.v[j] += s.v[j];
      for (std::size_t j = 0; j < c.relation_count(); ++j) count.r[j] += s.r[j];
      for (std::size_t j = 0; j < c.H1; ++j) count.h1[j] += s.h1[j];
      for (std::size_t j = 0; j < c.H2; ++j) count.h2[j] += s.h2[j];
    }
    for (auto* v : {&count.v, &count.r, &count.h1, &count.h2}) {
      for (double& x : *v) x /= n;
    }
    CHECK(max_abs_diff(count.v, exact.v) < 0.02);
    CHECK(max_abs_diff(count.r, exact.r) < 0.02);
    CHECK(max_abs_diff(count.h1, exact.h1) < 0.02);
    CHECK(max_abs_diff(count.h2, exact.h2) < 0.02);
  }
}

TEST_CASE("conditional_complete") {
  SUBCASE("fully clamped probabilities are the clamped bits") {
    Rng rng(10);
    const NetworkConfig c = tiny_config();
    const Model m = random_tiny_model(c, rng);
    SceneVector partial(3, 1);
    partial.add_object(0);
    partial.add_object(2);
    partial.add_relation(RelationId{0, 2, 0});
    ClampMask mask = ClampMask::visibles(c);
    mask.hidden1 = {1, 0};
    mask.hidden2 = {0, 0};
    SamplerSettings settings;
    settings.settle_sweeps = 10;
    const Completion out = conditional_complete(m, partial, mask, settings, rng);
    CHECK(out.probabilities.v == std::vector<double>{1, 0, 1});
    for (std::size_t rel = 0; rel < c.relation_count(); ++rel) {
      CHECK(out.probabilities.r[rel] == (partial.has_relation(rel) ? 1.0 : 0.0));
    }
    CHECK(out.probabilities.h1 == std::vector<double>{1, 0});
  }

  SUBCASE("free nodes under clamped objects match conditional enumeration") {
    Rng rng(11);
    const NetworkConfig c = tiny_config();
    const Model m = random_tiny_model(c, rng);
    SceneVector partial(3, 1);
    partial.add_object(1);
    partial.add_object(2);
    const ClampMask mask = ClampMask::objects_only(c);
    SamplerSettings settings;
    settings.settle_sweeps = 100000;
    const Completion out = conditional_complete(m, partial, mask, settings, rng);
    const NodeProbabilities exact = exact_marginals(m, mask, state_from_scene(c, partial));
    CHECK(max_abs_diff(out.probabilities.r, exact.r) < 0.03);
    CHECK(max_abs_diff(out.probabilities.h1, exact.h1) < 0.03);
    CHECK(max_abs_diff(out.probabilities.h2, exact.h2) < 0.03);
  }

  SUBCASE("deterministic given the seed") {
    Rng init(12);
    const NetworkConfig c = triway_config(4, 2, 3, 2);
    const Model m = random_tiny_model(c, init);
    SceneVector partial(4, 2);
    partial.add_object(3);
    SamplerSettings settings;
    settings.anneal = Anneal{};
    Rng a(99), b(99);
    const Completion x = conditional_complete(m, partial, ClampMask::objects_only(c), settings, a);
    const Completion y = conditional_complete(m, partial, ClampMask::objects_only(c), settings, b);
    CHECK(x.state.v == y.state.v);
    CHECK(x.state.r == y.state.r);
    CHECK(x.probabilities.r == y.probabilities.r);
    CHECK(x.probabilities.h1 == y.probabilities.h1);
  }

  SUBCASE("parallel object updates run and respect clamping") {
    Rng rng(13);
    const NetworkConfig c = triway_config(4, 2, 3, 2);
    const Model m = random_tiny_model(c, rng, 2.0);
    SceneVector partial(4, 2);
    partial.add_object(0);
    ClampMask mask = ClampMask::none(c);
    mask.objects[0] = 1;
    SamplerSettings settings;
    settings.order = ObjectOrder::parallel_block;
    const Completion out = conditional_complete(m, partial, mask, settings, rng);
    CHECK(out.state.v[0] == 1);
    CHECK(out.probabilities.v[0] == 1.0);
  }
}

TEST_CASE("generate_from_hidden") {
  SUBCASE("zero weights give fair coins on the visibles") {
    const NetworkConfig c = triway_config(4, 2, 3, 2);
    const Model m{c, zero_params(c)};
    Rng rng(14);
    SamplerSettings settings;
    settings.settle_sweeps = 20;
    double on = 0.0, total = 0.0;
    for (int i = 0; i < 500; ++i) {
      const std::vector<NodeRef> none;
      const Completion out = generate_from_hidden(m, none, settings, rng);
      for (auto b : out.state.v) on += b;
      total += static_cast<double>(c.V);
      for (double p : out.probabilities.v) CHECK(p == 0.5);
    }
    CHECK(on / total == doctest::Approx(0.5).epsilon(0.05));
  }

  SUBCASE("chosen hidden units stay on") {
    Rng rng(15);
    const NetworkConfig c = triway_config(4, 2, 3, 2);
    const Model m = random_tiny_model(c, rng, 2.0);
    const std::vector<NodeRef> units = {{NodeKind::hidden1, 2}, {NodeKind::hidden2, 0}};
    const Completion out = generate_from_hidden(m, units, SamplerSettings{}, rng);
    CHECK(out.state.h1[2] == 1);
    CHECK(out.state.h2[0] == 1);
    const std::vector<NodeRef> bad = {{NodeKind::hidden1, 3}};
    CHECK_THROWS_AS(generate_from_hidden(m, bad, SamplerSettings{}, rng), ValidationError);
    const std::vector<NodeRef> visible = {{NodeKind::object, 0}};
    CHECK_THROWS_AS(generate_from_hidden(m, visible, SamplerSettings{}, rng), ValidationError);
  }

  SUBCASE("unlisted hidden units can be held off") {
    Rng rng(16);
    const NetworkConfig c = triway_config(4, 2, 3, 2);
    const Model m = random_tiny_model(c, rng, 3.0);
    const std::vector<NodeRef> units = {{NodeKind::hidden1, 1}};
    for (int i = 0; i < 20; ++i) {
      const Completion out = generate_from_hidden(m, units, SamplerSettings{}, rng, HiddenRest::off);
      CHECK(out.state.h1 == std::vector<std::uint8_t>{0, 1, 0});
      CHECK(out.state.h2 == std::vector<std::uint8_t>{0, 0});
    }
  }
}
