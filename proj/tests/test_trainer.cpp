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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "scenebm/edge_stats.hpp"
#include "scenebm/oracle.hpp"
#include "scenebm/selfcheck.hpp"
#include "scenebm/synth.hpp"
#include "scenebm/trainer.hpp"

using namespace scenebm;

namespace {

std::vector<EncodedScene> small_dataset(std::size_t per_category = 30, std::uint64_t seed = 2) {
  SynthSpec spec;
  spec.object_labels = {"desk", "monitor", "chair", "bed", "pillow", "lamp"};
  spec.categories = {{"office", {{"desk", 0.9}, {"monitor", 0.8}, {"chair", 0.6}}, {{"on_top", "monitor", "desk"}}},
                     {"bedroom", {{"bed", 0.9}, {"pillow", 0.7}, {"lamp", 0.5}}, {{"on_top", "pillow", "bed"}}}};
  spec.noise_rate = 0.05;
  spec.scenes_per_category = per_category;
  spec.seed = seed;
  const SynthResult r = synth_generate(spec);
  return encode_all(r.scenes, r.vocabulary);
}

HyperParams small_hyper() {
  HyperParams h;
  h.batch_size = 8;
  h.k_pos = 2;
  h.max_epochs = 4;
  h.seed = 3;
  return h;
}

Model small_model(std::uint64_t seed = 4) {
  NetworkConfig c = triway_config(6, 4, 5, 3);
  c.seed = seed;
  return init_model(c);
}

}  // namespace

TEST_CASE("hyper parameters") {
  HyperParams h;
  CHECK(h.learning_rate == 0.5);
  CHECK(h.batch_size == 32);
  CHECK(h.patience == 3);
  CHECK(h.tri_rate() == 0.5);
  h.tri_learning_rate = 0.1;
  CHECK(h.tri_rate() == 0.1);
  CHECK(hyper_from_json(hyper_to_json(h)).tri_rate() == 0.1);
  h = {};
  h.batch_size = 0;
  CHECK_THROWS_AS(h.validate(), ValidationError);
  h = {};
  h.patience = 0;
  CHECK_THROWS_AS(h.validate(), ValidationError);
  h = {};
  h.learning_rate = -1.0;
  CHECK_THROWS_AS(h.validate(), ValidationError);
}

TEST_CASE("phase statistics") {
  SUBCASE("all probabilities zero") {
    const NetworkConfig c = triway_config(3, 2, 2, 2);
    EdgeStats s = EdgeStats::zeros(c);
    NodeProbabilities p{std::vector<double>(3), std::vector<double>(18), std::vector<double>(2), std::vector<double>(2)};
    accumulate_phase_statistics(s, c, p);
    CHECK(s == EdgeStats::zeros(c));
  }

  SUBCASE("one certain pair") {
    const NetworkConfig c = triway_config(3, 2, 2, 2);
    EdgeStats s = EdgeStats::zeros(c);
    NodeProbabilities p{{1, 0, 1}, std::vector<double>(18), {0, 0}, {0, 0}};
    p.r[RelationId{1, 2, 0}.flat(3)] = 1.0;
    accumulate_phase_statistics(s, c, p);
    CHECK(s.tri == std::vector<double>{0.0, 1.0});
  }

  SUBCASE("tri-way sums match a pair loop, diagonal counted once") {
    Rng rng(5);
    const NetworkConfig c = triway_config(4, 3, 2, 2);
    for (int trial = 0; trial < 50; ++trial) {
      NodeProbabilities p{std::vector<double>(c.V), std::vector<double>(c.relation_count()), std::vector<double>(c.H1),
                          std::vector<double>(c.H2)};
      for (auto* v : {&p.v, &p.r, &p.h1, &p.h2}) {
        for (double& x : *v) x = uniform01(rng);
      }
      EdgeStats s = EdgeStats::zeros(c);
      accumulate_phase_statistics(s, c, p);
      for (std::size_t t = 0; t < c.Tc; ++t) {
        double expected = 0.0;
        for (std::size_t j = 0; j < c.V; ++j) {
          for (std::size_t k = 0; k < c.V; ++k) {
            const double r = p.r[RelationId{t, j, k}.flat(c.V)];
            expected += j == k ? r * p.v[j] : r * p.v[j] * p.v[k];
          }
        }
        CHECK(s.tri[t] == doctest::Approx(expected).epsilon(1e-12));
      }
      for (std::size_t a = 0; a < c.H1; ++a) {
        for (std::size_t j = 0; j < c.V; ++j) CHECK(s.hv(a, j) == doctest::Approx(p.h1[a] * p.v[j]));
      }
    }
  }

  SUBCASE("per-type relation columns sum their relation nodes") {
    NetworkConfig c = triway_config(2, 2, 1, 0);
    c.rh_sharing = RhSharing::per_type;
    EdgeStats s = EdgeStats::zeros(c);
    NodeProbabilities p{{1, 1}, std::vector<double>(8, 0.25), {0.5}, {}};
    accumulate_phase_statistics(s, c, p);
    CHECK(s.rh(0, 0) == doctest::Approx(0.5));
    CHECK(s.rh(0, 1) == doctest::Approx(0.5));
  }

  SUBCASE("pair-sum equivalence on random tiny networks") {
    const CheckResult r = check_triway_pair_sum(100, 6);
    INFO(format_check(r));
    CHECK(r.passed);
  }
}

TEST_CASE("apply_update") {
  Rng rng(7);
  const NetworkConfig c = triway_config(3, 2, 2, 2);
  const Model start = random_tiny_model(c, rng);

  SUBCASE("equal statistics leave the weights alone") {
    Model m = start;
    EdgeStats s = EdgeStats::zeros(c);
    s.hv(0, 0) = 0.3;
    s.tri = {2.0, 1.0};
    apply_update(m, s, s, 0.5);
    CHECK(m == start);
  }

  SUBCASE("ascent step of alpha") {
    Model m = start;
    EdgeStats pos = EdgeStats::zeros(c), neg = EdgeStats::zeros(c);
    pos.hv(1, 2) = 1.0;
    pos.tri[1] = 1.0;
    apply_update(m, pos, neg, 0.5);
    CHECK(m.params.w_hv(1, 2) == start.params.w_hv(1, 2) + 0.5);
    CHECK(m.params.w_tri[1] == start.params.w_tri[1] + 0.5);
    CHECK(m.params.w_tri[0] == start.params.w_tri[0]);
    CHECK(m.params.w_tri.size() == c.Tc);
  }

  SUBCASE("separate tri-way rate") {
    Model m = start;
    EdgeStats pos = EdgeStats::zeros(c), neg = EdgeStats::zeros(c);
    pos.hv(0, 0) = 1.0;
    pos.tri[0] = 1.0;
    apply_update(m, pos, neg, 0.5, 0.125);
    CHECK(m.params.w_hv(0, 0) == start.params.w_hv(0, 0) + 0.5);
    CHECK(m.params.w_tri[0] == start.params.w_tri[0] + 0.125);
  }

  SUBCASE("non-finite updates are rejected and name the family") {
    Model m = start;
    EdgeStats pos = EdgeStats::zeros(c), neg = EdgeStats::zeros(c);
    pos.h12(0, 1) = std::numeric_limits<double>::infinity();
    try {
      apply_update(m, pos, neg, 0.5);
      FAIL("expected NumericError");
    } catch (const NumericError& e) {
      CHECK(std::string(e.what()).find("W_12") != std::string::npos);
    }
    CHECK(m == start);
  }

  SUBCASE("exact statistics raise the exact log-likelihood") {
    const CheckResult r = check_update_ascent(8);
    INFO(format_check(r));
    CHECK(r.passed);
  }

  SUBCASE("the descent sign is caught") {
    const UpdateRule flipped = [](Model& m, const EdgeStats& pos, const EdgeStats& neg, double alpha) {
      apply_update(m, neg, pos, alpha);
    };
    CHECK_FALSE(check_update_ascent(8, 0.01, flipped).passed);
  }
}

TEST_CASE("reconstruction_error") {
  SceneVector a(2, 1);
  a.add_object(0);

  SUBCASE("perfect") {
    NodeProbabilities p{{1, 0}, std::vector<double>(4), {}, {}};
    const auto e = reconstruction_error(std::vector<SceneVector>{a}, std::vector<NodeProbabilities>{p});
    CHECK(e.objects == 0.0);
    CHECK(e.relations == 0.0);
  }

  SUBCASE("half-way guess") {
    NodeProbabilities p{{0.5, 0.5}, std::vector<double>(4), {}, {}};
    const auto e = reconstruction_error(std::vector<SceneVector>{a}, std::vector<NodeProbabilities>{p});
    CHECK(e.objects == doctest::Approx(0.5));
  }

  SUBCASE("all-zero reconstruction counts the active nodes") {
    SceneVector b(5, 2);
    for (std::size_t j : {0, 2, 3}) b.add_object(j);
    b.add_relation(RelationId{1, 2, 3});
    NodeProbabilities p{std::vector<double>(5), std::vector<double>(50), {}, {}};
    const auto e = reconstruction_error(std::vector<SceneVector>{b}, std::vector<NodeProbabilities>{p});
    CHECK(e.objects == 3.0);
    CHECK(e.relations == 1.0);
  }

  SUBCASE("shape mismatch") {
    NodeProbabilities p{{0.5}, std::vector<double>(4), {}, {}};
    CHECK_THROWS_AS(reconstruction_error(std::vector<SceneVector>{a}, std::vector<NodeProbabilities>{p}),
                    ValidationError);
  }
}

TEST_CASE("train_batch") {
  const auto data = small_dataset();
  const HyperParams h = small_hyper();
  std::vector<EncodedScene> batch(data.begin(), data.begin() + 8);

  SUBCASE("batch order does not matter") {
    Model a = small_model(), b = small_model();
    std::vector<EncodedScene> reversed(batch.rbegin(), batch.rend());
    train_batch(a, batch, 1, h);
    train_batch(b, reversed, 1, h);
    CHECK(a == b);
  }

  SUBCASE("thread count does not matter") {
    Model a = small_model(), b = small_model();
    train_batch(a, batch, 1, h, 1);
    train_batch(b, batch, 1, h, 3);
    CHECK(a == b);
  }

  SUBCASE("tri-way weights stay Tc scalars") {
    Model m = small_model();
    for (std::size_t epoch = 1; epoch <= 5; ++epoch) {
      train_batch(m, batch, epoch, h);
      CHECK(m.params.w_tri.size() == m.config.Tc);
    }
  }
}

TEST_CASE("train") {
  const auto data = small_dataset();
  std::vector<EncodedScene> train_set(data.begin(), data.begin() + 40);
  std::vector<EncodedScene> val_set(data.begin() + 40, data.end());

  SUBCASE("zero learning rate") {
    HyperParams h = small_hyper();
    h.learning_rate = 0.0;
    const Model m = small_model();
    const TrainResult r = train(m, train_set, val_set, h);
    CHECK(r.model == m);
    REQUIRE(r.history.epochs.size() >= 2);
    for (const auto& e : r.history.epochs) {
      CHECK(e.val_err == doctest::Approx(r.history.epochs.front().val_err).epsilon(0.1));
    }
  }

  SUBCASE("empty splits") {
    CHECK_THROWS_AS(train(small_model(), {}, val_set, small_hyper()), ValidationError);
    CHECK_THROWS_AS(train(small_model(), train_set, {}, small_hyper()), ValidationError);
  }

  SUBCASE("mismatched network") {
    NetworkConfig c = triway_config(7, 4, 3, 2);
    CHECK_THROWS_AS(train(init_model(c), train_set, val_set, small_hyper()), ValidationError);
  }

  SUBCASE("deterministic") {
    const TrainResult a = train(small_model(), train_set, val_set, small_hyper());
    const TrainResult b = train(small_model(), train_set, val_set, small_hyper());
    CHECK(a.model == b.model);
    CHECK(history_to_json(a.history) == history_to_json(b.history));
  }

  SUBCASE("the best validation epoch is returned") {
    HyperParams h = small_hyper();
    h.max_epochs = 12;
    h.patience = 2;
    const TrainResult full = train(small_model(), train_set, val_set, h);
    const auto& epochs = full.history.epochs;
    const auto best = std::min_element(epochs.begin(), epochs.end(),
                                       [](const auto& x, const auto& y) { return x.val_err < y.val_err; });
    CHECK(full.history.best_epoch == best->epoch);
    CHECK(full.history.best_val_err == best->val_err);
    if (full.history.early_stopped) CHECK(full.history.stop_epoch == full.history.best_epoch + h.patience);

    HyperParams upto = h;
    upto.max_epochs = full.history.best_epoch;
    upto.patience = 100;
    const TrainResult prefix = train(small_model(), train_set, val_set, upto);
    CHECK(prefix.model == full.model);
  }

  SUBCASE("resuming continues bit for bit") {
    HyperParams h = small_hyper();
    h.patience = 100;
    h.max_epochs = 2;
    const TrainResult first = train(small_model(), train_set, val_set, h);
    REQUIRE(first.history.best_epoch == 2);
    const TrainResult resumed = train(first.model, train_set, val_set, h, {}, &first.history);
    h.max_epochs = 4;
    const TrainResult straight = train(small_model(), train_set, val_set, h);
    CHECK(resumed.history.epochs.size() == 4);
    CHECK(history_to_json(resumed.history) == history_to_json(straight.history));
    CHECK(resumed.model == straight.model);
  }

  SUBCASE("epoch callback and log lines") {
    std::vector<std::size_t> seen;
    TrainOptions options;
    options.on_epoch = [&](const EpochRecord& e) { seen.push_back(e.epoch); };
    const TrainResult r = train(small_model(), train_set, val_set, small_hyper(), options);
    CHECK(seen.size() == r.history.epochs.size());
    const auto line = nlohmann::json::parse(epoch_log_line(r.history.epochs.front()));
    for (const char* key : {"epoch", "obj_err", "rel_err", "val_err"}) CHECK(line.contains(key));
    CHECK(history_to_json(history_from_json(history_to_json(r.history))) == history_to_json(r.history));
  }
}

TEST_CASE("data-driven bias initialisation") {
  const auto data = small_dataset();
  NetworkConfig c = triway_config(6, 4, 3, 2);
  c.use_biases = true;
  Model m = init_model(c);
  init_visible_biases(m, data, 1e-3);
  double desk = 0.0;
  for (const auto& s : data) desk += s.vector.has_object(0) ? 1.0 : 0.0;
  const double p = std::clamp(desk / static_cast<double>(data.size()), 1e-3, 1.0 - 1e-3);
  CHECK(m.params.biases->objects[0] == doctest::Approx(std::log(p / (1.0 - p))));
  CHECK(m.params.biases->relations[RelationId{0, 5, 5}.flat(6)] == doctest::Approx(std::log(1e-3 / (1.0 - 1e-3))));

  Model plain = init_model(triway_config(6, 4, 3, 2));
  CHECK_THROWS_AS(init_visible_biases(plain, data, 1e-3), ValidationError);
}
