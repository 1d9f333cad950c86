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

#include "scenebm/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "scenebm/oracle.hpp"
#include "scenebm/sampler.hpp"

namespace scenebm {

namespace {

// Every trainable scalar of a model, in a fixed order.
std::vector<double*> parameters(Model& model) {
  std::vector<double*> out;
  ModelParams& p = model.params;
  for (Matrix* m : {&p.w_hv, &p.w_rh, &p.w_12}) {
    for (double& w : m->values()) out.push_back(&w);
  }
  for (double& w : p.w_tri) out.push_back(&w);
  if (p.biases) {
    for (auto* vec : {&p.biases->objects, &p.biases->relations, &p.biases->hidden1, &p.biases->hidden2}) {
      for (double& w : *vec) out.push_back(&w);
    }
  }
  return out;
}

// Gradient entries in the same order as parameters().
std::vector<double> flatten(const EdgeStats& g) {
  std::vector<double> out;
  for (const Matrix* m : {&g.hv, &g.rh, &g.h12}) out.insert(out.end(), m->values().begin(), m->values().end());
  out.insert(out.end(), g.tri.begin(), g.tri.end());
  for (const auto* vec : {&g.v, &g.r, &g.h1, &g.h2}) out.insert(out.end(), vec->begin(), vec->end());
  return out;
}

NetworkState random_state(const NetworkConfig& c, Rng& rng) {
  NetworkState s = NetworkState::zeros(c);
  for (auto* bits : {&s.v, &s.r, &s.h1, &s.h2}) {
    for (auto& b : *bits) b = bernoulli(rng, 0.5);
  }
  return s;
}

std::vector<VisibleState> random_dataset(const NetworkConfig& c, std::size_t n, Rng& rng) {
  std::vector<VisibleState> data;
  for (std::size_t i = 0; i < n; ++i) {
    NetworkState s = random_state(c, rng);
    data.push_back({s.v, s.r});
  }
  return data;
}

std::vector<double> random_probabilities(std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  for (double& p : out) {
    const double u = uniform01(rng);
    // A share of exact 0s and 1s, as clamped nodes report.
    p = u < 0.1 ? 0.0 : u < 0.2 ? 1.0 : uniform01(rng);
  }
  return out;
}

NodeProbabilities random_values(const NetworkConfig& c, Rng& rng) {
  return {random_probabilities(c.V, rng), random_probabilities(c.relation_count(), rng),
          random_probabilities(c.H1, rng), random_probabilities(c.H2, rng)};
}

// E[r v_j v_k] for independent Bernoulli nodes, by summing over the joint
// assignments of the distinct nodes involved.
double pair_expectation(double pr, double pj, double pk, bool same_label) {
  double sum = 0.0;
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      const double wa = a ? pr : 1.0 - pr;
      const double wb = b ? pj : 1.0 - pj;
      if (same_label) {
        sum += wa * wb * a * b;
        continue;
      }
      for (int d = 0; d <= 1; ++d) {
        const double wd = d ? pk : 1.0 - pk;
        sum += wa * wb * wd * a * b * d;
      }
    }
  }
  return sum;
}

double per_pair_tri(const NetworkConfig& c, const NodeProbabilities& x, std::size_t t) {
  double sum = 0.0;
  for (std::size_t j = 0; j < c.V; ++j) {
    for (std::size_t k = 0; k < c.V; ++k) {
      sum += pair_expectation(x.r[(t * c.V + j) * c.V + k], x.v[j], x.v[k], j == k);
    }
  }
  return sum;
}

CheckResult make(std::string name, double deviation, double tolerance, std::string message = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.deviation = deviation;
  r.tolerance = tolerance;
  r.passed = std::isfinite(deviation) && deviation < tolerance;
  r.message = std::move(message);
  return r;
}

NetworkConfig random_small_config(Rng& rng, std::size_t max_nodes) {
  for (;;) {
    NetworkConfig c;
    c.V = 1 + uniform_index(rng, 3);
    c.Tc = 1 + uniform_index(rng, 4);
    c.H1 = 1 + uniform_index(rng, 2);
    c.H2 = uniform_index(rng, 3);
    c.use_triway = true;
    c.rh_sharing = bernoulli(rng, 0.5) ? RhSharing::per_node : RhSharing::per_type;
    if (c.total_nodes() <= max_nodes) return c;
  }
}

}  // namespace

NetworkConfig tiny_config() {
  NetworkConfig c = triway_config(3, 1, 2, 2);
  c.seed = 0;
  return c;
}

Model random_tiny_model(const NetworkConfig& config, Rng& rng, double scale) {
  config.validate();
  Model model{config, zero_params(config)};
  std::normal_distribution<double> gauss(0.0, scale);
  for (double* w : parameters(model)) *w = gauss(rng);
  return model;
}

CheckResult check_energy_difference(std::size_t trials, std::uint64_t seed, double tolerance) {
  Rng rng = make_stream({seed, 0xde});
  double worst = 0.0;
  std::string where;
  for (std::size_t i = 0; i < trials; ++i) {
    NetworkConfig c = random_small_config(rng, 40);
    c.use_triway = bernoulli(rng, 0.75);
    c.use_biases = bernoulli(rng, 0.5);
    const Model model = random_tiny_model(c, rng);
    NetworkState s = random_state(c, rng);
    const std::size_t sizes[] = {c.V, c.relation_count(), c.H1, c.H2};
    std::size_t pick = uniform_index(rng, c.total_nodes());
    int kind = 0;
    while (pick >= sizes[kind]) pick -= sizes[kind++];
    const NodeRef node{static_cast<NodeKind>(kind), pick};
    auto& bits = kind == 0 ? s.v : kind == 1 ? s.r : kind == 2 ? s.h1 : s.h2;
    bits[pick] = 1;
    const double e1 = energy(model, s);
    bits[pick] = 0;
    const double e0 = energy(model, s);
    const double dev = std::abs((e1 - e0) + node_input(model, s, node));
    if (dev > worst || !std::isfinite(dev)) {
      worst = dev;
      where = "trial " + std::to_string(i) + ", node kind " + std::to_string(kind) + " index " + std::to_string(pick);
    }
  }
  return make("energy_difference", worst, tolerance, worst > 0.0 ? "worst at " + where : std::string());
}

CheckResult check_stationarity(std::size_t steps, std::uint64_t seed, double tolerance) {
  Rng rng = make_stream({seed, 0x57});
  const Model model = random_tiny_model(tiny_config(), rng);
  const NetworkConfig& c = model.config;
  const NodeProbabilities exact = exact_marginals(model);

  NetworkState state = NetworkState::zeros(c);
  const ClampMask mask = ClampMask::none(c);
  const std::size_t burn_in = 1000;
  for (std::size_t s = 0; s < burn_in; ++s) negative_phase_step(model, state, mask, rng, c.temperature);
  NodeProbabilities counts{std::vector<double>(c.V), std::vector<double>(c.relation_count()),
                           std::vector<double>(c.H1), std::vector<double>(c.H2)};
  for (std::size_t s = 0; s < steps; ++s) {
    negative_phase_step(model, state, mask, rng, c.temperature);
    for (std::size_t j = 0; j < c.V; ++j) counts.v[j] += state.v[j];
    for (std::size_t j = 0; j < c.relation_count(); ++j) counts.r[j] += state.r[j];
    for (std::size_t j = 0; j < c.H1; ++j) counts.h1[j] += state.h1[j];
    for (std::size_t j = 0; j < c.H2; ++j) counts.h2[j] += state.h2[j];
  }
  double worst = 0.0;
  std::string where;
  const char* names[] = {"object", "relation", "hidden1", "hidden2"};
  const std::vector<double>* emp[] = {&counts.v, &counts.r, &counts.h1, &counts.h2};
  const std::vector<double>* ref[] = {&exact.v, &exact.r, &exact.h1, &exact.h2};
  for (int kind = 0; kind < 4; ++kind) {
    for (std::size_t i = 0; i < emp[kind]->size(); ++i) {
      const double dev = std::abs((*emp[kind])[i] / static_cast<double>(steps) - (*ref[kind])[i]);
      if (dev > worst) {
        worst = dev;
        where = std::string(names[kind]) + " " + std::to_string(i);
      }
    }
  }
  return make("sampler_stationarity", worst, tolerance, "worst marginal at " + where);
}

CheckResult check_gradient(std::uint64_t seed, double step, double tolerance) {
  Rng rng = make_stream({seed, 0x9a});
  Model model = random_tiny_model(tiny_config(), rng, 0.5);
  const std::vector<VisibleState> data = random_dataset(model.config, 8, rng);
  const std::vector<double> grad = flatten(exact_gradient(model, data));
  const std::vector<double*> params = parameters(model);
  double worst = 0.0;
  std::size_t worst_index = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = *params[i];
    *params[i] = saved + step;
    const double up = exact_loglik(model, data);
    *params[i] = saved - step;
    const double down = exact_loglik(model, data);
    *params[i] = saved;
    const double fd = (up - down) / (2.0 * step);
    const double rel = std::abs(fd - grad[i]) / std::max({std::abs(fd), std::abs(grad[i]), 1e-6});
    if (rel > worst || !std::isfinite(rel)) {
      worst = rel;
      worst_index = i;
    }
  }
  return make("gradient_finite_difference", worst, tolerance,
              "worst relative error at parameter " + std::to_string(worst_index) + " of " +
                  std::to_string(params.size()));
}

CheckResult check_update_ascent(std::uint64_t seed, double alpha, const UpdateRule& rule) {
  Rng rng = make_stream({seed, 0xa5});
  Model model = random_tiny_model(tiny_config(), rng, 0.5);
  const std::vector<VisibleState> data = random_dataset(model.config, 8, rng);
  const double before = exact_loglik(model, data);
  const ExactPhaseStats stats = exact_phase_statistics(model, data);
  if (rule) {
    rule(model, stats.data, stats.model, alpha);
  } else {
    apply_update(model, stats.data, stats.model, alpha);
  }
  const double after = exact_loglik(model, data);
  char msg[128];
  std::snprintf(msg, sizeof msg, "log-likelihood %.12g -> %.12g", before, after);
  CheckResult r = make("update_ascent", before - after, 0.0, msg);
  r.passed = after > before;
  return r;
}

CheckResult check_triway_pair_sum(std::size_t cases, std::uint64_t seed, double tolerance,
                                  const TriAggregator& aggregate) {
  Rng rng = make_stream({seed, 0x3e});
  double worst = 0.0;
  std::string failure;
  for (std::size_t i = 0; i < cases; ++i) {
    const NetworkConfig c = random_small_config(rng, 14);
    const Model model = random_tiny_model(c, rng);
    if (model.params.w_tri.size() != c.Tc) {
      failure = "tri-way parameter count " + std::to_string(model.params.w_tri.size()) + " != Tc";
      worst = std::numeric_limits<double>::infinity();
      break;
    }

    // Trainer statistics from node probabilities.
    const NodeProbabilities pos = random_values(c, rng);
    const NodeProbabilities neg = random_values(c, rng);
    EdgeStats sp = EdgeStats::zeros(c);
    EdgeStats sn = EdgeStats::zeros(c);
    const TriAggregator& agg = aggregate ? aggregate : TriAggregator(accumulate_phase_statistics);
    agg(sp, c, pos);
    agg(sn, c, neg);
    if (sp.tri.size() != c.Tc || sn.tri.size() != c.Tc) {
      failure = "aggregated tri-way statistic has the wrong length";
      worst = std::numeric_limits<double>::infinity();
      break;
    }
    for (std::size_t t = 0; t < c.Tc; ++t) {
      const double expected = per_pair_tri(c, pos, t) - per_pair_tri(c, neg, t);
      const double dev = std::abs((sp.tri[t] - sn.tri[t]) - expected);
      if (dev > worst) {
        worst = dev;
        failure = "trainer statistic, case " + std::to_string(i) + " type " + std::to_string(t);
      }
    }

    // Exact gradient against one enumeration per label pair.
    const std::vector<VisibleState> data = random_dataset(c, 3, rng);
    const EdgeStats grad = exact_gradient(model, data);
    for (std::size_t t = 0; t < c.Tc; ++t) {
      double sum = 0.0;
      for (std::size_t j = 0; j < c.V; ++j) {
        for (std::size_t k = 0; k < c.V; ++k) sum += exact_pair_gradient(model, data, {t, j, k});
      }
      const double dev = std::abs(grad.tri[t] - sum);
      if (dev > worst) {
        worst = dev;
        failure = "exact gradient, case " + std::to_string(i) + " type " + std::to_string(t);
      }
    }
  }
  return make("triway_pair_sum", worst, tolerance, failure.empty() ? std::string() : "worst at " + failure);
}

std::vector<CheckResult> run_all_checks(std::uint64_t seed) {
  return {check_energy_difference(1000, seed),
          check_stationarity(200000, seed),
          check_gradient(seed),
          check_update_ascent(seed),
          check_triway_pair_sum(100, seed)};
}

std::string format_check(const CheckResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %-28s deviation %.3e (tolerance %.1e)", r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.deviation, r.tolerance);
  std::string out = buf;
  if (!r.message.empty()) out += "  " + r.message;
  return out;
}

}  // namespace scenebm
