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

#include "scenebm/edge_stats.hpp"

#include <cmath>

namespace scenebm {

EdgeStats EdgeStats::zeros(const NetworkConfig& c) {
  EdgeStats s;
  s.hv = Matrix(c.H1, c.V);
  s.rh = Matrix(c.H1, c.rh_columns());
  s.h12 = Matrix(c.H1, c.H2);
  if (c.use_triway) s.tri.assign(c.Tc, 0.0);
  if (c.use_biases) {
    s.v.assign(c.V, 0.0);
    s.r.assign(c.relation_count(), 0.0);
    s.h1.assign(c.H1, 0.0);
    s.h2.assign(c.H2, 0.0);
  }
  return s;
}

void EdgeStats::check_shape(const NetworkConfig& c) const {
  const EdgeStats ref = zeros(c);
  if (!hv.same_shape(ref.hv) || !rh.same_shape(ref.rh) || !h12.same_shape(ref.h12) ||
      tri.size() != ref.tri.size() || v.size() != ref.v.size() || r.size() != ref.r.size() ||
      h1.size() != ref.h1.size() || h2.size() != ref.h2.size()) {
    throw ValidationError("edge statistics shape does not match the config");
  }
}

namespace {

template <typename Op>
void combine(EdgeStats& a, const EdgeStats& b, Op op) {
  if (!a.hv.same_shape(b.hv) || !a.rh.same_shape(b.rh) || !a.h12.same_shape(b.h12) ||
      a.tri.size() != b.tri.size() || a.v.size() != b.v.size() || a.r.size() != b.r.size() ||
      a.h1.size() != b.h1.size() || a.h2.size() != b.h2.size()) {
    throw ValidationError("edge statistics shapes differ");
  }
  auto apply = [&](std::span<double> x, std::span<const double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = op(x[i], y[i]);
  };
  apply(a.hv.values(), b.hv.values());
  apply(a.rh.values(), b.rh.values());
  apply(a.h12.values(), b.h12.values());
  apply(a.tri, b.tri);
  apply(a.v, b.v);
  apply(a.r, b.r);
  apply(a.h1, b.h1);
  apply(a.h2, b.h2);
}

std::vector<double> as_values(const std::vector<std::uint8_t>& bits) {
  return {bits.begin(), bits.end()};
}

}  // namespace

EdgeStats& EdgeStats::operator+=(const EdgeStats& other) {
  combine(*this, other, [](double x, double y) { return x + y; });
  return *this;
}

EdgeStats& EdgeStats::operator-=(const EdgeStats& other) {
  combine(*this, other, [](double x, double y) { return x - y; });
  return *this;
}

EdgeStats& EdgeStats::operator*=(double factor) {
  for (double& x : hv.values()) x *= factor;
  for (double& x : rh.values()) x *= factor;
  for (double& x : h12.values()) x *= factor;
  for (auto* vec : {&tri, &v, &r, &h1, &h2}) {
    for (double& x : *vec) x *= factor;
  }
  return *this;
}

NodeProbabilities node_values(const NetworkState& state, bool use_probabilities) {
  NodeProbabilities out;
  auto pick = [&](const std::vector<double>& prob, const std::vector<std::uint8_t>& bits) {
    if (use_probabilities && prob.size() == bits.size()) return prob;
    return as_values(bits);
  };
  out.v = pick(state.prob.v, state.v);
  out.r = pick(state.prob.r, state.r);
  out.h1 = pick(state.prob.h1, state.h1);
  out.h2 = pick(state.prob.h2, state.h2);
  return out;
}

void accumulate_phase_statistics(EdgeStats& stats, const NetworkConfig& c, const NodeProbabilities& x) {
  if (x.v.size() != c.V || x.r.size() != c.relation_count() || x.h1.size() != c.H1 || x.h2.size() != c.H2) {
    throw ValidationError("phase statistics: node values do not match the config");
  }
  stats.check_shape(c);
  const std::size_t V = c.V;
  const std::size_t VV = V * V;

  // Relation mass per W_rh column, only needed for per-type sharing.
  std::vector<double> type_mass;
  if (c.rh_sharing == RhSharing::per_type) {
    type_mass.assign(c.Tc, 0.0);
    for (std::size_t rel = 0; rel < x.r.size(); ++rel) type_mass[rel / VV] += x.r[rel];
  }
  for (std::size_t m = 0; m < c.H1; ++m) {
    const double hm = x.h1[m];
    if (hm == 0.0) continue;
    auto hv = stats.hv.row(m);
    for (std::size_t j = 0; j < V; ++j) hv[j] += hm * x.v[j];
    auto rh = stats.rh.row(m);
    if (c.rh_sharing == RhSharing::per_node) {
      for (std::size_t rel = 0; rel < x.r.size(); ++rel) rh[rel] += hm * x.r[rel];
    } else {
      for (std::size_t t = 0; t < c.Tc; ++t) rh[t] += hm * type_mass[t];
    }
    auto h12 = stats.h12.row(m);
    for (std::size_t n = 0; n < c.H2; ++n) h12[n] += hm * x.h2[n];
  }
  if (c.use_triway) {
    for (std::size_t t = 0; t < c.Tc; ++t) {
      double sum = 0.0;
      for (std::size_t j = 0; j < V; ++j) {
        const double pj = x.v[j];
        if (pj == 0.0) continue;
        const std::size_t base = t * VV + j * V;
        for (std::size_t k = 0; k < V; ++k) {
          const double pr = x.r[base + k];
          if (pr == 0.0) continue;
          sum += k == j ? pr * pj : pr * pj * x.v[k];
        }
      }
      stats.tri[t] += sum;
    }
  }
  if (c.use_biases) {
    for (std::size_t j = 0; j < V; ++j) stats.v[j] += x.v[j];
    for (std::size_t rel = 0; rel < x.r.size(); ++rel) stats.r[rel] += x.r[rel];
    for (std::size_t m = 0; m < c.H1; ++m) stats.h1[m] += x.h1[m];
    for (std::size_t n = 0; n < c.H2; ++n) stats.h2[n] += x.h2[n];
  }
}

EdgeStats phase_statistics(const Model& model, const NetworkState& state, bool use_probabilities) {
  state.check_shape(model.config);
  EdgeStats stats = EdgeStats::zeros(model.config);
  accumulate_phase_statistics(stats, model.config, node_values(state, use_probabilities));
  return stats;
}

namespace {

std::vector<double> delta(std::span<const double> pos, std::span<const double> neg, double alpha,
                          const char* family) {
  std::vector<double> d(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    d[i] = alpha * (pos[i] - neg[i]);
    if (!std::isfinite(d[i])) throw NumericError(std::string("apply_update: non-finite update in ") + family);
  }
  return d;
}

void add_into(std::span<double> w, const std::vector<double>& d, const char* family) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] += d[i];
    if (!std::isfinite(w[i])) throw NumericError(std::string("apply_update: weights diverged in ") + family);
  }
}

}  // namespace

void apply_update(Model& model, const EdgeStats& positive, const EdgeStats& negative, double alpha) {
  apply_update(model, positive, negative, alpha, alpha);
}

void apply_update(Model& model, const EdgeStats& positive, const EdgeStats& negative, double alpha,
                  double tri_alpha) {
  const NetworkConfig& c = model.config;
  positive.check_shape(c);
  negative.check_shape(c);
  ModelParams& p = model.params;
  // All deltas are computed and checked before any weight changes.
  const auto d_hv = delta(positive.hv.values(), negative.hv.values(), alpha, "W_hv");
  const auto d_rh = delta(positive.rh.values(), negative.rh.values(), alpha, "W_rh");
  const auto d_12 = delta(positive.h12.values(), negative.h12.values(), alpha, "W_12");
  const auto d_tri = delta(positive.tri, negative.tri, tri_alpha, "w_tri");
  const auto d_bv = delta(positive.v, negative.v, alpha, "b_v");
  const auto d_br = delta(positive.r, negative.r, alpha, "b_r");
  const auto d_bh1 = delta(positive.h1, negative.h1, alpha, "b_h1");
  const auto d_bh2 = delta(positive.h2, negative.h2, alpha, "b_h2");

  ModelParams next = p;
  add_into(next.w_hv.values(), d_hv, "W_hv");
  add_into(next.w_rh.values(), d_rh, "W_rh");
  add_into(next.w_12.values(), d_12, "W_12");
  add_into(next.w_tri, d_tri, "w_tri");
  if (next.biases) {
    add_into(next.biases->objects, d_bv, "b_v");
    add_into(next.biases->relations, d_br, "b_r");
    add_into(next.biases->hidden1, d_bh1, "b_h1");
    add_into(next.biases->hidden2, d_bh2, "b_h2");
  }
  p = std::move(next);
}

}  // namespace scenebm
