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

#include "scenebm/oracle.hpp"

#include <cmath>
#include <limits>

namespace scenebm {

namespace {

void check_limit(const NetworkConfig& c, TinyLimit limit) {
  if (c.total_nodes() > limit.max_total_nodes || c.total_nodes() >= 63) {
    throw NumericError("oracle: " + std::to_string(c.total_nodes()) + " nodes exceed the enumeration limit of " +
                       std::to_string(limit.max_total_nodes));
  }
}

// Node i of the flat order v, r, h1, h2.
std::uint8_t& node_bit(NetworkState& s, const NetworkConfig& c, std::size_t i) {
  if (i < c.V) return s.v[i];
  i -= c.V;
  if (i < c.relation_count()) return s.r[i];
  i -= c.relation_count();
  if (i < c.H1) return s.h1[i];
  return s.h2[i - c.H1];
}

std::uint8_t node_value(const NetworkState& s, const NetworkConfig& c, std::size_t i) {
  if (i < c.V) return s.v[i];
  i -= c.V;
  if (i < c.relation_count()) return s.r[i];
  i -= c.relation_count();
  if (i < c.H1) return s.h1[i];
  return s.h2[i - c.H1];
}

// Calls fn(state) for every assignment of `free_nodes`, lexicographic with
// the first free node most significant. Other nodes keep their values.
template <typename Fn>
void enumerate(const NetworkConfig& c, NetworkState base, const std::vector<std::size_t>& free_nodes, Fn&& fn) {
  const std::size_t n = free_nodes.size();
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t s = 0; s < count; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      node_bit(base, c, free_nodes[i]) = static_cast<std::uint8_t>((s >> (n - 1 - i)) & 1U);
    }
    fn(static_cast<const NetworkState&>(base));
  }
}

std::vector<std::size_t> range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> out;
  for (std::size_t i = begin; i < end; ++i) out.push_back(i);
  return out;
}

struct LogSumExp {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;

  void add(double x) {
    if (x <= max) {
      sum += std::exp(x - max);
    } else {
      sum = sum * std::exp(max - x) + 1.0;
      max = x;
    }
  }
  double value() const { return max + std::log(sum); }
};

// r_tjk * v_j * v_k for binary values; a same-label pair reads v_j once.
double triway_product(const NetworkState& s, const NetworkConfig& c, std::size_t t, std::size_t j, std::size_t k) {
  return s.r[(t * c.V + j) * c.V + k] && s.v[j] && s.v[k] ? 1.0 : 0.0;
}

// Sufficient statistics of one binary state, scaled by `weight`.
void add_statistics(EdgeStats& acc, const NetworkConfig& c, const NetworkState& s, double weight) {
  for (std::size_t m = 0; m < c.H1; ++m) {
    if (!s.h1[m]) continue;
    for (std::size_t j = 0; j < c.V; ++j) {
      if (s.v[j]) acc.hv(m, j) += weight;
    }
    for (std::size_t rel = 0; rel < c.relation_count(); ++rel) {
      if (s.r[rel]) acc.rh(m, c.rh_column(rel)) += weight;
    }
    for (std::size_t n = 0; n < c.H2; ++n) {
      if (s.h2[n]) acc.h12(m, n) += weight;
    }
  }
  if (c.use_triway) {
    for (std::size_t t = 0; t < c.Tc; ++t) {
      for (std::size_t j = 0; j < c.V; ++j) {
        for (std::size_t k = 0; k < c.V; ++k) acc.tri[t] += weight * triway_product(s, c, t, j, k);
      }
    }
  }
  if (c.use_biases) {
    for (std::size_t j = 0; j < c.V; ++j) acc.v[j] += weight * s.v[j];
    for (std::size_t rel = 0; rel < c.relation_count(); ++rel) acc.r[rel] += weight * s.r[rel];
    for (std::size_t m = 0; m < c.H1; ++m) acc.h1[m] += weight * s.h1[m];
    for (std::size_t n = 0; n < c.H2; ++n) acc.h2[n] += weight * s.h2[n];
  }
}

NetworkState with_visibles(const NetworkConfig& c, const VisibleState& vis) {
  if (vis.v.size() != c.V || vis.r.size() != c.relation_count()) {
    throw ValidationError("oracle: visible state does not match the config");
  }
  NetworkState s = NetworkState::zeros(c);
  s.v = vis.v;
  s.r = vis.r;
  return s;
}

// Expectation of f(state) under the hidden posterior of each datum,
// averaged over the dataset; f receives (state, posterior weight).
template <typename Fn>
void for_each_data_posterior(const Model& model, std::span<const VisibleState> data, Fn&& fn) {
  const NetworkConfig& c = model.config;
  const double T = c.temperature;
  const auto hidden = range(c.visible_dimension(), c.total_nodes());
  for (const VisibleState& vis : data) {
    const NetworkState base = with_visibles(c, vis);
    LogSumExp lse;
    enumerate(c, base, hidden, [&](const NetworkState& s) { lse.add(-energy(model, s) / T); });
    const double log_norm = lse.value();
    enumerate(c, base, hidden, [&](const NetworkState& s) {
      fn(s, std::exp(-energy(model, s) / T - log_norm));
    });
  }
}

}  // namespace

double log_partition_function(const Model& model, TinyLimit limit) {
  const NetworkConfig& c = model.config;
  check_limit(c, limit);
  const double T = c.temperature;
  LogSumExp lse;
  enumerate(c, NetworkState::zeros(c), range(0, c.total_nodes()),
            [&](const NetworkState& s) { lse.add(-energy(model, s) / T); });
  return lse.value();
}

double partition_function(const Model& model, TinyLimit limit) {
  return std::exp(log_partition_function(model, limit));
}

NodeProbabilities exact_marginals(const Model& model, const ClampMask& mask, const NetworkState& values,
                                  TinyLimit limit) {
  const NetworkConfig& c = model.config;
  check_limit(c, limit);
  mask.check_shape(c);
  values.check_shape(c);
  NetworkState base = values;
  base.prob = {};
  mask.apply(base);

  std::vector<std::size_t> free_nodes;
  for (std::size_t i = 0; i < c.total_nodes(); ++i) {
    bool clamped = false;
    if (i < c.V) {
      clamped = mask.objects[i];
    } else if (i < c.visible_dimension()) {
      clamped = mask.relations[i - c.V];
    } else if (i < c.visible_dimension() + c.H1) {
      clamped = mask.hidden1[i - c.visible_dimension()] >= 0;
    } else {
      clamped = mask.hidden2[i - c.visible_dimension() - c.H1] >= 0;
    }
    if (!clamped) free_nodes.push_back(i);
  }

  const double T = c.temperature;
  LogSumExp lse;
  enumerate(c, base, free_nodes, [&](const NetworkState& s) { lse.add(-energy(model, s) / T); });
  const double log_z = lse.value();

  std::vector<double> on(c.total_nodes(), 0.0);
  enumerate(c, base, free_nodes, [&](const NetworkState& s) {
    const double p = std::exp(-energy(model, s) / T - log_z);
    for (std::size_t i = 0; i < on.size(); ++i) {
      if (node_value(s, c, i)) on[i] += p;
    }
  });
  std::vector<bool> is_free(c.total_nodes(), false);
  for (std::size_t i : free_nodes) is_free[i] = true;
  for (std::size_t i = 0; i < on.size(); ++i) {
    if (!is_free[i]) on[i] = node_value(base, c, i) ? 1.0 : 0.0;
  }

  NodeProbabilities out;
  auto first = on.begin();
  out.v.assign(first, first + static_cast<std::ptrdiff_t>(c.V));
  first += static_cast<std::ptrdiff_t>(c.V);
  out.r.assign(first, first + static_cast<std::ptrdiff_t>(c.relation_count()));
  first += static_cast<std::ptrdiff_t>(c.relation_count());
  out.h1.assign(first, first + static_cast<std::ptrdiff_t>(c.H1));
  first += static_cast<std::ptrdiff_t>(c.H1);
  out.h2.assign(first, on.end());
  return out;
}

NodeProbabilities exact_marginals(const Model& model, TinyLimit limit) {
  return exact_marginals(model, ClampMask::none(model.config), NetworkState::zeros(model.config), limit);
}

double exact_loglik(const Model& model, std::span<const VisibleState> data, TinyLimit limit) {
  const NetworkConfig& c = model.config;
  check_limit(c, limit);
  if (data.empty()) throw ValidationError("exact_loglik: empty dataset");
  const double log_z = log_partition_function(model, limit);
  const double T = c.temperature;
  const auto hidden = range(c.visible_dimension(), c.total_nodes());
  double total = 0.0;
  for (const VisibleState& vis : data) {
    LogSumExp lse;
    enumerate(c, with_visibles(c, vis), hidden, [&](const NetworkState& s) { lse.add(-energy(model, s) / T); });
    total += lse.value() - log_z;
  }
  return total / static_cast<double>(data.size());
}

ExactPhaseStats exact_phase_statistics(const Model& model, std::span<const VisibleState> data, TinyLimit limit) {
  const NetworkConfig& c = model.config;
  check_limit(c, limit);
  if (data.empty()) throw ValidationError("exact_phase_statistics: empty dataset");
  ExactPhaseStats out{EdgeStats::zeros(c), EdgeStats::zeros(c)};

  const double inv_n = 1.0 / static_cast<double>(data.size());
  for_each_data_posterior(model, data, [&](const NetworkState& s, double w) {
    add_statistics(out.data, c, s, w * inv_n);
  });

  const double T = c.temperature;
  const double log_z = log_partition_function(model, limit);
  enumerate(c, NetworkState::zeros(c), range(0, c.total_nodes()), [&](const NetworkState& s) {
    add_statistics(out.model, c, s, std::exp(-energy(model, s) / T - log_z));
  });
  return out;
}

EdgeStats exact_gradient(const Model& model, std::span<const VisibleState> data, TinyLimit limit) {
  ExactPhaseStats stats = exact_phase_statistics(model, data, limit);
  EdgeStats grad = stats.data;
  grad -= stats.model;
  grad *= 1.0 / model.config.temperature;
  return grad;
}

double exact_pair_gradient(const Model& model, std::span<const VisibleState> data, const RelationId& pair,
                           TinyLimit limit) {
  const NetworkConfig& c = model.config;
  check_limit(c, limit);
  if (pair.type >= c.Tc || pair.subject >= c.V || pair.object >= c.V) {
    throw ValidationError("exact_pair_gradient: pair out of range");
  }
  double data_term = 0.0;
  const double inv_n = 1.0 / static_cast<double>(data.size());
  for_each_data_posterior(model, data, [&](const NetworkState& s, double w) {
    data_term += w * inv_n * triway_product(s, c, pair.type, pair.subject, pair.object);
  });
  const double T = c.temperature;
  const double log_z = log_partition_function(model, limit);
  double model_term = 0.0;
  enumerate(c, NetworkState::zeros(c), range(0, c.total_nodes()), [&](const NetworkState& s) {
    model_term += std::exp(-energy(model, s) / T - log_z) * triway_product(s, c, pair.type, pair.subject, pair.object);
  });
  return (data_term - model_term) / T;
}

std::vector<VisibleState> all_visible_states(const NetworkConfig& c, TinyLimit limit) {
  check_limit(c, limit);
  std::vector<VisibleState> out;
  enumerate(c, NetworkState::zeros(c), range(0, c.visible_dimension()),
            [&](const NetworkState& s) { out.push_back({s.v, s.r}); });
  return out;
}

}  // namespace scenebm
