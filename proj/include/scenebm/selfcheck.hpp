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

#ifndef SCENEBM_SELFCHECK_HPP
#define SCENEBM_SELFCHECK_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "scenebm/edge_stats.hpp"
#include "scenebm/model.hpp"

namespace scenebm {

struct CheckResult {
  std::string name;
  bool passed = false;
  double deviation = 0.0;  // worst observed deviation
  double tolerance = 0.0;
  std::string message;
};

// Implementation hooks the checks exercise, replaceable so that a broken
// implementation can be shown to fail.
using UpdateRule = std::function<void(Model&, const EdgeStats& positive, const EdgeStats& negative, double alpha)>;
using TriAggregator = std::function<void(EdgeStats&, const NetworkConfig&, const NodeProbabilities&)>;

// Random tiny model with weights ~ N(0, scale^2) on every family.
Model random_tiny_model(const NetworkConfig& config, Rng& rng, double scale = 1.0);
// V=3, Tc=1, H1=2, H2=2: 16 nodes.
NetworkConfig tiny_config();

// E(x=1) - E(x=0) == -node_input(x) on random (params, state, node).
CheckResult check_energy_difference(std::size_t trials, std::uint64_t seed, double tolerance = 1e-9);

// Empirical marginals over `steps` free negative-phase steps against the
// exact marginals.
CheckResult check_stationarity(std::size_t steps, std::uint64_t seed, double tolerance = 0.02);

// exact_gradient against central differences of exact_loglik.
CheckResult check_gradient(std::uint64_t seed, double step = 1e-5, double tolerance = 1e-5);

// One update with exact statistics and rate alpha must raise the exact
// log-likelihood. An empty rule means apply_update.
CheckResult check_update_ascent(std::uint64_t seed, double alpha = 0.01, const UpdateRule& rule = {});

// Aggregated tri-way statistics against a per-pair enumeration of the
// factorized node distribution, on `cases` random tiny networks, and
// exact_gradient's tri-way entries against the sum of per-pair exact
// gradients.
// An empty aggregator means accumulate_phase_statistics.
CheckResult check_triway_pair_sum(std::size_t cases, std::uint64_t seed, double tolerance = 1e-9,
                                  const TriAggregator& aggregate = {});

std::vector<CheckResult> run_all_checks(std::uint64_t seed);

std::string format_check(const CheckResult& result);

}  // namespace scenebm

#endif  // SCENEBM_SELFCHECK_HPP
