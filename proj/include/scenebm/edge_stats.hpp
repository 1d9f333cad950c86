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

#ifndef SCENEBM_EDGE_STATS_HPP
#define SCENEBM_EDGE_STATS_HPP

#include <string>
#include <vector>

#include "scenebm/model.hpp"

namespace scenebm {

// Expected joint activation of every edge in one phase, laid out like the
// weights they update. `tri` holds one entry per relation type: the sum
// over all (subject, object) label pairs of that type.
struct EdgeStats {
  Matrix hv;
  Matrix rh;
  Matrix h12;
  std::vector<double> tri;
  // Unary statistics for biases; empty when biases are disabled.
  std::vector<double> v;
  std::vector<double> r;
  std::vector<double> h1;
  std::vector<double> h2;

  static EdgeStats zeros(const NetworkConfig& config);
  void check_shape(const NetworkConfig& config) const;

  EdgeStats& operator+=(const EdgeStats& other);
  EdgeStats& operator-=(const EdgeStats& other);
  EdgeStats& operator*=(double factor);
  friend bool operator==(const EdgeStats&, const EdgeStats&) = default;
};

// Per-node activation values feeding the statistics: probabilities where a
// node was sampled, its bit where it was clamped.
NodeProbabilities node_values(const NetworkState& state, bool use_probabilities = true);

// Adds the product-of-marginals edge statistics of `values` into `stats`.
//   hv[m][j]  = p(h1_m) p(v_j)
//   rh[m][c]  = p(h1_m) * sum of p(r) over relations in column c
//   h12[m][n] = p(h1_m) p(h2_n)
//   tri[t]    = sum_{j != k} p(r_tjk) p(v_j) p(v_k) + sum_j p(r_tjj) p(v_j)
// The diagonal term uses p(v_j) once since v_j * v_j = v_j.
void accumulate_phase_statistics(EdgeStats& stats, const NetworkConfig& config,
                                 const NodeProbabilities& values);

EdgeStats phase_statistics(const Model& model, const NetworkState& state, bool use_probabilities = true);

// w += alpha * (positive - negative) for every family. The tri-way update
// touches exactly Tc scalars. Throws NumericError naming the family when
// the update is not finite; the model is left untouched in that case.
void apply_update(Model& model, const EdgeStats& positive, const EdgeStats& negative, double alpha);
// Same, with its own rate for the tri-way family.
void apply_update(Model& model, const EdgeStats& positive, const EdgeStats& negative, double alpha,
                  double tri_alpha);

}  // namespace scenebm

#endif  // SCENEBM_EDGE_STATS_HPP
