// Copyright 2026 The FFQRAM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "ffqram/circuit.hpp"

namespace ffqram {

/// Gates grouped into time steps; gates within a layer act on disjoint qubits.
struct Schedule {
  std::vector<std::vector<Gate>> layers;
  /// layer_of[i] is the layer holding gate i of the scheduled circuit.
  std::vector<std::size_t> layer_of;

  std::size_t depth() const noexcept { return layers.size(); }
};

/// Greedy as-soon-as-possible layering: each gate lands one layer after the
/// latest layer already occupied on any of its qubits.
inline Schedule schedule(const Circuit& c) {
  Schedule s;
  std::vector<std::size_t> next_free(static_cast<std::size_t>(c.num_qubits()), 0);
  s.layer_of.reserve(c.size());
  for (const auto& g : c.gates()) {
    const auto qubits = gate_qubits(g);
    std::size_t layer = 0;
    for (int q : qubits) layer = std::max(layer, next_free[static_cast<std::size_t>(q)]);
    for (int q : qubits) next_free[static_cast<std::size_t>(q)] = layer + 1;
    if (layer >= s.layers.size()) s.layers.resize(layer + 1);
    s.layers[layer].push_back(g);
    s.layer_of.push_back(layer);
  }
  return s;
}

}  // namespace ffqram
