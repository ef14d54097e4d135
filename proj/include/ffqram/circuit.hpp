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

/**
 * @file
 * Gate-level intermediate representation and its simulator binding.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "ffqram/error.hpp"
#include "ffqram/matrix.hpp"
#include "ffqram/statevector.hpp"

namespace ffqram {
namespace ir {

/// Flips qubits[k] iff bits[k] == '0'.
struct ClassicalXLayer {
  std::string bits;
  std::vector<int> qubits;
  bool operator==(const ClassicalXLayer&) const = default;
};

struct H {
  int qubit;
  bool operator==(const H&) const = default;
};

struct X {
  int qubit;
  bool operator==(const X&) const = default;
};

struct RotY {
  int qubit;
  double theta;
  bool operator==(const RotY&) const = default;
};

struct Phase {
  int qubit;
  double phi;
  bool operator==(const Phase&) const = default;
};

struct CnRotY {
  std::vector<int> controls;
  int target;
  double theta;
  bool operator==(const CnRotY&) const = default;
};

/// Controlled Phase(phi) * RotY(theta).
struct CnRotArbitrary {
  std::vector<int> controls;
  int target;
  double theta;
  double phi;
  bool operator==(const CnRotArbitrary&) const = default;
};

struct CnNot {
  std::vector<int> controls;
  int target;
  bool operator==(const CnNot&) const = default;
};

struct Toffoli {
  int c1;
  int c2;
  int target;
  bool operator==(const Toffoli&) const = default;
};

struct Swap {
  int a;
  int b;
  bool operator==(const Swap&) const = default;
};

struct CSwap {
  int control;
  int a;
  int b;
  bool operator==(const CSwap&) const = default;
};

/// Qutrit Hadamard (3-point DFT) on the |00>,|01>,|10> span of (a, b).
struct SubspaceH3 {
  int a;
  int b;
  bool operator==(const SubspaceH3&) const = default;
};

}  // namespace ir

using Gate = std::variant<ir::ClassicalXLayer, ir::H, ir::RotY, ir::Phase,
                          ir::X, ir::CnRotY, ir::CnRotArbitrary, ir::CnNot,
                          ir::Toffoli, ir::Swap, ir::CSwap, ir::SubspaceH3>;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Mnemonic used by the text format.
inline std::string_view gate_name(const Gate& g) {
  return std::visit(
      Overloaded{
          [](const ir::ClassicalXLayer&) { return std::string_view("CXLAYER"); },
          [](const ir::H&) { return std::string_view("H"); },
          [](const ir::RotY&) { return std::string_view("RY"); },
          [](const ir::Phase&) { return std::string_view("PHASE"); },
          [](const ir::X&) { return std::string_view("X"); },
          [](const ir::CnRotY&) { return std::string_view("CNRY"); },
          [](const ir::CnRotArbitrary&) { return std::string_view("CNR"); },
          [](const ir::CnNot&) { return std::string_view("CNNOT"); },
          [](const ir::Toffoli&) { return std::string_view("TOFFOLI"); },
          [](const ir::Swap&) { return std::string_view("SWAP"); },
          [](const ir::CSwap&) { return std::string_view("CSWAP"); },
          [](const ir::SubspaceH3&) { return std::string_view("H3"); },
      },
      g);
}

/// Every qubit the gate touches, controls first.
inline std::vector<int> gate_qubits(const Gate& g) {
  return std::visit(
      Overloaded{
          [](const ir::ClassicalXLayer& x) { return x.qubits; },
          [](const ir::H& x) { return std::vector<int>{x.qubit}; },
          [](const ir::RotY& x) { return std::vector<int>{x.qubit}; },
          [](const ir::Phase& x) { return std::vector<int>{x.qubit}; },
          [](const ir::X& x) { return std::vector<int>{x.qubit}; },
          [](const ir::CnRotY& x) {
            auto q = x.controls;
            q.push_back(x.target);
            return q;
          },
          [](const ir::CnRotArbitrary& x) {
            auto q = x.controls;
            q.push_back(x.target);
            return q;
          },
          [](const ir::CnNot& x) {
            auto q = x.controls;
            q.push_back(x.target);
            return q;
          },
          [](const ir::Toffoli& x) {
            return std::vector<int>{x.c1, x.c2, x.target};
          },
          [](const ir::Swap& x) { return std::vector<int>{x.a, x.b}; },
          [](const ir::CSwap& x) {
            return std::vector<int>{x.control, x.a, x.b};
          },
          [](const ir::SubspaceH3& x) { return std::vector<int>{x.a, x.b}; },
      },
      g);
}

inline void validate_gate(const Gate& g, int num_qubits) {
  const auto qubits = gate_qubits(g);
  for (int q : qubits)
    if (q < 0 || q >= num_qubits)
      throw BoundsError(std::string(gate_name(g)) + " addresses qubit " +
                        std::to_string(q) + " of a " +
                        std::to_string(num_qubits) + "-qubit circuit");
  check_distinct(qubits);
  std::visit(Overloaded{
                 [](const ir::ClassicalXLayer& x) {
                   if (x.bits.size() != x.qubits.size())
                     throw ValidationError("CXLAYER bit count differs from qubit count");
                   if (x.bits.find_first_not_of("01") != std::string::npos)
                     throw ValidationError("CXLAYER bits must be 0 or 1");
                 },
                 [](const ir::RotY& x) {
                   if (!std::isfinite(x.theta)) throw ValidationError("non-finite angle");
                 },
                 [](const ir::Phase& x) {
                   if (!std::isfinite(x.phi)) throw ValidationError("non-finite angle");
                 },
                 [](const ir::CnRotY& x) {
                   if (!std::isfinite(x.theta)) throw ValidationError("non-finite angle");
                 },
                 [](const ir::CnRotArbitrary& x) {
                   if (!std::isfinite(x.theta) || !std::isfinite(x.phi))
                     throw ValidationError("non-finite angle");
                 },
                 [](const auto&) {},
             },
             g);
}

/// An ordered gate sequence over a fixed register. Ancilla qubits are
/// documented as prepared in |0>.
class Circuit {
 public:
  explicit Circuit(int num_qubits = 0, std::vector<int> ancilla_qubits = {})
      : num_qubits_(num_qubits), ancilla_(std::move(ancilla_qubits)) {
    if (num_qubits_ < 0) throw ValidationError("negative qubit count");
    std::sort(ancilla_.begin(), ancilla_.end());
    check_distinct(ancilla_);
    for (int a : ancilla_)
      if (a < 0 || a >= num_qubits_)
        throw BoundsError("ancilla qubit " + std::to_string(a) +
                          " out of range");
  }

  Circuit& add(Gate g) {
    validate_gate(g, num_qubits_);
    gates_.push_back(std::move(g));
    return *this;
  }

  Circuit& append(const Circuit& other) {
    for (const auto& g : other.gates()) add(g);
    return *this;
  }

  int num_qubits() const noexcept { return num_qubits_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  const std::vector<int>& ancilla_qubits() const noexcept { return ancilla_; }
  std::size_t size() const noexcept { return gates_.size(); }
  bool empty() const noexcept { return gates_.empty(); }

  bool is_ancilla(int q) const {
    return std::binary_search(ancilla_.begin(), ancilla_.end(), q);
  }

  /// Number of gates of each kind, keyed by mnemonic.
  std::map<std::string, int> gate_counts() const {
    std::map<std::string, int> counts;
    for (const auto& g : gates_) ++counts[std::string(gate_name(g))];
    return counts;
  }

  bool operator==(const Circuit&) const = default;

 private:
  int num_qubits_;
  std::vector<int> ancilla_;
  std::vector<Gate> gates_;
};

/// Applies one gate. Gate qubit q acts on state qubit map[q]; only basis
/// states satisfying `cond` are affected.
inline void apply_gate(StateVector& s, const Gate& g, std::span<const int> map,
                       Condition cond = {}) {
  auto at = [&](int q) { return map[static_cast<std::size_t>(q)]; };
  auto controls = [&](const std::vector<int>& cs) {
    std::vector<int> mapped;
    mapped.reserve(cs.size());
    for (int c : cs) mapped.push_back(at(c));
    return cond & s.all_ones(mapped);
  };
  std::visit(
      Overloaded{
          [&](const ir::ClassicalXLayer& x) {
            for (std::size_t k = 0; k < x.bits.size(); ++k)
              if (x.bits[k] == '0') s.apply_x(at(x.qubits[k]), cond);
          },
          [&](const ir::H& x) { s.apply_matrix(at(x.qubit), gates::h(), cond); },
          [&](const ir::X& x) { s.apply_x(at(x.qubit), cond); },
          [&](const ir::RotY& x) {
            s.apply_matrix(at(x.qubit), gates::rot_y(x.theta), cond);
          },
          [&](const ir::Phase& x) {
            s.apply_matrix(at(x.qubit), gates::phase(x.phi), cond);
          },
          [&](const ir::CnRotY& x) {
            s.apply_matrix(at(x.target), gates::rot_y(x.theta),
                           controls(x.controls));
          },
          [&](const ir::CnRotArbitrary& x) {
            s.apply_matrix(at(x.target), gates::rot_arbitrary(x.theta, x.phi),
                           controls(x.controls));
          },
          [&](const ir::CnNot& x) {
            s.apply_x(at(x.target), controls(x.controls));
          },
          [&](const ir::Toffoli& x) {
            s.apply_x(at(x.target), controls({x.c1, x.c2}));
          },
          [&](const ir::Swap& x) { s.apply_swap(at(x.a), at(x.b), cond); },
          [&](const ir::CSwap& x) {
            s.apply_swap(at(x.a), at(x.b), controls({x.control}));
          },
          [&](const ir::SubspaceH3& x) {
            s.apply_matrix(at(x.a), at(x.b), gates::dft3_embedded(), cond);
          },
      },
      g);
}

inline std::vector<int> identity_map(int n) {
  std::vector<int> m(static_cast<std::size_t>(n));
  std::iota(m.begin(), m.end(), 0);
  return m;
}

/// Runs `c` on the state qubits listed in `map` (circuit qubit q -> map[q]),
/// conditioned on `cond`.
inline void run(StateVector& s, const Circuit& c, std::span<const int> map,
                Condition cond = {}) {
  if (map.size() != static_cast<std::size_t>(c.num_qubits()))
    throw ValidationError("qubit map of size " + std::to_string(map.size()) +
                          " for a " + std::to_string(c.num_qubits()) +
                          "-qubit circuit");
  for (const auto& g : c.gates()) apply_gate(s, g, map, cond);
}

inline void run(StateVector& s, const Circuit& c) {
  if (s.num_qubits() != c.num_qubits())
    throw ValidationError("circuit has " + std::to_string(c.num_qubits()) +
                          " qubits, state has " +
                          std::to_string(s.num_qubits()));
  const auto map = identity_map(c.num_qubits());
  run(s, c, map);
}

inline StateVector simulate(const Circuit& c, StateVector initial) {
  run(initial, c);
  return initial;
}

}  // namespace ffqram
