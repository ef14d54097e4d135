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
 * Dense state-vector simulation.
 *
 * Bit order: qubit k is the bit of weight 2^(q-1-k) in the amplitude index,
 * so the bitstring "d0 d1 ... d(q-1)" read left to right names qubits 0..q-1.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ffqram/error.hpp"
#include "ffqram/matrix.hpp"

namespace ffqram {

using Index = std::uint64_t;

/// Largest register the dense backend will allocate.
inline constexpr int kMaxQubits = 30;

/// Restricts a gate to basis states with (index & mask) == value.
struct Condition {
  Index mask = 0;
  Index value = 0;

  bool holds(Index i) const noexcept { return (i & mask) == value; }

  Condition operator&(const Condition& other) const {
    if ((mask & other.mask & (value ^ other.value)) != 0)
      throw ValidationError("contradictory control conditions");
    return {mask | other.mask, value | other.value};
  }
};

class StateVector {
 public:
  /// |0...0> on `num_qubits` qubits. Zero qubits gives the scalar state 1.
  explicit StateVector(int num_qubits = 1) : num_qubits_(checked(num_qubits)) {
    amplitudes_.assign(Index{1} << num_qubits_, Complex{0.0});
    amplitudes_[0] = 1.0;
  }

  StateVector(int num_qubits, std::vector<Complex> amplitudes)
      : num_qubits_(checked(num_qubits)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != (Index{1} << num_qubits_))
      throw ValidationError("amplitude count " +
                            std::to_string(amplitudes_.size()) +
                            " does not match 2^" + std::to_string(num_qubits_));
  }

  /// Computational basis state named by a bitstring such as "0110".
  static StateVector basis(std::string_view bits) {
    StateVector s(static_cast<int>(bits.size()));
    s.amplitudes_[0] = 0.0;
    s.amplitudes_[s.index_of(bits)] = 1.0;
    return s;
  }

  /// Tensor product with `this` occupying the leading qubits.
  StateVector tensor(const StateVector& rhs) const {
    std::vector<Complex> out(size() * rhs.size());
    for (Index i = 0; i < size(); ++i)
      for (Index j = 0; j < rhs.size(); ++j)
        out[i * rhs.size() + j] = amplitudes_[i] * rhs.amplitudes_[j];
    return StateVector(num_qubits_ + rhs.num_qubits_, std::move(out));
  }

  int num_qubits() const noexcept { return num_qubits_; }
  Index size() const noexcept { return amplitudes_.size(); }

  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::span<Complex> amplitudes() noexcept { return amplitudes_; }
  Complex operator[](Index i) const { return amplitudes_[i]; }
  Complex& operator[](Index i) { return amplitudes_[i]; }

  Index mask_of(int qubit) const {
    check_qubit(qubit);
    return Index{1} << (num_qubits_ - 1 - qubit);
  }

  Index index_of(std::string_view bits) const {
    if (static_cast<int>(bits.size()) != num_qubits_)
      throw ValidationError("bitstring '" + std::string(bits) + "' has length " +
                            std::to_string(bits.size()) + ", expected " +
                            std::to_string(num_qubits_));
    Index idx = 0;
    for (char ch : bits) {
      if (ch != '0' && ch != '1')
        throw ValidationError("bitstring '" + std::string(bits) +
                              "' contains a non-binary character");
      idx = (idx << 1) | static_cast<Index>(ch == '1');
    }
    return idx;
  }

  /// Condition "every listed qubit is |1>".
  Condition all_ones(std::span<const int> qubits) const {
    Condition c;
    for (int q : qubits) {
      const Index m = mask_of(q);
      c.mask |= m;
      c.value |= m;
    }
    return c;
  }

  /// Condition "qubit k has bit bits[k]" for the listed qubits.
  Condition pattern(std::span<const int> qubits, std::string_view bits) const {
    if (qubits.size() != bits.size())
      throw ValidationError("pattern length does not match qubit count");
    Condition c;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      const Index m = mask_of(qubits[k]);
      c.mask |= m;
      if (bits[k] == '1') c.value |= m;
    }
    return c;
  }

  double norm_squared() const {
    return std::accumulate(
        amplitudes_.begin(), amplitudes_.end(), 0.0,
        [](double acc, const Complex& a) { return acc + std::norm(a); });
  }

  void normalize() {
    const double n = std::sqrt(norm_squared());
    if (n == 0.0) throw ValidationError("cannot normalize the zero vector");
    for (auto& a : amplitudes_) a /= n;
  }

  /// Applies `u` to `target` on the basis states satisfying `cond`.
  void apply_matrix(int target, const Matrix2& u, Condition cond = {}) {
    const Index tmask = mask_of(target);
    if (cond.mask & tmask)
      throw ValidationError("control set contains the target qubit " +
                            std::to_string(target));
    const Index n = size();
    for (Index i = 0; i < n; ++i) {
      if ((i & tmask) || !cond.holds(i)) continue;
      const Index j = i | tmask;
      const Complex a0 = amplitudes_[i];
      const Complex a1 = amplitudes_[j];
      amplitudes_[i] = u(0, 0) * a0 + u(0, 1) * a1;
      amplitudes_[j] = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }

  /// Applies the 4x4 `u` to the ordered pair (a, b); local index 2*a + b.
  void apply_matrix(int a, int b, const Matrix4& u, Condition cond = {}) {
    const Index ma = mask_of(a);
    const Index mb = mask_of(b);
    if (a == b) throw ValidationError("two-qubit gate on a repeated qubit");
    if (cond.mask & (ma | mb))
      throw ValidationError("control set overlaps a two-qubit gate target");
    const Index n = size();
    for (Index i = 0; i < n; ++i) {
      if ((i & (ma | mb)) || !cond.holds(i)) continue;
      const Index idx[4] = {i, i | mb, i | ma, i | ma | mb};
      Complex in[4];
      for (int k = 0; k < 4; ++k) in[k] = amplitudes_[idx[k]];
      for (int r = 0; r < 4; ++r) {
        Complex acc = 0.0;
        for (int c = 0; c < 4; ++c) acc += u(r, c) * in[c];
        amplitudes_[idx[r]] = acc;
      }
    }
  }

  void apply_x(int target, Condition cond = {}) {
    const Index tmask = mask_of(target);
    if (cond.mask & tmask)
      throw ValidationError("control set contains the target qubit " +
                            std::to_string(target));
    for (Index i = 0; i < size(); ++i)
      if (!(i & tmask) && cond.holds(i))
        std::swap(amplitudes_[i], amplitudes_[i | tmask]);
  }

  void apply_swap(int a, int b, Condition cond = {}) {
    const Index ma = mask_of(a);
    const Index mb = mask_of(b);
    if (a == b) throw ValidationError("swap of a qubit with itself");
    if (cond.mask & (ma | mb))
      throw ValidationError("control set overlaps swapped qubits");
    for (Index i = 0; i < size(); ++i)
      if ((i & ma) && !(i & mb) && cond.holds(i))
        std::swap(amplitudes_[i], amplitudes_[(i & ~ma) | mb]);
  }

  /// Multiplies every amplitude satisfying `cond` by `factor`.
  void apply_phase(Complex factor, Condition cond) {
    for (Index i = 0; i < size(); ++i)
      if (cond.holds(i)) amplitudes_[i] *= factor;
  }

 private:
  static int checked(int q) {
    if (q < 0 || q > kMaxQubits)
      throw BoundsError("qubit count " + std::to_string(q) +
                        " outside [0, " + std::to_string(kMaxQubits) + "]");
    return q;
  }

  void check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= num_qubits_)
      throw BoundsError("qubit index " + std::to_string(qubit) +
                        " out of range for " + std::to_string(num_qubits_) +
                        " qubits");
  }

  int num_qubits_;
  std::vector<Complex> amplitudes_;
};

inline void check_distinct(std::span<const int> qubits) {
  std::vector<int> sorted(qubits.begin(), qubits.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ValidationError("qubit indices must be distinct");
}

inline StateVector apply_single_qubit(StateVector state, int qubit,
                                      const Matrix2& u) {
  if (!is_unitary(u)) throw ValidationError("matrix is not unitary");
  state.apply_matrix(qubit, u);
  return state;
}

/// Applies `u` to `qubit` on the subspace where every control is |1>.
inline StateVector apply_controlled(StateVector state,
                                    std::span<const int> controls, int qubit,
                                    const Matrix2& u) {
  if (!is_unitary(u)) throw ValidationError("matrix is not unitary");
  if (std::find(controls.begin(), controls.end(), qubit) != controls.end())
    throw ValidationError("control set contains the target qubit " +
                          std::to_string(qubit));
  check_distinct(controls);
  state.apply_matrix(qubit, u, state.all_ones(controls));
  return state;
}

inline StateVector apply_controlled(StateVector state,
                                    std::initializer_list<int> controls,
                                    int qubit, const Matrix2& u) {
  return apply_controlled(std::move(state),
                          std::span<const int>(controls.begin(), controls.size()),
                          qubit, u);
}

/// Classically controlled X layer: flips qubits[k] iff bits[k] == '0'.
inline void classical_x_layer_inplace(StateVector& state, std::string_view bits,
                                      std::span<const int> qubits) {
  if (bits.size() != qubits.size())
    throw ValidationError("classical control has " +
                          std::to_string(bits.size()) + " bits for " +
                          std::to_string(qubits.size()) + " qubits");
  check_distinct(qubits);
  Index flip = 0;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] != '0' && bits[k] != '1')
      throw ValidationError("classical control bits must be 0 or 1");
    if (bits[k] == '0') flip |= state.mask_of(qubits[k]);
  }
  if (flip == 0) return;
  auto amps = state.amplitudes();
  for (Index i = 0; i < state.size(); ++i) {
    const Index j = i ^ flip;
    if (i < j) std::swap(amps[i], amps[j]);
  }
}

inline StateVector apply_classical_x_layer(StateVector state,
                                           std::string_view bits,
                                           std::span<const int> qubits) {
  classical_x_layer_inplace(state, bits, qubits);
  return state;
}

inline double probability_of(const StateVector& state, int qubit, int outcome) {
  const Index m = state.mask_of(qubit);
  const Index want = outcome ? m : 0;
  double p = 0.0;
  const auto amps = state.amplitudes();
  for (Index i = 0; i < state.size(); ++i)
    if ((i & m) == want) p += std::norm(amps[i]);
  return p;
}

struct PostSelection {
  StateVector state;
  double probability;
};

/// Projects `qubit` onto `outcome`, removes it from the register and
/// renormalizes.
inline PostSelection post_select(const StateVector& state, int qubit,
                                 int outcome) {
  const double p = probability_of(state, qubit, outcome);
  if (p <= 1e-12)
    throw PostSelectionError("post-selection of qubit " + std::to_string(qubit) +
                             " on |" + std::to_string(outcome) +
                             "> is impossible (probability " +
                             std::to_string(p) + ")");
  const int q = state.num_qubits();
  const int low_bits = q - 1 - qubit;
  const Index low_mask = (Index{1} << low_bits) - 1;
  const Index bit = outcome ? (Index{1} << low_bits) : 0;
  std::vector<Complex> out(state.size() / 2);
  const double scale = 1.0 / std::sqrt(p);
  const auto amps = state.amplitudes();
  for (Index r = 0; r < out.size(); ++r) {
    const Index full = ((r & ~low_mask) << 1) | bit | (r & low_mask);
    out[r] = amps[full] * scale;
  }
  return {StateVector(q - 1, std::move(out)), p};
}

/// <a|b>.
inline Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw ValidationError("inner product of states with " +
                          std::to_string(a.num_qubits()) + " and " +
                          std::to_string(b.num_qubits()) + " qubits");
  Complex acc = 0.0;
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (Index i = 0; i < a.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

/// |<a|b>|^2.
inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

}  // namespace ffqram
