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
 * Quantum forking: one prepared state |Phi> evolves under several unitaries
 * in superposition, and the modified swap test reads signed inner products
 * off the control.
 *
 * Two-branch layout: control qubit 0, block 1 on qubits 1..n, block 2 on
 * qubits n+1..2n. Starting from |0>|Phi>|a>, a Hadamard on the control and n
 * controlled swaps give (|0>|Phi>|a> + |1>|a>|Phi>)/sqrt2; U1 acts on block 1
 * when the control is 0 and U2 on block 2 when it is 1, yielding
 *
 *     (|0> U1|Phi> |a> + |1> |a> U2|Phi>) / sqrt2.
 *
 * A second swap layer aligns both branches on block 1, and a final Hadamard
 * gives P(0) = [1 + Re<Phi1|Phi2>] / 2. With the phase e^{-i pi/2} on the
 * control's |1> before that Hadamard, P(0) = [1 + Im<Phi1|Phi2>] / 2.
 *
 * Three-branch layout: the control qutrit lives in qubits (0, 1) with
 * |0>,|1>,|2> = |00>,|01>,|10>; |11> is never populated. Blocks start at
 * qubit 2.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ffqram/circuit.hpp"
#include "ffqram/error.hpp"
#include "ffqram/statevector.hpp"

namespace ffqram {

/// Prepares the database state on demand and counts how often it was asked.
class QdbSource {
 public:
  explicit QdbSource(std::function<StateVector()> prepare) : prepare_(std::move(prepare)) {}

  StateVector prepare() {
    ++preparations_;
    return prepare_();
  }

  long long preparations() const noexcept { return preparations_; }

 private:
  std::function<StateVector()> prepare_;
  long long preparations_ = 0;
};

struct ForkSpec {
  StateVector phi;
  std::vector<Circuit> branch_unitaries;
  StateVector ancilla;

  /// Ancilla defaults to |0...0>.
  ForkSpec(StateVector phi_state, std::vector<Circuit> branches)
      : phi(std::move(phi_state)), branch_unitaries(std::move(branches)), ancilla(phi.num_qubits()) {}

  ForkSpec(StateVector phi_state, std::vector<Circuit> branches, StateVector ancilla_state)
      : phi(std::move(phi_state)), branch_unitaries(std::move(branches)), ancilla(std::move(ancilla_state)) {}

  /// Draws |Phi> from `source` exactly once.
  static ForkSpec from_source(QdbSource& source, std::vector<Circuit> branches) {
    return ForkSpec(source.prepare(), std::move(branches));
  }

  int width() const noexcept { return phi.num_qubits(); }
  int branches() const noexcept { return static_cast<int>(branch_unitaries.size()); }

  void validate(int expected_branches) const {
    if (branches() != expected_branches)
      throw DomainError("expected " + std::to_string(expected_branches) + " branch unitaries, got " +
                        std::to_string(branches()));
    const int n = width();
    if (n < 1) throw ValidationError("forked state needs at least one qubit");
    if (ancilla.num_qubits() != n)
      throw ValidationError("ancilla has " + std::to_string(ancilla.num_qubits()) + " qubits, data has " +
                            std::to_string(n));
    for (std::size_t i = 0; i < branch_unitaries.size(); ++i)
      if (branch_unitaries[i].num_qubits() != n)
        throw ValidationError("branch unitary " + std::to_string(i + 1) + " acts on " +
                              std::to_string(branch_unitaries[i].num_qubits()) + " qubits, data has " +
                              std::to_string(n));
  }
};

namespace detail {

inline std::vector<int> block(int offset, int n, int index) {
  std::vector<int> q(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) q[static_cast<std::size_t>(k)] = offset + index * n + k;
  return q;
}

inline void swap_blocks(StateVector& s, const std::vector<int>& a, const std::vector<int>& b, Condition cond) {
  for (std::size_t k = 0; k < a.size(); ++k) s.apply_swap(a[k], b[k], cond);
}

/// Control-qutrit value v as a condition on qubits (0, 1).
inline Condition qutrit_is(const StateVector& s, int v) {
  static constexpr std::string_view kCodes[3] = {"00", "01", "10"};
  const int pair[2] = {0, 1};
  return s.pattern(pair, kCodes[v]);
}

inline Condition qubit_is(const StateVector& s, int q, int v) {
  const int one[1] = {q};
  return s.pattern(one, v ? "1" : "0");
}

inline void second_swap_layer_2(StateVector& s, int n) {
  swap_blocks(s, block(1, n, 0), block(1, n, 1), qubit_is(s, 0, 1));
}

inline void second_swap_layer_3(StateVector& s, int n) {
  swap_blocks(s, block(2, n, 0), block(2, n, 1), qutrit_is(s, 1));
  swap_blocks(s, block(2, n, 0), block(2, n, 2), qutrit_is(s, 2));
}

}  // namespace detail

/// (|0> U1|Phi>|a> + |1>|a> U2|Phi>)/sqrt2 on 1 + 2n qubits.
inline StateVector build_fork_state(const ForkSpec& spec) {
  spec.validate(2);
  const int n = spec.width();
  StateVector s = StateVector(1).tensor(spec.phi).tensor(spec.ancilla);
  s.apply_matrix(0, gates::h());
  detail::swap_blocks(s, detail::block(1, n, 0), detail::block(1, n, 1), detail::qubit_is(s, 0, 1));
  run(s, spec.branch_unitaries[0], detail::block(1, n, 0), detail::qubit_is(s, 0, 0));
  run(s, spec.branch_unitaries[1], detail::block(1, n, 1), detail::qubit_is(s, 0, 1));
  return s;
}

/// Exact control statistics of a modified swap test.
struct SwapTestResult {
  double p0;
  /// 2 p0 - 1: Re or Im of <Phi1|Phi2> depending on the variant.
  double estimate;
};

namespace detail {

inline SwapTestResult finish_swap_test(StateVector s, int n, bool imaginary) {
  second_swap_layer_2(s, n);
  if (imaginary) s.apply_matrix(0, gates::phase(-std::numbers::pi / 2.0));
  s.apply_matrix(0, gates::h());
  const double p0 = probability_of(s, 0, 0);
  return {p0, 2.0 * p0 - 1.0};
}

}  // namespace detail

/// P(0) = [1 + Re<Phi1|Phi2>]/2 with Phi_i = U_i|Phi>.
inline SwapTestResult swap_test_real(const ForkSpec& spec) {
  return detail::finish_swap_test(build_fork_state(spec), spec.width(), false);
}

/// P(0) = [1 + Im<Phi1|Phi2>]/2, via the phase e^{-i pi/2} on the control.
inline SwapTestResult swap_test_imag(const ForkSpec& spec) {
  return detail::finish_swap_test(build_fork_state(spec), spec.width(), true);
}

/// The compact circuit: no swaps and no ancilla, controlled U1/U2 act on
/// |Phi> directly.
inline SwapTestResult swap_test_compact(const ForkSpec& spec, bool imaginary) {
  spec.validate(2);
  const int n = spec.width();
  StateVector s = StateVector(1).tensor(spec.phi);
  s.apply_matrix(0, gates::h());
  const auto data = detail::block(1, n, 0);
  run(s, spec.branch_unitaries[0], data, detail::qubit_is(s, 0, 0));
  run(s, spec.branch_unitaries[1], data, detail::qubit_is(s, 0, 1));
  if (imaginary) s.apply_matrix(0, gates::phase(-std::numbers::pi / 2.0));
  s.apply_matrix(0, gates::h());
  const double p0 = probability_of(s, 0, 0);
  return {p0, 2.0 * p0 - 1.0};
}

/// Conventional swap test between two separately prepared states. Draws
/// |Phi> from `source` twice; P(0) = [1 + |<Phi1|Phi2>|^2]/2 carries no sign.
inline SwapTestResult conventional_swap_test(QdbSource& source, const Circuit& u1, const Circuit& u2) {
  StateVector phi1 = source.prepare();
  StateVector phi2 = source.prepare();
  const int n = phi1.num_qubits();
  if (phi2.num_qubits() != n || u1.num_qubits() != n || u2.num_qubits() != n)
    throw ValidationError("swap test operands differ in width");
  run(phi1, u1);
  run(phi2, u2);
  StateVector s = StateVector(1).tensor(phi1).tensor(phi2);
  s.apply_matrix(0, gates::h());
  detail::swap_blocks(s, detail::block(1, n, 0), detail::block(1, n, 1), detail::qubit_is(s, 0, 1));
  s.apply_matrix(0, gates::h());
  const double p0 = probability_of(s, 0, 0);
  return {p0, 2.0 * p0 - 1.0};
}

/// (|0>|Phi1>|a>|a> + |1>|a>|Phi2>|a> + |2>|a>|a>|Phi3>)/sqrt3 on 2 + 3n
/// qubits, with the qutrit control embedded in qubits (0, 1).
inline StateVector qutrit_fork(const ForkSpec& spec) {
  spec.validate(3);
  const int n = spec.width();
  StateVector s = StateVector(2).tensor(spec.phi).tensor(spec.ancilla).tensor(spec.ancilla);
  s.apply_matrix(0, 1, gates::dft3_embedded());
  detail::swap_blocks(s, detail::block(2, n, 0), detail::block(2, n, 1), detail::qutrit_is(s, 1));
  detail::swap_blocks(s, detail::block(2, n, 0), detail::block(2, n, 2), detail::qutrit_is(s, 2));
  for (int i = 0; i < 3; ++i)
    run(s, spec.branch_unitaries[static_cast<std::size_t>(i)], detail::block(2, n, i), detail::qutrit_is(s, i));
  return s;
}

/// Squared norm of the unused |11> control component.
inline double qutrit_leakage(const StateVector& s) {
  const int pair[2] = {0, 1};
  const Condition dead = s.pattern(pair, "11");
  double p = 0.0;
  for (Index i = 0; i < s.size(); ++i)
    if (dead.holds(i)) p += std::norm(s[i]);
  return p;
}

struct PairwiseSumResult {
  double p0;
  /// d^2 P(0) = sum_{i,j} Re<Phi_i|Phi_j>.
  double sum;
};

/// One d-branch circuit: fork, undo the swaps, apply the inverse d-point DFT
/// to the control and read P(control = 0).
inline PairwiseSumResult pairwise_sum(const ForkSpec& spec) {
  const int d = spec.branches();
  if (d == 2) {
    StateVector s = build_fork_state(spec);
    detail::second_swap_layer_2(s, spec.width());
    s.apply_matrix(0, gates::h());
    const double p0 = probability_of(s, 0, 0);
    return {p0, 4.0 * p0};
  }
  if (d == 3) {
    StateVector s = qutrit_fork(spec);
    detail::second_swap_layer_3(s, spec.width());
    // F^{-1} = F * P where P exchanges |1> and |2>, i.e. |01> and |10>.
    s.apply_swap(0, 1);
    s.apply_matrix(0, 1, gates::dft3_embedded());
    const int pair[2] = {0, 1};
    const Condition zero = s.pattern(pair, "00");
    double p0 = 0.0;
    for (Index i = 0; i < s.size(); ++i)
      if (zero.holds(i)) p0 += std::norm(s[i]);
    return {p0, 9.0 * p0};
  }
  throw DomainError("pairwise sum supports 2 or 3 branches, got " + std::to_string(d));
}

/// Finite-shot estimate of a control probability.
struct ShotEstimate {
  double estimate;
  double stderr_;
  long long ones;
};

inline ShotEstimate sample_control(double p0, long long shots, std::uint64_t seed) {
  if (shots < 1) throw DomainError("shots must be at least 1");
  if (!(p0 >= -1e-12 && p0 <= 1.0 + 1e-12)) throw DomainError("probability out of range");
  std::mt19937_64 rng(seed);
  std::binomial_distribution<long long> draw(shots, std::clamp(p0, 0.0, 1.0));
  const long long k = draw(rng);
  const double est = static_cast<double>(k) / static_cast<double>(shots);
  return {est, std::sqrt(est * (1.0 - est) / static_cast<double>(shots)), k};
}

// ---------------------------------------------------------------------------
// Named branch unitaries

namespace detail {

/// Global phase e^{i phi} realized on qubit 0 as X Phase X Phase.
inline void add_global_phase(Circuit& c, double phi) {
  c.add(ir::Phase{0, phi}).add(ir::X{0}).add(ir::Phase{0, phi}).add(ir::X{0});
}

inline std::optional<double> parenthesized(std::string_view name, std::string_view head) {
  if (name.size() < head.size() + 2 || name.substr(0, head.size()) != head || name[head.size()] != '(' ||
      name.back() != ')')
    return std::nullopt;
  const auto arg = name.substr(head.size() + 1, name.size() - head.size() - 2);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
  if (ec != std::errc() || ptr != arg.data() + arg.size())
    throw ValidationError("invalid argument in preset '" + std::string(name) + "'");
  return v;
}

}  // namespace detail

/// Preset branch unitary on n qubits. Single-qubit presets (X, Y, Z, H, S,
/// Sdg, Phase(phi), RotY(theta)) act on every qubit; I, minusI and iI are
/// global: identity, -1 and i.
inline Circuit preset_unitary(std::string_view name, int n) {
  if (n < 1) throw ValidationError("preset needs at least one qubit");
  Circuit c(n);
  auto each = [&](auto make) {
    for (int q = 0; q < n; ++q) make(q);
  };
  if (name == "I") return c;
  if (name == "minusI") {
    detail::add_global_phase(c, std::numbers::pi);
  } else if (name == "iI") {
    detail::add_global_phase(c, std::numbers::pi / 2.0);
  } else if (name == "X") {
    each([&](int q) { c.add(ir::X{q}); });
  } else if (name == "Z") {
    each([&](int q) { c.add(ir::Phase{q, std::numbers::pi}); });
  } else if (name == "Y") {
    // Y = i X Z
    each([&](int q) {
      c.add(ir::Phase{q, std::numbers::pi}).add(ir::X{q});
      c.add(ir::Phase{q, std::numbers::pi / 2.0}).add(ir::X{q}).add(ir::Phase{q, std::numbers::pi / 2.0}).add(ir::X{q});
    });
  } else if (name == "H") {
    each([&](int q) { c.add(ir::H{q}); });
  } else if (name == "S") {
    each([&](int q) { c.add(ir::Phase{q, std::numbers::pi / 2.0}); });
  } else if (name == "Sdg") {
    each([&](int q) { c.add(ir::Phase{q, -std::numbers::pi / 2.0}); });
  } else if (auto phi = detail::parenthesized(name, "Phase")) {
    each([&](int q) { c.add(ir::Phase{q, *phi}); });
  } else if (auto theta = detail::parenthesized(name, "RotY")) {
    each([&](int q) { c.add(ir::RotY{q, *theta}); });
  } else {
    throw ValidationError("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

}  // namespace ffqram
