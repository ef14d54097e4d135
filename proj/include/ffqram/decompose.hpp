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
 * Lowering passes for multi-controlled gates.
 *
 * A C^nNOT with n >= 3 controls becomes a balanced binary AND-tree of
 * Toffolis: every internal node except the root writes the AND of its two
 * children into a fresh ancilla, the root Toffoli flips the target, and the
 * ancilla nodes are uncomputed in reverse order. That uses 2n-3 Toffolis and
 * n-2 ancillae, and the ASAP schedule of the fragment has depth
 * 2*ceil(log2 n) - 1.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ffqram/circuit.hpp"
#include "ffqram/error.hpp"

namespace ffqram {

inline int ceil_log2(long long n) {
  int k = 0;
  while ((1LL << k) < n) ++k;
  return k;
}

/// Ancillae consumed by decompose_cn_not for `n` controls.
inline int cn_not_ancilla_count(int n) { return std::max(n - 2, 0); }

/// Toffolis emitted by decompose_cn_not for `n >= 2` controls.
inline int cn_not_toffoli_count(int n) { return std::max(2 * n - 3, 1); }

namespace detail {

class AndTree {
 public:
  AndTree(std::span<const int> ancillae, std::vector<Gate>& out)
      : ancillae_(ancillae), out_(out) {}

  /// Returns the qubit that holds AND(leaves) after the compute phase.
  int build(std::span<const int> leaves) {
    if (leaves.size() == 1) return leaves[0];
    const std::size_t half = (leaves.size() + 1) / 2;
    const int left = build(leaves.first(half));
    const int right = build(leaves.subspan(half));
    const int anc = ancillae_[next_++];
    ir::Toffoli t{left, right, anc};
    out_.push_back(t);
    computed_.push_back(t);
    return anc;
  }

  /// Root Toffoli onto `target`, then uncompute.
  void finish(std::span<const int> controls, int target) {
    const std::size_t half = (controls.size() + 1) / 2;
    const int left = build(controls.first(half));
    const int right = build(controls.subspan(half));
    out_.push_back(ir::Toffoli{left, right, target});
    for (auto it = computed_.rbegin(); it != computed_.rend(); ++it)
      out_.push_back(*it);
  }

 private:
  std::span<const int> ancillae_;
  std::vector<Gate>& out_;
  std::vector<ir::Toffoli> computed_;
  std::size_t next_ = 0;
};

}  // namespace detail

/// Lowers C^nNOT to Toffolis. n = 1 yields a single-control CNNOT, n = 2 one
/// Toffoli. `ancilla_pool` must supply at least n-2 qubits in |0>; they are
/// returned to |0>.
inline std::vector<Gate> decompose_cn_not(std::span<const int> controls,
                                          int target,
                                          std::span<const int> ancilla_pool) {
  const int n = static_cast<int>(controls.size());
  std::vector<Gate> out;
  if (n == 0) {
    out.push_back(ir::X{target});
    return out;
  }
  if (n == 1) {
    out.push_back(ir::CnNot{{controls[0]}, target});
    return out;
  }
  if (n == 2) {
    out.push_back(ir::Toffoli{controls[0], controls[1], target});
    return out;
  }
  const int need = cn_not_ancilla_count(n);
  if (static_cast<int>(ancilla_pool.size()) < need)
    throw ResourceError("C^" + std::to_string(n) + "NOT needs " +
                        std::to_string(need) + " ancillae, got " +
                        std::to_string(ancilla_pool.size()));
  std::vector<int> all(controls.begin(), controls.end());
  all.push_back(target);
  for (int a : ancilla_pool.first(static_cast<std::size_t>(need))) all.push_back(a);
  check_distinct(all);
  detail::AndTree tree(ancilla_pool, out);
  tree.finish(controls, target);
  return out;
}

/// C^nRotY(theta) = [RotY(theta/2), C^nNOT, RotY(-theta/2), C^nNOT] in time
/// order. Zero controls collapse to a single RotY.
inline std::vector<Gate> decompose_cn_roty(const ir::CnRotY& g) {
  if (g.controls.empty()) return {ir::RotY{g.target, g.theta}};
  return {ir::RotY{g.target, g.theta / 2.0}, ir::CnNot{g.controls, g.target},
          ir::RotY{g.target, -g.theta / 2.0}, ir::CnNot{g.controls, g.target}};
}

enum class DecomposeMode { kNone, kToffoli };

namespace detail {

inline int ancillae_needed(const Gate& g) {
  if (const auto* x = std::get_if<ir::CnNot>(&g))
    return cn_not_ancilla_count(static_cast<int>(x->controls.size()));
  if (const auto* x = std::get_if<ir::CnRotY>(&g))
    return cn_not_ancilla_count(static_cast<int>(x->controls.size()));
  if (const auto* x = std::get_if<ir::CnRotArbitrary>(&g)) {
    // The phase uses one extra ancilla holding AND(controls, target).
    const int n = static_cast<int>(x->controls.size());
    return n == 0 ? 0 : std::max(cn_not_ancilla_count(n), 1 + cn_not_ancilla_count(n + 1));
  }
  return 0;
}

inline void lower(const Gate& g, std::span<const int> pool, Circuit& out) {
  auto emit_cn_not = [&](const std::vector<int>& controls, int target,
                         std::span<const int> anc) {
    for (auto& h : decompose_cn_not(controls, target, anc)) out.add(std::move(h));
  };
  if (const auto* x = std::get_if<ir::CnNot>(&g)) {
    emit_cn_not(x->controls, x->target, pool);
  } else if (const auto* x = std::get_if<ir::CnRotY>(&g)) {
    for (const auto& h : decompose_cn_roty(*x)) {
      if (const auto* c = std::get_if<ir::CnNot>(&h))
        emit_cn_not(c->controls, c->target, pool);
      else
        out.add(h);
    }
  } else if (const auto* x = std::get_if<ir::CnRotArbitrary>(&g)) {
    lower(ir::CnRotY{x->controls, x->target, x->theta}, pool, out);
    if (x->controls.empty()) {
      out.add(ir::Phase{x->target, x->phi});
      return;
    }
    // Controlled phase on the all-ones subspace of controls+target: copy the
    // AND into a fresh ancilla, phase it, uncompute.
    std::vector<int> support = x->controls;
    support.push_back(x->target);
    const int flag = pool[0];
    emit_cn_not(support, flag, pool.subspan(1));
    out.add(ir::Phase{flag, x->phi});
    emit_cn_not(support, flag, pool.subspan(1));
  } else {
    out.add(g);
  }
}

}  // namespace detail

/// Lowers every multi-controlled gate to Toffolis (plus single-qubit gates),
/// appending shared ancilla qubits after the existing register.
inline Circuit decompose(const Circuit& c, DecomposeMode mode = DecomposeMode::kToffoli) {
  if (mode == DecomposeMode::kNone) return c;
  int need = 0;
  for (const auto& g : c.gates()) need = std::max(need, detail::ancillae_needed(g));
  std::vector<int> ancillae = c.ancilla_qubits();
  std::vector<int> pool;
  for (int k = 0; k < need; ++k) {
    pool.push_back(c.num_qubits() + k);
    ancillae.push_back(c.num_qubits() + k);
  }
  Circuit out(c.num_qubits() + need, ancillae);
  for (const auto& g : c.gates()) detail::lower(g, pool, out);
  return out;
}

}  // namespace ffqram
