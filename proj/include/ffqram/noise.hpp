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
 * Noise-location accounting for flip-flop QRAM writes.
 *
 * Every noise location (a qubit during one time step) independently becomes
 * maximally mixed with probability epsilon, so a write with tau locations
 * succeeds with probability (1 - epsilon)^tau.
 *
 * Full model: each C^nNOT (Toffoli tree) exposes its 2n-1 qubits for
 * 2*ceil(log2 n) - 1 steps, each C^nRotY adds two single-qubit rotations and
 * two C^nNOTs, and the M+1 merged flip layers add n locations each:
 *
 *     tau_full = 2M [ (2n-1)(2 ceil(log2 n) - 1) + 1 ] + n(M+1)
 *
 * Mild model: the controlled rotation only fails on its n+1 qubits:
 *
 *     tau_mild = (n+1) M + n(M+1)
 */

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ffqram/circuit.hpp"
#include "ffqram/decompose.hpp"
#include "ffqram/error.hpp"
#include "ffqram/schedule.hpp"

namespace ffqram {

enum class NoiseModel { kFull, kMild };

inline std::string_view to_string(NoiseModel m) { return m == NoiseModel::kFull ? "full" : "mild"; }

inline NoiseModel parse_noise_model(std::string_view s) {
  if (s == "full") return NoiseModel::kFull;
  if (s == "mild") return NoiseModel::kMild;
  throw ValidationError("unknown noise model '" + std::string(s) + "'");
}

struct NoiseBudget {
  int n = 0;
  long long M = 0;
  NoiseModel model = NoiseModel::kFull;
  double epsilon = 0.0;
  long long tau = 0;
  double p_s = 1.0;
};

/// Full-model count for one-bit records, where the closed form degenerates:
/// each controlled rotation is two CNOTs counted as one location each plus
/// two rotations, giving 4M + (M+1).
inline long long count_tau_single_bit(long long M) {
  if (M < 1) throw DomainError("record count must be positive");
  return 2 * M * 2 + (M + 1);
}

inline long long count_tau(int n, long long M, NoiseModel model) {
  if (M < 1) throw DomainError("record count must be positive");
  if (model == NoiseModel::kMild) {
    if (n < 1) throw DomainError("bits per record must be positive");
    return (n + 1LL) * M + n * (M + 1);
  }
  if (n < 2)
    throw DomainError("full-model closed form needs n >= 2; use count_tau_single_bit for n = 1");
  const long long depth = 2LL * ceil_log2(n) - 1;
  return 2 * M * ((2LL * n - 1) * depth + 1) + n * (M + 1);
}

/// (1 - epsilon)^tau.
inline double success_probability(double epsilon, long long tau) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in [0, 1)");
  return std::exp(static_cast<double>(tau) * std::log1p(-epsilon));
}

/// Per-location error rate that yields success probability p_s over tau
/// locations: 1 - p_s^(1/tau).
inline double epsilon_for_tau(double p_s, long long tau) {
  if (!(p_s > 0.0 && p_s <= 1.0)) throw DomainError("target success probability must lie in (0, 1]");
  if (tau < 1) throw DomainError("tau must be positive");
  return -std::expm1(std::log(p_s) / static_cast<double>(tau));
}

inline double epsilon_for_target(double p_s, int n, long long M, NoiseModel model) {
  return epsilon_for_tau(p_s, count_tau(n, M, model));
}

/// Sums noise locations in a synthesized, Toffoli-decomposed, flip-merged
/// write circuit: each maximal run of Toffolis is one C^nNOT block costing
/// (qubits touched) x (its own scheduled depth); every flip layer costs one
/// location per bus qubit; every RotY costs one; a single-control CNNOT
/// (n = 1) costs one.
inline long long count_locations_in_circuit(const Circuit& c) {
  long long total = 0;
  const auto& gates = c.gates();
  for (std::size_t i = 0; i < gates.size();) {
    const Gate& g = gates[i];
    if (std::holds_alternative<ir::Toffoli>(g)) {
      Circuit block(c.num_qubits());
      std::vector<bool> touched(static_cast<std::size_t>(c.num_qubits()), false);
      for (; i < gates.size() && std::holds_alternative<ir::Toffoli>(gates[i]); ++i) {
        block.add(gates[i]);
        for (int q : gate_qubits(gates[i])) touched[static_cast<std::size_t>(q)] = true;
      }
      const long long support = std::count(touched.begin(), touched.end(), true);
      total += support * static_cast<long long>(schedule(block).depth());
      continue;
    }
    if (const auto* x = std::get_if<ir::ClassicalXLayer>(&g)) {
      total += static_cast<long long>(x->qubits.size());
    } else if (std::holds_alternative<ir::RotY>(g)) {
      total += 1;
    } else if (const auto* x = std::get_if<ir::CnNot>(&g); x && x->controls.size() == 1) {
      total += 1;
    } else {
      throw UnsupportedError("gate " + std::to_string(i) + " (" + std::string(gate_name(g)) +
                             ") is not part of a decomposed flip-register-flop circuit");
    }
    ++i;
  }
  return total;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Fraction of trials in which none of `tau` locations fails, each failing
/// independently with probability epsilon. Trial t draws from its own
/// generator seeded from (seed, t).
inline double monte_carlo_no_error_fraction(long long tau, double epsilon, long long trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("trials must be at least 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in [0, 1]");
  long long clean = 0;
  for (long long t = 0; t < trials; ++t) {
    std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(static_cast<std::uint64_t>(t))));
    std::bernoulli_distribution fails(epsilon);
    bool ok = true;
    for (long long k = 0; k < tau && ok; ++k) ok = !fails(rng);
    clean += ok;
  }
  return static_cast<double>(clean) / static_cast<double>(trials);
}

inline double monte_carlo_no_error_fraction(const Circuit& c, double epsilon, long long trials, std::uint64_t seed) {
  return monte_carlo_no_error_fraction(count_locations_in_circuit(c), epsilon, trials, seed);
}

/// How the bit width n is chosen for each record count M.
struct NRule {
  bool log2_of_m = true;
  int fixed_n = 0;

  static NRule log2m() { return {true, 0}; }
  static NRule fixed(int n) { return {false, n}; }

  int bits_for(long long M) const {
    if (!log2_of_m) return fixed_n;
    if (M < 1 || (M & (M - 1)) != 0)
      throw DomainError("M = " + std::to_string(M) + " is not a power of two");
    return ceil_log2(M);
  }
};

struct CurveRow {
  long long M;
  double p_s;
  double epsilon;
  NoiseModel model;
  long long tau;
};

/// tau for the curve: the closed form, or the one-bit extension when n = 1
/// under the full model.
inline long long curve_tau(int n, long long M, NoiseModel model) {
  if (n == 1 && model == NoiseModel::kFull) return count_tau_single_bit(M);
  return count_tau(n, M, model);
}

inline std::vector<CurveRow> curve(const NRule& rule, const std::vector<long long>& m_list,
                                   const std::vector<double>& ps_list, NoiseModel model) {
  std::vector<CurveRow> rows;
  for (long long M : m_list) {
    const int n = rule.bits_for(M);
    const long long tau = curve_tau(n, M, model);
    for (double p : ps_list) rows.push_back({M, p, epsilon_for_tau(p, tau), model, tau});
  }
  return rows;
}

inline std::string format_sig12(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  if (ec != std::errc()) throw Error("cannot format real");
  return std::string(buf, end);
}

/// CSV with header `M,p_s,epsilon,model,tau`, reals to 12 significant digits.
inline std::string curve_csv(const std::vector<CurveRow>& rows) {
  std::string out = "M,p_s,epsilon,model,tau\n";
  for (const auto& r : rows)
    out += std::to_string(r.M) + "," + format_sig12(r.p_s) + "," + format_sig12(r.epsilon) + "," +
           std::string(to_string(r.model)) + "," + std::to_string(r.tau) + "\n";
  return out;
}

}  // namespace ffqram
