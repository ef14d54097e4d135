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
 * Flip-flop QRAM: compiles a classical dataset into flip-register-flop
 * circuits and simulates the resulting database states.
 *
 * Layout: bus qubits 0..n-1 (data bits, then label bits), register qubit n,
 * ancillae after the register.
 *
 * Writing record (d, theta) maps the bus/register state
 *
 *     psi_d |d>|0> + sum_{j != d} psi_j |j>|0>
 *
 * to psi_d |d>(cos theta |0> + sin theta |1>) + sum_{j != d} psi_j |j>|0>:
 * the X layer conditioned on d moves |d> to |1...1>, the multi-controlled
 * RotY rotates the register on that branch only, and the same X layer
 * restores the bus. Post-selecting the register on |1> leaves
 * sum_l psi_{d_l} sin(theta_l) |d_l>, normalized.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "ffqram/circuit.hpp"
#include "ffqram/dataset.hpp"
#include "ffqram/decompose.hpp"
#include "ffqram/error.hpp"
#include "ffqram/statevector.hpp"

namespace ffqram {

struct SynthesisOptions {
  /// Fuse the flop of record l with the flip of record l+1 into one layer.
  bool merge_flips = true;
  DecomposeMode decompose = DecomposeMode::kNone;
  /// Unmerged mode only: keep flip layers that flip nothing.
  bool include_gray_gates = false;
};

namespace detail {

inline std::string xnor(const std::string& a, const std::string& b) {
  std::string out(a.size(), '1');
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != b[k]) out[k] = '0';
  return out;
}

inline bool flips_nothing(const std::string& bits) {
  return bits.find('0') == std::string::npos;
}

inline std::vector<int> range(int from, int count) {
  std::vector<int> v(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) v[static_cast<std::size_t>(k)] = from + k;
  return v;
}

/// Flip-register-flop skeleton shared by every encoding mode.
inline Circuit flip_register_flop(int n, const std::vector<std::string>& addr,
                                  const std::vector<std::optional<Gate>>& register_ops,
                                  const SynthesisOptions& opts) {
  Circuit c(n + 1);
  const auto bus = range(0, n);
  auto layer = [&](const std::string& bits) {
    if (n > 0) c.add(ir::ClassicalXLayer{bits, bus});
  };
  const std::size_t m = addr.size();
  if (opts.merge_flips) {
    for (std::size_t l = 0; l < m; ++l) {
      layer(l == 0 ? addr[0] : xnor(addr[l - 1], addr[l]));
      if (register_ops[l]) c.add(*register_ops[l]);
    }
    if (m > 0) layer(addr[m - 1]);
  } else {
    for (std::size_t l = 0; l < m; ++l) {
      const bool keep = opts.include_gray_gates || !flips_nothing(addr[l]);
      if (keep) layer(addr[l]);
      if (register_ops[l]) c.add(*register_ops[l]);
      if (keep) layer(addr[l]);
    }
  }
  return decompose(c, opts.decompose);
}

inline void require_equal_bus(const StateVector& bus, const std::vector<std::string>& addr) {
  const Complex ref = bus[bus.index_of(addr.front())];
  for (const auto& a : addr)
    if (std::abs(bus[bus.index_of(a)] - ref) > 1e-12)
      throw UnsupportedError("bus amplitudes differ across data entries ('" + addr.front() + "' vs '" + a +
                             "'); amplitude scaling needs a uniform weight");
}

}  // namespace detail

/// theta_l = arcsin(b_l / c) with c = max_l |b_l|, so the largest entry gets
/// |theta| = pi/2. Requires real amplitudes and an equal bus weight on every
/// data entry.
inline Dataset angles_from_amplitudes(const Dataset& ds, const BusSpec& bus) {
  validate(ds);
  if (ds.mode != EncodingMode::kAmplitude) throw ValidationError("dataset is not in amplitude mode");
  const auto addr = addresses(ds);
  detail::require_equal_bus(bus_state(bus, address_width(ds)), addr);
  double scale = 0.0;
  for (const auto& r : ds.records) {
    const Complex b = std::get<Amplitude>(r.value).value;
    if (b.imag() != 0.0)
      throw UnsupportedError("record '" + r.bits + "' has a complex amplitude; use complex_amplitude_write");
    scale = std::max(scale, std::abs(b.real()));
  }
  if (scale == 0.0) throw DegenerateError("all amplitudes are zero");
  Dataset out{EncodingMode::kAngle, {}};
  for (const auto& r : ds.records) {
    const double ratio = std::clamp(std::get<Amplitude>(r.value).value.real() / scale, -1.0, 1.0);
    out.records.push_back({r.bits, Angle{std::asin(ratio)}, r.label});
  }
  return out;
}

/// Flip-register-flop circuit on n bus qubits + 1 register (+ ancillae when
/// decomposed). Angle mode emits CNRY per record; binary mode emits CNNOT for
/// records with value 1 and no register gate for value 0.
inline Circuit synthesize(const Dataset& ds, const SynthesisOptions& opts = {}) {
  validate(ds);
  if (ds.mode == EncodingMode::kAmplitude)
    throw ValidationError("amplitude datasets must be converted with angles_from_amplitudes first");
  const int n = address_width(ds);
  const auto addr = addresses(ds);
  const auto bus = detail::range(0, n);
  std::vector<std::optional<Gate>> ops;
  for (const auto& r : ds.records) {
    if (ds.mode == EncodingMode::kAngle)
      ops.emplace_back(ir::CnRotY{bus, n, angle_of(r)});
    else if (std::get<Bit>(r.value).value == 1)
      ops.emplace_back(ir::CnNot{bus, n});
    else
      ops.emplace_back(std::nullopt);
  }
  return detail::flip_register_flop(n, addr, ops, opts);
}

/// Stage reported to a write observer after each step of one record.
enum class WriteStage { kFlipped = 1, kRotated = 2, kRestored = 3 };

using WriteObserver = std::function<void(std::size_t record, WriteStage, const StateVector&)>;

namespace detail {

inline void write_record(StateVector& s, int n, const std::string& addr, const Matrix2& u,
                         std::size_t l, const WriteObserver& observe) {
  const auto bus = range(0, n);
  classical_x_layer_inplace(s, addr, bus);
  if (observe) observe(l, WriteStage::kFlipped, s);
  s.apply_matrix(n, u, s.all_ones(bus));
  if (observe) observe(l, WriteStage::kRotated, s);
  classical_x_layer_inplace(s, addr, bus);
  if (observe) observe(l, WriteStage::kRestored, s);
}

}  // namespace detail

/// Simulates the flip-register-flop write of an angle dataset onto `bus`.
/// Returns the bus+register state before post-selection.
inline StateVector simulate_write(const BusSpec& bus, const Dataset& ds, const WriteObserver& observe = {}) {
  validate(ds);
  if (ds.mode != EncodingMode::kAngle) throw ValidationError("simulate_write needs an angle dataset");
  const int n = address_width(ds);
  StateVector s = bus_state(bus, n).tensor(StateVector(1));
  const auto addr = addresses(ds);
  for (std::size_t l = 0; l < ds.size(); ++l)
    detail::write_record(s, n, addr[l], gates::rot_y(angle_of(ds.records[l])), l, observe);
  return s;
}

/// Rotation angle accumulated per address (duplicates add up).
inline std::map<std::string, double> accumulated_angles(const Dataset& ds) {
  std::map<std::string, double> acc;
  const auto addr = addresses(ds);
  for (std::size_t l = 0; l < ds.size(); ++l) acc[addr[l]] += angle_of(ds.records[l]);
  return acc;
}

/// P(register = 1) = sum_l |psi_{d_l} sin(theta_l)|^2.
inline double postselection_probability(const BusSpec& bus, const Dataset& ds) {
  validate(ds);
  const StateVector b = bus_state(bus, address_width(ds));
  double p = 0.0;
  for (const auto& [a, theta] : accumulated_angles(ds)) p += std::norm(b[b.index_of(a)] * std::sin(theta));
  return p;
}

/// Normalized sum_l psi_{d_l} sin(theta_l) |d_l>: the state post-selection is
/// meant to produce.
inline StateVector target_qdb(const BusSpec& bus, const Dataset& ds) {
  const StateVector b = bus_state(bus, address_width(ds));
  StateVector out(b.num_qubits());
  out[0] = 0.0;
  for (const auto& [a, theta] : accumulated_angles(ds)) {
    const Index i = b.index_of(a);
    out[i] = b[i] * std::sin(theta);
  }
  if (out.norm_squared() <= 1e-24) throw PostSelectionError("target database state is empty");
  out.normalize();
  return out;
}

/// Records whose address has zero bus amplitude and therefore cannot be
/// written.
inline std::vector<std::size_t> unwritable_records(const BusSpec& bus, const Dataset& ds) {
  const StateVector b = bus_state(bus, address_width(ds));
  const auto addr = addresses(ds);
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l < addr.size(); ++l)
    if (std::abs(b[b.index_of(addr[l])]) <= 1e-15) out.push_back(l);
  return out;
}

/// Rotates the register branch of each addressed basis state by the update's
/// angle. `qdb` holds bus_width bus qubits followed by the register.
inline StateVector update_qdb(StateVector qdb, const Dataset& updates, int bus_width) {
  validate(updates);
  if (updates.mode != EncodingMode::kAngle) throw ValidationError("updates must be an angle dataset");
  if (address_width(updates) != bus_width)
    throw ValidationError("update address width " + std::to_string(address_width(updates)) +
                          " differs from bus width " + std::to_string(bus_width));
  if (qdb.num_qubits() != bus_width + 1)
    throw ValidationError("database state must hold the bus and one register qubit");
  const auto addr = addresses(updates);
  for (std::size_t l = 0; l < updates.size(); ++l)
    detail::write_record(qdb, bus_width, addr[l], gates::rot_y(angle_of(updates.records[l])), l, {});
  return qdb;
}

/// One basis-encoded entry: bus address and the register word stored there.
struct BinaryEntry {
  std::string address;
  std::string value;
};

/// Rewrites register words without post-selection. `initial` gives the word
/// currently stored under each address; register bit k is flipped (by a
/// C^nNOT on the addressed branch) wherever the old and new words differ.
inline StateVector write_binary(StateVector state, const std::map<std::string, std::string>& initial,
                                const std::vector<BinaryEntry>& entries, int bus_width) {
  const int r = state.num_qubits() - bus_width;
  if (r < 1) throw ValidationError("state has no register qubits after the bus");
  const auto bus = detail::range(0, bus_width);
  for (const auto& e : entries) {
    const auto it = initial.find(e.address);
    if (it == initial.end())
      throw ValidationError("address '" + e.address + "' is absent from the initial register map");
    if (static_cast<int>(e.address.size()) != bus_width || static_cast<int>(e.value.size()) != r ||
        static_cast<int>(it->second.size()) != r)
      throw ValidationError("entry '" + e.address + "' does not match the bus/register widths");
    if (e.value.find_first_not_of("01") != std::string::npos)
      throw ValidationError("register word '" + e.value + "' is not binary");
    classical_x_layer_inplace(state, e.address, bus);
    for (int k = 0; k < r; ++k)
      if (e.value[static_cast<std::size_t>(k)] != it->second[static_cast<std::size_t>(k)])
        state.apply_x(bus_width + k, state.all_ones(bus));
    classical_x_layer_inplace(state, e.address, bus);
  }
  return state;
}

/// Single-register-bit overload for binary datasets.
inline StateVector write_binary(StateVector state, const std::map<std::string, int>& initial, const Dataset& ds) {
  validate(ds);
  if (ds.mode != EncodingMode::kBinary) throw ValidationError("write_binary needs a binary dataset");
  std::map<std::string, std::string> words;
  for (const auto& [a, v] : initial) words[a] = v ? "1" : "0";
  std::vector<BinaryEntry> entries;
  const auto addr = addresses(ds);
  for (std::size_t l = 0; l < ds.size(); ++l)
    entries.push_back({addr[l], std::get<Bit>(ds.records[l].value).value ? "1" : "0"});
  return write_binary(std::move(state), words, entries, address_width(ds));
}

/// Per-record (theta, phi) for complex amplitudes: theta = arcsin(|b|/c),
/// phi = arg(b), c = max |b|.
inline std::vector<std::pair<double, double>> complex_angles(const Dataset& ds) {
  double scale = 0.0;
  for (const auto& r : ds.records) scale = std::max(scale, std::abs(std::get<Amplitude>(r.value).value));
  if (scale == 0.0) throw DegenerateError("all amplitudes are zero");
  std::vector<std::pair<double, double>> out;
  for (const auto& r : ds.records) {
    const Complex b = std::get<Amplitude>(r.value).value;
    out.emplace_back(std::asin(std::min(1.0, std::abs(b) / scale)), b == Complex(0.0) ? 0.0 : std::arg(b));
  }
  return out;
}

/// Flip-register-flop circuit for complex amplitudes, one CNR per record.
inline Circuit synthesize_complex(const Dataset& ds, const SynthesisOptions& opts = {}) {
  validate(ds);
  if (ds.mode != EncodingMode::kAmplitude) throw ValidationError("synthesize_complex needs an amplitude dataset");
  const int n = address_width(ds);
  const auto bus = detail::range(0, n);
  std::vector<std::optional<Gate>> ops;
  for (const auto& [theta, phi] : complex_angles(ds)) ops.emplace_back(ir::CnRotArbitrary{bus, n, theta, phi});
  return detail::flip_register_flop(n, addresses(ds), ops, opts);
}

/// Writes complex amplitudes: the register branch of d_l carries
/// sin(theta_l) e^{i phi_l} |1>, so post-selection gives sum b_l |d_l>.
inline StateVector complex_amplitude_write(const BusSpec& bus, const Dataset& ds) {
  validate(ds);
  if (ds.mode != EncodingMode::kAmplitude) throw ValidationError("complex_amplitude_write needs an amplitude dataset");
  const int n = address_width(ds);
  const auto addr = addresses(ds);
  detail::require_equal_bus(bus_state(bus, n), addr);
  StateVector s = bus_state(bus, n).tensor(StateVector(1));
  const auto angles = complex_angles(ds);
  for (std::size_t l = 0; l < ds.size(); ++l)
    detail::write_record(s, n, addr[l], gates::rot_arbitrary(angles[l].first, angles[l].second), l, {});
  return s;
}

/// Projects every ancilla (assumed |0>) and then the register onto |1>.
/// Returns the bus state and the register success probability.
inline PostSelection postselect_register(const StateVector& s, int register_qubit, int ancilla_count = 0) {
  StateVector cur = s;
  for (int k = ancilla_count; k >= 1; --k) cur = post_select(cur, register_qubit + k, 0).state;
  return post_select(cur, register_qubit, 1);
}

}  // namespace ffqram
