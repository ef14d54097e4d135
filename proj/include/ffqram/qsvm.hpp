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
 * Training-state loader for a quantum support vector machine:
 *
 *     |chi> = sum_i sum_k x_k^(i) |k>|i> / sqrt(sum_i |x^(i)|^2)
 *
 * built by one flip-register-flop block per matrix entry on a uniform bus.
 * Qubits: log2 N for k, then log2 M for i, then the register.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ffqram/circuit.hpp"
#include "ffqram/dataset.hpp"
#include "ffqram/decompose.hpp"
#include "ffqram/error.hpp"
#include "ffqram/qram.hpp"
#include "ffqram/statevector.hpp"

namespace ffqram {

/// M x N training matrix, one row per training vector. Dimensions are
/// zero-padded up to powers of two on construction.
class TrainingSet {
 public:
  explicit TrainingSet(std::vector<std::vector<double>> rows) {
    if (rows.empty() || rows.front().empty()) throw ValidationError("training matrix is empty");
    const std::size_t cols = rows.front().size();
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].size() != cols)
        throw ValidationError("training row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                              " entries, expected " + std::to_string(cols));
    m_ = std::size_t{1} << ceil_log2(static_cast<long long>(rows.size()));
    n_ = std::size_t{1} << ceil_log2(static_cast<long long>(cols));
    x_.assign(m_, std::vector<double>(n_, 0.0));
    bool nonzero = false;
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t k = 0; k < cols; ++k) {
        if (!std::isfinite(rows[i][k])) throw ValidationError("training matrix has a non-finite entry");
        x_[i][k] = rows[i][k];
        nonzero |= rows[i][k] != 0.0;
      }
    if (!nonzero) throw DegenerateError("training matrix is all zero");
  }

  std::size_t rows() const noexcept { return m_; }
  std::size_t cols() const noexcept { return n_; }
  double at(std::size_t i, std::size_t k) const { return x_.at(i).at(k); }

  int k_qubits() const { return ceil_log2(static_cast<long long>(n_)); }
  int i_qubits() const { return ceil_log2(static_cast<long long>(m_)); }
  int bus_qubits() const { return k_qubits() + i_qubits(); }

  double scale() const {
    double c = 0.0;
    for (const auto& row : x_)
      for (double v : row) c = std::max(c, std::abs(v));
    return c;
  }

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<std::vector<double>> x_;
};

namespace detail {

inline std::string to_bits(std::size_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int b = 0; b < width; ++b)
    if ((value >> b) & 1u) s[static_cast<std::size_t>(width - 1 - b)] = '1';
  return s;
}

}  // namespace detail

/// Angle dataset, one record per (i, k) in row-major order, addressed by
/// |k>|i> with theta = arcsin(x_k^(i) / max|x|).
inline Dataset chi_dataset(const TrainingSet& t) {
  Dataset ds{EncodingMode::kAngle, {}};
  const double c = t.scale();
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t k = 0; k < t.cols(); ++k)
      ds.records.push_back({detail::to_bits(k, t.k_qubits()) + detail::to_bits(i, t.i_qubits()),
                            Angle{std::asin(std::clamp(t.at(i, k) / c, -1.0, 1.0))},
                            {}});
  return ds;
}

/// Blocks with theta = 0 (zero entries, including padding). They are emitted
/// but do nothing.
inline std::vector<std::pair<std::size_t, std::size_t>> skippable_blocks(const TrainingSet& t) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t k = 0; k < t.cols(); ++k)
      if (t.at(i, k) == 0.0) out.emplace_back(i, k);
  return out;
}

/// Hadamards on every bus qubit, then the merged flip-register-flop write of
/// all M*N entries.
inline Circuit synthesize_chi_circuit(const TrainingSet& t, DecomposeMode decompose_mode = DecomposeMode::kNone) {
  const int n = t.bus_qubits();
  const Circuit body = synthesize(chi_dataset(t), SynthesisOptions{true, DecomposeMode::kNone, false});
  Circuit c(n + 1);
  for (int q = 0; q < n; ++q) c.add(ir::H{q});
  c.append(body);
  return decompose(c, decompose_mode);
}

/// Normalized flattened matrix: amplitude of |k>|i> is x_k^(i).
inline StateVector chi_oracle(const TrainingSet& t) {
  StateVector s(t.bus_qubits());
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t k = 0; k < t.cols(); ++k) s[k * t.rows() + i] = t.at(i, k);
  s.normalize();
  return s;
}

/// sum |x/c|^2 / (M N).
inline double chi_success_probability(const TrainingSet& t) {
  const double c = t.scale();
  double acc = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i)
    for (std::size_t k = 0; k < t.cols(); ++k) acc += std::pow(t.at(i, k) / c, 2);
  return acc / static_cast<double>(t.rows() * t.cols());
}

struct ChiState {
  StateVector state;
  double p_success;
};

/// Simulates the loader circuit from |0...0> and post-selects the register.
inline ChiState prepare_chi(const TrainingSet& t) {
  const Circuit c = synthesize_chi_circuit(t);
  const StateVector out = simulate(c, StateVector(c.num_qubits()));
  auto sel = post_select(out, t.bus_qubits(), 1);
  return {std::move(sel.state), sel.probability};
}

/// Parses a numeric CSV, one training vector per row.
inline std::vector<std::vector<double>> parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  detail::for_each_csv_row(text, [&](std::size_t row, const std::vector<std::string>& f) {
    std::vector<double> r;
    for (const auto& cell : f) {
      const auto v = parse_complex(cell);
      if (!v || v->imag() != 0.0)
        throw ValidationError("row " + std::to_string(row) + ": invalid number '" + cell + "'");
      r.push_back(v->real());
    }
    if (!rows.empty() && r.size() != rows.front().size())
      throw ValidationError("row " + std::to_string(row) + ": ragged matrix (" + std::to_string(r.size()) +
                            " columns, expected " + std::to_string(rows.front().size()) + ")");
    rows.push_back(std::move(r));
  });
  if (rows.empty()) throw ValidationError("training matrix has no rows");
  return rows;
}

}  // namespace ffqram
