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
 * Small fixed-size complex matrices for one- and two-qubit gates.
 *
 * Matrices are row-major. A 4x4 matrix acting on the qubit pair (a, b) uses
 * the local basis index 2*bit(a) + bit(b).
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>

namespace ffqram {

using Complex = std::complex<double>;

template <std::size_t Dim>
struct SquareMatrix {
  std::array<Complex, Dim * Dim> data{};

  constexpr Complex& operator()(std::size_t row, std::size_t col) {
    return data[row * Dim + col];
  }
  constexpr const Complex& operator()(std::size_t row, std::size_t col) const {
    return data[row * Dim + col];
  }

  static constexpr SquareMatrix identity() {
    SquareMatrix m;
    for (std::size_t i = 0; i < Dim; ++i) m(i, i) = 1.0;
    return m;
  }

  SquareMatrix adjoint() const {
    SquareMatrix m;
    for (std::size_t r = 0; r < Dim; ++r)
      for (std::size_t c = 0; c < Dim; ++c) m(r, c) = std::conj((*this)(c, r));
    return m;
  }

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix m;
    for (std::size_t r = 0; r < Dim; ++r)
      for (std::size_t c = 0; c < Dim; ++c) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < Dim; ++k) acc += a(r, k) * b(k, c);
        m(r, c) = acc;
      }
    return m;
  }

  double max_abs_diff(const SquareMatrix& other) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < Dim * Dim; ++i)
      worst = std::max(worst, std::abs(data[i] - other.data[i]));
    return worst;
  }
};

using Matrix2 = SquareMatrix<2>;
using Matrix4 = SquareMatrix<4>;

template <std::size_t Dim>
bool is_unitary(const SquareMatrix<Dim>& u, double tol = 1e-10) {
  return (u.adjoint() * u).max_abs_diff(SquareMatrix<Dim>::identity()) <= tol;
}

namespace gates {

inline Matrix2 x() { return Matrix2{{0.0, 1.0, 1.0, 0.0}}; }

inline Matrix2 y() {
  return Matrix2{{0.0, Complex(0, -1), Complex(0, 1), 0.0}};
}

inline Matrix2 z() { return Matrix2{{1.0, 0.0, 0.0, -1.0}}; }

inline Matrix2 h() {
  const double s = std::numbers::sqrt2 / 2.0;
  return Matrix2{{s, s, s, -s}};
}

/// RotY(theta)|0> = cos(theta)|0> + sin(theta)|1>. Equal to exp(-i*phi*Y/2)
/// with phi = 2*theta.
inline Matrix2 rot_y(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return Matrix2{{c, -s, s, c}};
}

/// diag(1, e^{i phi}).
inline Matrix2 phase(double phi) {
  return Matrix2{{1.0, 0.0, 0.0, std::polar(1.0, phi)}};
}

/// Phase(phi) * RotY(theta): the |1> branch of RotY picks up e^{i phi}.
inline Matrix2 rot_arbitrary(double theta, double phi) {
  return phase(phi) * rot_y(theta);
}

/// Three-point DFT on the span of |00>, |01>, |10>; |11> is left fixed.
inline Matrix4 dft3_embedded() {
  Matrix4 m;
  const double norm = 1.0 / std::sqrt(3.0);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c)
      m(r, c) = std::polar(norm, 2.0 * std::numbers::pi *
                                     static_cast<double>(r * c) / 3.0);
  m(3, 3) = 1.0;
  return m;
}

}  // namespace gates
}  // namespace ffqram
