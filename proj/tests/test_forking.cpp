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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ffqram/ffqram.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using namespace ffqram;
using std::numbers::pi;

namespace {

StateVector plus(int n) {
  StateVector s(n);
  for (int q = 0; q < n; ++q) s.apply_matrix(q, gates::h());
  return s;
}

// <U1 phi | U2 phi> from dense matrices.
oracle::cd overlap(const StateVector& phi, const Circuit& u1, const Circuit& u2) {
  const oracle::Vec v = oracle::to_vec(phi);
  return oracle::apply(u1, v).dot(oracle::apply(u2, v));
}

Circuit random_unitary(gen::Rng& r, int n) {
  Circuit c(n);
  for (int k = 0; k < 6; ++k) {
    const int q = r.integer(0, n - 1);
    switch (r.integer(0, 3)) {
      case 0: c.add(ir::H{q}); break;
      case 1: c.add(ir::RotY{q, r.real(-3, 3)}); break;
      case 2: c.add(ir::Phase{q, r.real(-3, 3)}); break;
      default:
        if (n > 1) {
          const auto qs = r.distinct(2, n);
          c.add(ir::CnNot{{qs[0]}, qs[1]});
        } else {
          c.add(ir::X{q});
        }
    }
  }
  return c;
}

}  // namespace

TEST(Forking, ImaginaryPartExample) {
  const ForkSpec spec(plus(1), {preset_unitary("I", 1), preset_unitary("Phase(1.5707963267948966)", 1)});
  const auto im = swap_test_imag(spec);
  EXPECT_NEAR(im.p0, 0.75, 1e-12);
  EXPECT_NEAR(im.estimate, 0.5, 1e-12);
  const auto re = swap_test_real(spec);
  EXPECT_NEAR(re.estimate, 0.5, 1e-12);
}

TEST(Forking, GlobalPhasePresets) {
  const ForkSpec neg(plus(2), {preset_unitary("I", 2), preset_unitary("minusI", 2)});
  EXPECT_NEAR(swap_test_real(neg).p0, 0.0, 1e-12);
  EXPECT_NEAR(swap_test_real(neg).estimate, -1.0, 1e-12);
  const ForkSpec imag(plus(2), {preset_unitary("I", 2), preset_unitary("iI", 2)});
  EXPECT_NEAR(swap_test_imag(imag).p0, 1.0, 1e-12);
}

TEST(Forking, PresetsMatchDefinitions) {
  const StateVector phi = gen::Rng(4).state(2);
  const oracle::Vec v = oracle::to_vec(phi);
  const auto each = [](const oracle::M2& m) { return oracle::Mat(oracle::kron(m, m)); };
  const std::vector<std::pair<std::string, oracle::Mat>> cases{
      {"X", each(oracle::pauli_x())},
      {"Y", each(oracle::pauli_y())},
      {"Z", each(oracle::pauli_z())},
      {"H", each(oracle::hadamard())},
      {"S", each(oracle::phase(pi / 2))},
      {"Sdg", each(oracle::phase(-pi / 2))},
      {"RotY(0.3)", each(oracle::ry(0.3))},
      {"minusI", -oracle::Mat::Identity(4, 4)},
      {"iI", oracle::cd(0, 1) * oracle::Mat::Identity(4, 4)},
  };
  for (const auto& [name, m] : cases)
    EXPECT_LT(oracle::max_diff(simulate(preset_unitary(name, 2), phi), m * v), 1e-12) << name;
  EXPECT_THROW(preset_unitary("bogus", 2), ValidationError);
  EXPECT_THROW(preset_unitary("Phase(x)", 2), ValidationError);
}

TEST(Forking, ThreeBranchSum) {
  const ForkSpec spec(StateVector(1), {preset_unitary("I", 1), preset_unitary("X", 1), preset_unitary("Z", 1)});
  const auto r = pairwise_sum(spec);
  EXPECT_NEAR(r.p0, 5.0 / 9.0, 1e-12);
  EXPECT_NEAR(r.sum, 5.0, 1e-12);
  EXPECT_NEAR(qutrit_leakage(qutrit_fork(spec)), 0.0, 1e-15);
}

TEST(Forking, TwoBranchSum) {
  const ForkSpec spec(plus(1), {preset_unitary("I", 1), preset_unitary("Z", 1)});
  // 2 + 2 Re<+|-> = 2
  EXPECT_NEAR(pairwise_sum(spec).sum, 2.0, 1e-12);
}

TEST(Forking, QutritForkBranches) {
  const ForkSpec spec(StateVector::basis("1"), {preset_unitary("I", 1), preset_unitary("X", 1), preset_unitary("I", 1)},
                      StateVector::basis("0"));
  const StateVector s = qutrit_fork(spec);
  // |0>|1>|0>|0> + |1>|0>|0>|0> + |2>|0>|0>|1>, control on qubits 0-1
  const double a = 1.0 / std::sqrt(3.0);
  EXPECT_NEAR(std::abs(s[s.index_of("00100")]), a, 1e-12);
  EXPECT_NEAR(std::abs(s[s.index_of("01000")]), a, 1e-12);
  EXPECT_NEAR(std::abs(s[s.index_of("10001")]), a, 1e-12);
}

TEST(Forking, BranchCountChecked) {
  const ForkSpec two(plus(1), {preset_unitary("I", 1), preset_unitary("X", 1)});
  EXPECT_THROW(qutrit_fork(two), DomainError);
  const ForkSpec four(plus(1), std::vector<Circuit>(4, preset_unitary("I", 1)));
  EXPECT_THROW(pairwise_sum(four), DomainError);
  const ForkSpec bad(plus(1), {preset_unitary("I", 2), preset_unitary("X", 1)});
  EXPECT_THROW(swap_test_real(bad), ValidationError);
  const ForkSpec bad_anc(plus(1), {preset_unitary("I", 1), preset_unitary("X", 1)}, StateVector(2));
  EXPECT_THROW(swap_test_real(bad_anc), ValidationError);
}

TEST(Forking, SinglePreparationVersusTwo) {
  QdbSource source([] { return plus(2); });
  const auto spec = ForkSpec::from_source(source, {preset_unitary("I", 2), preset_unitary("X", 2)});
  swap_test_real(spec);
  EXPECT_EQ(source.preparations(), 1);
  QdbSource source2([] { return plus(2); });
  const auto conv = conventional_swap_test(source2, preset_unitary("I", 2), preset_unitary("minusI", 2));
  EXPECT_EQ(source2.preparations(), 2);
  // The conventional test loses the sign: |<.|.>|^2 = 1.
  EXPECT_NEAR(conv.p0, 1.0, 1e-12);
}

TEST(Forking, SampledControl) {
  const auto a = sample_control(0.3, 100000, 5);
  EXPECT_EQ(a.ones, sample_control(0.3, 100000, 5).ones);
  EXPECT_NEAR(a.estimate, 0.3, 4 * std::sqrt(0.21 / 100000));
  EXPECT_THROW(sample_control(0.3, 0, 5), DomainError);
}

TEST(ForkingProperty, MatchesInnerProductOracle) {
  gen::Rng r(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = r.integer(1, 3);
    const StateVector phi = r.state(n);
    const Circuit u1 = random_unitary(r, n);
    const Circuit u2 = random_unitary(r, n);
    const oracle::cd ip = overlap(phi, u1, u2);
    const ForkSpec zero(phi, {u1, u2});
    const ForkSpec rand(phi, {u1, u2}, r.state(n));
    EXPECT_NEAR(swap_test_real(zero).p0, (1 + ip.real()) / 2, 1e-10);
    EXPECT_NEAR(swap_test_imag(zero).p0, (1 + ip.imag()) / 2, 1e-10);
    EXPECT_NEAR(swap_test_real(rand).p0, swap_test_real(zero).p0, 1e-10);
    EXPECT_NEAR(swap_test_imag(rand).p0, swap_test_imag(zero).p0, 1e-10);
    EXPECT_NEAR(swap_test_compact(zero, false).p0, swap_test_real(zero).p0, 1e-12);
    EXPECT_NEAR(swap_test_compact(zero, true).p0, swap_test_imag(zero).p0, 1e-12);
  }
}

TEST(ForkingProperty, ThreeBranchMatchesNineTerms) {
  gen::Rng r(78);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = r.integer(1, 2);
    const StateVector phi = r.state(n);
    const std::vector<Circuit> us{random_unitary(r, n), random_unitary(r, n), random_unitary(r, n)};
    double want = 0.0;
    for (const auto& a : us)
      for (const auto& b : us) want += overlap(phi, a, b).real();
    EXPECT_NEAR(pairwise_sum(ForkSpec(phi, us, r.state(n))).sum, want, 1e-10);
  }
}
