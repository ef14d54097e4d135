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

#include "ffqram/ffqram.hpp"
#include "generators.hpp"

using namespace ffqram;

namespace {

// Location count rebuilt from first principles: each C^nNOT tree has 2n-1
// wires busy for 2*ceil(log2 n)-1 steps, a controlled rotation is two of
// those plus two rotations, and M+1 flip layers each touch n wires.
long long tau_reference(int n, long long m) {
  int levels = 0;
  while ((1 << levels) < n) ++levels;
  const long long tree = (2LL * n - 1) * (2LL * levels - 1);
  return m * (2 * tree + 2) + (m + 1) * n;
}

Circuit decomposed_write(int n, int m, std::uint64_t seed) {
  gen::Rng r(seed);
  SynthesisOptions o;
  o.decompose = DecomposeMode::kToffoli;
  return synthesize(gen::angle_dataset(r, n, m), o);
}

}  // namespace

TEST(Noise, ClosedFormValues) {
  EXPECT_EQ(count_tau(2, 4, NoiseModel::kFull), 42);
  EXPECT_EQ(count_tau(2, 4, NoiseModel::kMild), 22);
  EXPECT_EQ(count_tau(4, 16, NoiseModel::kFull), 772);
  EXPECT_EQ(count_tau(4, 1, NoiseModel::kFull), 52);
  EXPECT_EQ(count_tau(2, 1, NoiseModel::kFull), 12);
}

TEST(Noise, ClosedFormMatchesReference) {
  for (int n = 2; n <= 12; ++n)
    for (long long m : {1LL, 2LL, 3LL, 8LL, 100LL}) EXPECT_EQ(count_tau(n, m, NoiseModel::kFull), tau_reference(n, m));
}

TEST(Noise, CircuitCountMatchesClosedForm) {
  EXPECT_EQ(count_locations_in_circuit(decomposed_write(4, 1, 1)), 52);
  EXPECT_EQ(count_locations_in_circuit(decomposed_write(2, 1, 1)), 12);
  for (int n = 2; n <= 5; ++n)
    for (int m : {1, 2, 4, 8})
      EXPECT_EQ(count_locations_in_circuit(decomposed_write(n, m, 10 * n + m)), count_tau(n, m, NoiseModel::kFull))
          << n << " " << m;
}

TEST(Noise, SingleBitExtension) {
  EXPECT_THROW(count_tau(1, 4, NoiseModel::kFull), DomainError);
  EXPECT_EQ(count_tau_single_bit(4), 21);
  EXPECT_EQ(count_locations_in_circuit(decomposed_write(1, 4, 3)), count_tau_single_bit(4));
  EXPECT_EQ(count_tau(1, 4, NoiseModel::kMild), 13);
}

TEST(Noise, RejectsBadArguments) {
  EXPECT_THROW(count_tau(2, 0, NoiseModel::kFull), DomainError);
  EXPECT_THROW(count_tau(0, 1, NoiseModel::kMild), DomainError);
  EXPECT_THROW(epsilon_for_tau(0.0, 10), DomainError);
  EXPECT_THROW(epsilon_for_tau(1.5, 10), DomainError);
  EXPECT_THROW(epsilon_for_tau(0.5, 0), DomainError);
  EXPECT_THROW(success_probability(1.0, 3), DomainError);
  EXPECT_THROW(monte_carlo_no_error_fraction(10, 0.1, 0, 1), DomainError);
}

TEST(Noise, EpsilonValues) {
  EXPECT_NEAR(epsilon_for_target(0.5, 2, 4, NoiseModel::kFull), 1.0 - std::pow(0.5, 1.0 / 42.0), 1e-15);
  EXPECT_NEAR(epsilon_for_target(0.5, 2, 4, NoiseModel::kFull), 0.0163681, 1e-7);
  EXPECT_NEAR(epsilon_for_target(0.5, 2, 4, NoiseModel::kMild), 1.0 - std::pow(0.5, 1.0 / 22.0), 1e-15);
  EXPECT_NEAR(success_probability(epsilon_for_tau(0.5, 42), 42), 0.5, 1e-12);
  EXPECT_NEAR(success_probability(0.01, 42), 0.6557, 1e-4);
  EXPECT_DOUBLE_EQ(epsilon_for_tau(1.0, 5), 0.0);
}

TEST(Noise, UnsupportedGateInCircuitCount) {
  Circuit c(3);
  c.add(ir::H{0});
  EXPECT_THROW(count_locations_in_circuit(c), UnsupportedError);
}

TEST(Noise, MonteCarloIsDeterministicAndUnbiased) {
  const double eps = epsilon_for_tau(0.7, 42);
  const double a = monte_carlo_no_error_fraction(42, eps, 20000, 99);
  EXPECT_EQ(a, monte_carlo_no_error_fraction(42, eps, 20000, 99));
  const double sigma = std::sqrt(0.7 * 0.3 / 20000);
  EXPECT_NEAR(a, 0.7, 4 * sigma);
  EXPECT_EQ(monte_carlo_no_error_fraction(10, 0.0, 100, 1), 1.0);
  EXPECT_EQ(monte_carlo_no_error_fraction(10, 1.0, 100, 1), 0.0);
}

TEST(Noise, NRule) {
  EXPECT_EQ(NRule::log2m().bits_for(16), 4);
  EXPECT_THROW(NRule::log2m().bits_for(12), DomainError);
  EXPECT_EQ(NRule::fixed(7).bits_for(12), 7);
}

TEST(Noise, CurveCsv) {
  const auto rows = curve(NRule::log2m(), {2, 4}, {0.5, 0.9}, NoiseModel::kFull);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].tau, count_tau_single_bit(2));
  EXPECT_EQ(rows[2].tau, 42);
  const std::string csv = curve_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "M,p_s,epsilon,model,tau");
  EXPECT_NE(csv.find("4,0.5,0.0163680675558,full,42"), std::string::npos) << csv;
  EXPECT_NE(csv.find(",full,42\n"), std::string::npos);
}

TEST(NoiseProperty, EpsilonRoundTrip) {
  gen::Rng r(8);
  for (int trial = 0; trial < 200; ++trial) {
    const double p = r.real(1e-3, 1.0);
    const long long tau = r.integer(1, 100000);
    EXPECT_NEAR(success_probability(epsilon_for_tau(p, tau), tau), p, 1e-12);
  }
}

TEST(NoiseProperty, EpsilonDecreasesWithTau) {
  for (long long tau = 1; tau < 2000; tau += 37)
    EXPECT_GT(epsilon_for_tau(0.8, tau), epsilon_for_tau(0.8, tau + 1));
}
