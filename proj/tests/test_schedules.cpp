// Copyright 2026 The SGQG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oracles.hpp"
#include "sgqg/schedules.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using namespace sgqg;

const TwoLevelParams kP{};  // 4 pi, 6, 0.16
constexpr double kTol = 1e-12;

TEST(U1Schedule, QuarterPointHitsHalfAmplitude) {
  auto s = build_u1_schedule(kP, 0.3, 1.1);
  auto c = sample(s, 0.5 * kP.tau);
  EXPECT_NEAR(c.omega_r, kP.omega0, kTol);
  EXPECT_NEAR(c.delta, kP.delta0, kTol);
  EXPECT_EQ(c.phi, 0.3);
}

TEST(U1Schedule, EquatorAtTau) {
  auto c = sample(build_u1_schedule(kP, 0.0, 0.0), kP.tau);
  EXPECT_NEAR(c.omega_r, 2.0 * kP.omega0, kTol);
  EXPECT_NEAR(c.delta, 0.0, kTol);
}

TEST(U1Schedule, PoleFlipAtTwoTau) {
  auto s = build_u1_schedule(kP, 0.2, 1.7);
  auto left = sample_left(s, 2.0 * kP.tau);
  auto right = sample(s, 2.0 * kP.tau);
  EXPECT_NEAR(left.omega_r, 0.0, kTol);
  EXPECT_NEAR(right.omega_r, 0.0, kTol);
  EXPECT_NEAR(left.delta, -2.0 * kP.delta0, kTol);
  EXPECT_NEAR(right.delta, 2.0 * kP.delta0, kTol);
  EXPECT_EQ(left.phi, 0.2);
  EXPECT_EQ(right.phi, 1.7);
}

TEST(U1Schedule, StartsAtNorthPole) {
  auto c = sample(build_u1_schedule(kP, 0.4, 0.0), 0.0);
  EXPECT_NEAR(c.omega_r, 0.0, kTol);
  EXPECT_NEAR(c.delta, 2.0 * kP.delta0, kTol);
  EXPECT_EQ(c.phi, 0.4);
  EXPECT_DOUBLE_EQ(build_u1_schedule(kP, 0, 0).total_time(), 4.0 * kP.tau);
}

TEST(U2Schedule, BranchEndpoints) {
  auto s = build_u2_schedule(kP, 0.5, 2.0);
  auto c0 = sample(s, 0.0);
  EXPECT_NEAR(c0.omega_r, 2.0 * kP.omega0, kTol);
  EXPECT_NEAR(c0.delta, 0.0, kTol);

  auto ct = sample_left(s, kP.tau);
  EXPECT_NEAR(ct.omega_r, 0.0, kTol);
  EXPECT_NEAR(ct.delta, -2.0 * kP.delta0, kTol);

  auto c2 = sample(s, 2.0 * kP.tau);
  EXPECT_NEAR(c2.omega_r, 2.0 * kP.omega0, kTol);
  EXPECT_NEAR(c2.delta, 0.0, kTol);
  EXPECT_EQ(c2.phi, 2.0);

  auto c3 = sample(s, 3.0 * kP.tau);
  EXPECT_NEAR(c3.omega_r, 0.0, kTol);
  EXPECT_EQ(c3.phi, 0.5);
}

TEST(Schedules, RejectInvalidParameters) {
  EXPECT_THROW(build_u1_schedule({0.0, 6.0, 0.16}, 0, 0), ParameterError);
  EXPECT_THROW(build_u1_schedule({1.0, -1.0, 0.16}, 0, 0), ParameterError);
  EXPECT_THROW(build_u2_schedule({1.0, 1.0, 0.0}, 0, 0), ParameterError);
  EXPECT_THROW(build_u2_schedule({std::nan(""), 1.0, 0.1}, 0, 0), ParameterError);
  EXPECT_THROW(build_adiabatic_schedule(kP, Program::U1, 0.5, 0, 0), ParameterError);
  EXPECT_THROW(HolonomicParams::from_peak(0.0), ParameterError);
}

TEST(Schedules, SampleOutsideWindowIsRangeError) {
  auto s = build_u1_schedule(kP, 0, 0);
  EXPECT_THROW(sample(s, -1e-12), RangeError);
  EXPECT_THROW(sample(s, s.total_time() + 1e-12), RangeError);
  EXPECT_NO_THROW(sample(s, s.total_time()));
}

TEST(AdiabaticSchedule, UnitSlowdownMatchesU1Shape) {
  auto a = build_adiabatic_schedule(kP, Program::U1, 1.0, 0.1, 0.9);
  auto u = build_u1_schedule(kP, 0.1, 0.9);
  EXPECT_EQ(a.total_time(), u.total_time());
  EXPECT_TRUE(is_adiabatic(a.tag()));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(0.0, u.total_time());
  for (int i = 0; i < 200; ++i) {
    double x = t(rng);
    auto ca = sample(a, x), cu = sample(u, x);
    EXPECT_EQ(ca.omega_r, cu.omega_r);
    EXPECT_EQ(ca.delta, cu.delta);
    EXPECT_EQ(ca.phi, cu.phi);
  }
}

TEST(AdiabaticSchedule, SlowdownTenStretchesTime) {
  auto a = build_adiabatic_schedule(kP, Program::U1, 10.0, 0, 0);
  EXPECT_NEAR(a.total_time(), 6.4, 1e-12);
  EXPECT_NEAR(sample(a, 0.5 * 10.0 * kP.tau).omega_r, kP.omega0, 1e-12);
  auto b = build_adiabatic_schedule(kP, Program::U2, 10.0, 0, 0);
  EXPECT_EQ(b.tag(), ProgramTag::AdiabaticU2);
}

TEST(HolonomicSchedule, PeakAndWindowEdge) {
  auto h = HolonomicParams::from_peak(22.0);
  auto s = build_holonomic_schedule(h);
  EXPECT_NEAR(sample(s, 0.5 * h.total_time).omega_r, 22.0, 1e-12);
  EXPECT_NEAR(sample(s, 0.0).omega_r, 22.0 * std::exp(-4.0), 1e-12);
  EXPECT_NEAR(sample(s, h.total_time).omega_r, 22.0 * std::exp(-4.0), 1e-12);
  EXPECT_EQ(sample(s, 0.3 * h.total_time).delta, 0.0);
}

TEST(HolonomicSchedule, FullLineAreaIsTwoPi) {
  for (double peak : {5.0, 22.16, 80.0}) {
    auto h = HolonomicParams::from_peak(peak);
    EXPECT_NEAR(h.omega_nh * h.sigma * std::sqrt(kPi), kTwoPi, 1e-12);
    EXPECT_NEAR(h.total_time, 4.0 * h.sigma, 1e-15);
  }
}

TEST(HolonomicSchedule, TruncatedAreaMatchesQuadrature) {
  auto h = HolonomicParams::from_peak(22.16);
  auto s = build_holonomic_schedule(h);
  double quad = oracle::simpson([&](double t) { return sample(s, t).omega_r; }, 0.0, h.total_time, 1e-13);
  EXPECT_NEAR(quad, kTwoPi * std::erf(2.0), 1e-9);
  EXPECT_NEAR(pulse_area(s), quad, 1e-9);
  EXPECT_NEAR(pulse_area(s) / kTwoPi, 0.99532226501895, 1e-12);
}

TEST(Schedules, U1PulseAreaMatchesQuadrature) {
  auto s = build_u1_schedule(kP, 0, 0);
  double quad = 0.0;
  for (const auto& seg : s.segments())
    quad += oracle::simpson([&](double t) { return value(seg.rabi, t); }, seg.t_start, seg.t_end);
  EXPECT_NEAR(pulse_area(s), quad, 1e-10);
  EXPECT_NEAR(pulse_area(s), 4.0 * kP.omega0 * kP.tau, 1e-10);
}

// Random parameters: Rabi envelope continuous across every boundary, the
// detuning jumps only at the pole flip of each program.
TEST(SchedulesProperty, RabiContinuousAcrossBoundaries) {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> om(0.5, 50.0), de(0.5, 50.0), ta(0.01, 2.0), ph(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    TwoLevelParams p{om(rng), de(rng), ta(rng)};
    for (auto s : {build_u1_schedule(p, ph(rng), ph(rng)), build_u2_schedule(p, ph(rng), ph(rng))}) {
      auto b = s.breakpoints();
      ASSERT_EQ(b.size(), 5u);
      for (std::size_t k = 1; k + 1 < b.size(); ++k) {
        EXPECT_NEAR(sample_left(s, b[k]).omega_r, sample(s, b[k]).omega_r, 1e-9 * p.omega0);
        EXPECT_GE(sample(s, b[k]).omega_r, -1e-12);
      }
    }
  }
}

TEST(PulseSchedule, RejectsGapsAndLateStart) {
  Segment a{0.0, 1.0, constant_wave(1.0), constant_wave(0.0), 0.0};
  Segment b{1.5, 2.0, constant_wave(1.0), constant_wave(0.0), 0.0};
  EXPECT_THROW(PulseSchedule({a, b}, ProgramTag::Synthetic), ParameterError);
  Segment late{0.5, 1.0, constant_wave(1.0), constant_wave(0.0), 0.0};
  EXPECT_THROW(PulseSchedule({late}, ProgramTag::Synthetic), ParameterError);
  EXPECT_THROW(PulseSchedule({}, ProgramTag::Synthetic), ParameterError);
  EXPECT_THROW(build_constant_schedule(1.0, 0.0, 0.0, 0.0), ParameterError);
}

}  // namespace
