// Copyright 2026 The QLV Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracle.hpp"
#include "qlv/analysis.hpp"
#include "qlv/errors.hpp"

using namespace qlv;

TEST(analysis, catalog_curve_values) {
  const auto grid = linearGrid(0.0, 0.5, 101);
  const auto pd = fidelityCurve(2, ChannelSpec{ChannelFamily::phaseDamping}, grid);
  ASSERT_EQ(pd.points.size(), 101u);
  EXPECT_NEAR(pd.points[20].p, 0.1, 1e-15);
  EXPECT_NEAR(pd.points[20].meanFidelity, 0.905, 1e-12);
  for (const auto& pt : pd.points) EXPECT_EQ(pt.standardError, 0.0);

  EXPECT_EQ(curvePoint(2, ChannelSpec{ChannelFamily::depolarization}, 0.0).meanFidelity, 1.0);
  EXPECT_NEAR(curvePoint(2, ChannelSpec{ChannelFamily::depolarization}, 0.1).meanFidelity,
              (1.0 + 3.0 * 0.81) / 4.0, 1e-12);
}

TEST(analysis, curve_values_within_unit_interval) {
  const auto grid = linearGrid(0.0, 1.0, 21);
  for (auto f : {ChannelFamily::bitFlip, ChannelFamily::phaseFlip, ChannelFamily::bitPhaseFlip,
                 ChannelFamily::amplitudeDamping}) {
    const auto curve = fidelityCurve(3, ChannelSpec{f}, grid);
    for (const auto& pt : curve.points) {
      EXPECT_GE(pt.meanFidelity, 0.0);
      EXPECT_LE(pt.meanFidelity, 1.0);
    }
  }
}

TEST(analysis, general_z_curve_uses_decay_time) {
  ChannelSpec z{ChannelFamily::generalZ};
  z.z = {1.0, 0.5, 1.0, 0.0};
  for (double p : {0.0, 0.1, 0.3}) {
    EXPECT_NEAR(curvePoint(3, z, p).meanFidelity, cat_fidelity::amplitudeDamping(3, p), 1e-12);
  }
  EXPECT_THROW(curvePoint(3, z, 1.0), DomainError);
}

TEST(analysis, grid_validation) {
  EXPECT_THROW(validateGrid({}), DomainError);
  EXPECT_THROW(validateGrid({0.1, 0.1}), DomainError);
  EXPECT_THROW(validateGrid({0.2, 0.1}), DomainError);
  EXPECT_THROW(validateGrid({-0.1}), DomainError);
  EXPECT_THROW(validateGrid({1.1}), DomainError);
  EXPECT_NO_THROW(validateGrid({0.0, 0.5, 1.0}));
  const auto g = linearGrid(0.0, 0.5, 101);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 0.5);
  EXPECT_THROW(linearGrid(0.0, 1.0, 0), DomainError);
}

TEST(analysis, instance_probabilities) {
  EXPECT_EQ(instanceProbability({3, Strategy::bellStates, 0.9}), 0.81);
  EXPECT_EQ(instanceProbability({5, Strategy::ghzState, 0.85}), 0.85);
  EXPECT_NEAR(instanceProbability({6, Strategy::bellStates, 0.905}), 0.741217625, 1e-12);
  EXPECT_EQ(bellStatesPerInstance(3), 2);
  EXPECT_EQ(bellStatesPerInstance(6), 3);
  for (double f : {0.1, 0.5, 0.9, 0.97}) {
    EXPECT_EQ(instanceProbability({3, Strategy::bellStates, f}), f * f);
    EXPECT_EQ(instanceProbability({3, Strategy::bellStates, f}), atLeastKofM(2, 2, f));
  }
  EXPECT_THROW(instanceProbability({3, Strategy::bellStates, 1.2}), DomainError);
}

TEST(analysis, k_of_m_matches_enumeration) {
  EXPECT_NEAR(atLeastKofM(2, 3, 0.9), 0.972, 1e-12);
  EXPECT_NEAR(atLeastKofM(3, 3, 0.9), 0.729, 1e-12);
  EXPECT_EQ(atLeastKofM(0, 7, 0.3), 1.0);
  for (int m = 1; m <= 10; ++m) {
    for (int k = 0; k <= m; ++k) {
      for (int tenth = 1; tenth <= 9; ++tenth) {
        const double f = tenth / 10.0;
        EXPECT_NEAR(atLeastKofM(k, m, f), oracle::atLeastByEnumeration(k, m, f), 1e-12);
      }
    }
  }
  EXPECT_THROW(atLeastKofM(4, 3, 0.5), DomainError);
}

TEST(analysis, k_of_m_large_m_is_consistent) {
  // Both evaluation routes around the switch point agree with the normal tail.
  const double below = atLeastKofM(500, 1000, 0.5);
  const double above = atLeastKofM(501, 1001, 0.5);
  EXPECT_NEAR(below, 0.5 + 0.5 * std::exp(std::lgamma(1001.0) - 2 * std::lgamma(501.0) - 1000 * std::log(2.0)),
              1e-9);
  EXPECT_NEAR(above, 0.5, 1e-9);
}

TEST(analysis, cloning_pass_probability) {
  const auto p = cloningPassProbability(0.7, 100);
  EXPECT_NEAR(p.log10Probability, 100.0 * std::log10(0.7), 1e-12);
  EXPECT_NEAR(p.probability, 3.2345e-16, 1e-19);
  EXPECT_EQ(cloningPassProbability(1.0, 50).probability, 1.0);
  EXPECT_NEAR(cloningPassProbability(0.6, 100).log10Probability, -22.18487496, 1e-8);
  for (int l = 1; l <= 40; ++l) {
    const double direct = std::pow(0.8, l);
    EXPECT_NEAR(cloningPassProbability(0.8, l).probability / direct, 1.0, 1e-9);
    EXPECT_LT(cloningPassProbability(0.8, l + 1).probability, cloningPassProbability(0.8, l).probability);
    EXPECT_LT(cloningPassProbability(0.7, l).probability, cloningPassProbability(0.8, l).probability);
  }
}

TEST(analysis, strategy_comparison_amplitude_damping) {
  const auto grid = linearGrid(0.0, 0.2, 21);
  const auto rows = strategyComparison(3, ChannelSpec{ChannelFamily::amplitudeDamping}, grid);
  ASSERT_EQ(rows.size(), grid.size());
  EXPECT_EQ(rows[0].instanceProbBell, 1.0);
  EXPECT_EQ(rows[0].instanceProbGhz, 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GT(rows[i].instanceProbGhz, rows[i].instanceProbBell) << rows[i].p;
    EXPECT_FALSE(rows[i].bellAhead);
  }
  EXPECT_THROW(strategyComparison(2, ChannelSpec{ChannelFamily::amplitudeDamping}, grid),
               DomainError);
}

TEST(analysis, strategy_comparison_phase_damping_six_stations) {
  const auto rows = strategyComparison(6, ChannelSpec{ChannelFamily::phaseDamping}, {0.0, 0.1});
  EXPECT_NEAR(rows[1].instanceProbBell, std::pow(0.905, 3), 1e-12);
  EXPECT_NEAR(rows[1].instanceProbGhz, 0.7657205, 1e-10);
  EXPECT_LE(std::abs(rows[1].difference), 0.05);
  EXPECT_NEAR(rows[1].bellKofM, atLeastKofM(2, 3, 0.905), 1e-15);
}

TEST(analysis, crossover_flag_marks_leader_change) {
  std::vector<StrategyRow> rows;
  const auto grid = linearGrid(0.0, 1.0, 41);
  rows = strategyComparison(3, ChannelSpec{ChannelFamily::depolarization}, grid);
  int crossovers = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].crossover, rows[i].bellAhead != rows[i - 1].bellAhead);
    crossovers += rows[i].crossover ? 1 : 0;
  }
  EXPECT_FALSE(rows[0].crossover);
  (void)crossovers;
}

TEST(analysis, csv_format) {
  std::ostringstream out;
  writeCurvesCsv(out, {{"phaseDamping", "closedForm=yes", 2, 0.1, 0.905, 0.0, 0.819025, 0.905}});
  EXPECT_EQ(out.str(),
            "channel,family_params,N,p,mean_fidelity,stderr,instance_prob_bell,instance_prob_ghz\n"
            "phaseDamping,closedForm=yes,2,0.10000000000000001,0.90500000000000003,0,"
            "0.819025,0.90500000000000003\n");
  EXPECT_EQ(formatDouble(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(formatDouble(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(analysis, channel_labels_have_no_commas) {
  ChannelSpec z{ChannelFamily::generalZ};
  z.z = {1.0, 0.5, 0.25, 2.0};
  const CurveChannel channels[] = {z, RandomChannelSpec{.seed = 3}, ChannelSpec{ChannelFamily::bitFlip}};
  for (const auto& c : channels) {
    EXPECT_EQ(curveChannelParams(c).find(','), std::string::npos);
  }
  EXPECT_EQ(curveChannelName(channels[1]), "randomNoise");
}

TEST(analysis, random_curve_reproducible) {
  const RandomChannelSpec spec{.seed = 77, .trials = 200};
  const auto a = fidelityCurve(2, spec, {0.0, 0.2, 0.4});
  const auto b = fidelityCurve(2, spec, {0.0, 0.2, 0.4});
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.points[i].meanFidelity, b.points[i].meanFidelity);
    EXPECT_EQ(a.points[i].standardError, b.points[i].standardError);
  }
  EXPECT_EQ(a.points[0].meanFidelity, 1.0);
}
