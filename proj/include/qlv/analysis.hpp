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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "qlv/channels.hpp"
#include "qlv/noise_random.hpp"

namespace qlv {

/// Combined damping + random channel whose u3, u4 are Haar-sampled per trial.
struct SampledCombinedSpec {
  ChannelSpec base;
  std::uint64_t seed = 0;
  std::size_t trials = 10'000;
};

/// What a fidelity curve is evaluated for. For ChannelSpec and
/// SampledCombinedSpec the grid value replaces p; for generalZ the grid value
/// sets the channel time t = -ln(1 - p), so each rate gamma acts as a decay
/// (1 - p)^gamma. For RandomChannelSpec the grid value replaces spec.p.
using CurveChannel = std::variant<ChannelSpec, RandomChannelSpec, SampledCombinedSpec>;

std::string curveChannelName(const CurveChannel& channel);
/// Compact "key=value;key=value" parameter summary (never contains commas).
std::string curveChannelParams(const CurveChannel& channel);

struct CurvePoint {
  double p = 0.0;
  double meanFidelity = 0.0;
  double standardError = 0.0;
};

struct FidelityCurve {
  CurveChannel channel;
  int numQubits = 0;
  std::vector<CurvePoint> points;
};

/// Cat-state fidelity for one grid value. Deterministic families use the
/// closed forms where they exist and check them against per-qubit Kraus
/// application (mismatch beyond 1e-10 throws Error).
CurvePoint curvePoint(int numQubits, const CurveChannel& channel, double p);

/// Throws DomainError unless the grid is non-empty, strictly ascending and in [0, 1].
void validateGrid(const std::vector<double>& pGrid);

/// `points` evenly spaced values from start to end inclusive.
std::vector<double> linearGrid(double start, double end, std::size_t points);

FidelityCurve fidelityCurve(int numQubits, const CurveChannel& channel,
                            const std::vector<double>& pGrid);

enum class Strategy { bellStates, ghzState };

struct VerificationModel {
  int numStations = 3;
  Strategy strategy = Strategy::bellStates;
  double perStateFidelity = 1.0;

  void validate() const;
};

/// Bell strategies need ceil(stations / 2) pairs per instance.
int bellStatesPerInstance(int numStations);

/// Probability that one instance of location verification decodes fully.
double instanceProbability(const VerificationModel& model);

/// P(at least k of m independent decodes succeed), each with probability f.
double atLeastKofM(int k, int m, double f);

struct PassProbability {
  double probability = 0.0;
  double log10Probability = 0.0;
};

/// Probability that a cloning adversary decodes all L states, f^L.
PassProbability cloningPassProbability(double cloneFidelity, int numStates);

inline constexpr double kBipartiteCloningBound = 0.7;
inline constexpr double kTripartiteCloningBound = 0.6;

struct StrategyRow {
  double p = 0.0;
  double fidelityBell = 0.0;
  double fidelityGhz = 0.0;
  double instanceProbBell = 0.0;
  double instanceProbGhz = 0.0;
  /// Probability that all but one of the m = ceil(N/2) Bell states decode
  /// (all of them when m < 3).
  double bellKofM = 0.0;
  /// instanceProbGhz - instanceProbBell.
  double difference = 0.0;
  bool bellAhead = false;
  /// The leading strategy changed between the previous grid point and this one.
  bool crossover = false;
};

/// ceil(N/2) Bell states vs one N-qubit GHZ state per instance, for N stations.
std::vector<StrategyRow> strategyComparison(int numStations, const CurveChannel& channel,
                                            const std::vector<double>& pGrid);

struct CurveCsvRow {
  std::string channel;
  std::string familyParams;
  int numQubits = 0;
  double p = 0.0;
  double meanFidelity = 0.0;
  double standardError = 0.0;
  double instanceProbBell = 0.0;
  double instanceProbGhz = 0.0;
};

/// printf "%.17g": round-trips every double.
std::string formatDouble(double value);

void writeCurvesCsv(std::ostream& out, const std::vector<CurveCsvRow>& rows);
void writeComparisonCsv(std::ostream& out, const std::string& channel,
                        const std::string& familyParams, int numStations,
                        const std::vector<StrategyRow>& rows, bool withHeader = true);

}  // namespace qlv
