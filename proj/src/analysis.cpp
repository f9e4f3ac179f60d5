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

#include "qlv/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "qlv/errors.hpp"
#include "qlv/parallel.hpp"
#include "qlv/states.hpp"

namespace qlv {

namespace {

constexpr double kOracleTolerance = 1e-10;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double checkedAgainstKraus(const DensityOperator& cat, double closed, const ChannelSpec& spec) {
  const double viaKraus = fidelity(cat, applyPerQubit(cat, krausFor(spec)));
  if (std::abs(closed - viaKraus) > kOracleTolerance) {
    throw Error("closed-form fidelity " + formatDouble(closed) + " disagrees with Kraus route " +
                formatDouble(viaKraus) + " for " + std::string(toString(spec.family)));
  }
  return closed;
}

double catalogFidelity(int numQubits, ChannelSpec spec, double p) {
  const auto cat = catDensity(numQubits);
  if (spec.family == ChannelFamily::generalZ) {
    if (p >= 1.0) throw DomainError("generalZ curves need p < 1");
    spec.t = -std::log1p(-p);
    const auto closed = closedFormGeneralZ(numQubits, spec.z, *spec.t);
    const double f = fidelity(cat, closed.rho);
    return closed.completelyPositive ? checkedAgainstKraus(cat, f, spec) : f;
  }
  spec.p = p;
  spec.gamma.reset();
  spec.t.reset();
  switch (spec.family) {
    case ChannelFamily::depolarization:
      return checkedAgainstKraus(cat, fidelity(cat, closedFormDepolarized(numQubits, p)), spec);
    case ChannelFamily::amplitudeDamping:
      return checkedAgainstKraus(cat, fidelity(cat, closedFormAmplitudeDamped(numQubits, p)), spec);
    case ChannelFamily::phaseDamping:
      return checkedAgainstKraus(cat, fidelity(cat, closedFormPhaseDamped(numQubits, p)), spec);
    case ChannelFamily::randomNoise:
      throw ValidationError("random noise curves take a RandomChannelSpec");
    default:
      return fidelity(cat, applyPerQubit(cat, krausFor(spec)));
  }
}

}  // namespace

std::string formatDouble(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string curveChannelName(const CurveChannel& channel) {
  return std::visit(Overloaded{
                        [](const ChannelSpec& s) { return std::string(toString(s.family)); },
                        [](const RandomChannelSpec&) { return std::string("randomNoise"); },
                        [](const SampledCombinedSpec&) {
                          return std::string("combinedDampingRandom");
                        },
                    },
                    channel);
}

std::string curveChannelParams(const CurveChannel& channel) {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const ChannelSpec& s) {
                   if (s.family == ChannelFamily::generalZ) {
                     out << "gamma1=" << formatDouble(s.z.gamma1)
                         << ";gamma2=" << formatDouble(s.z.gamma2)
                         << ";mu=" << formatDouble(s.z.mu)
                         << ";omega=" << formatDouble(s.z.omega);
                   } else if (s.family == ChannelFamily::combinedDampingRandom) {
                     out << "eps1=" << formatDouble(s.eps1) << ";eps3=" << formatDouble(s.eps3)
                         << ";eps4=" << formatDouble(s.eps4)
                         << ";u3=" << (s.u3 ? "custom" : "identity")
                         << ";u4=" << (s.u4 ? "custom" : "identity");
                   } else {
                     out << "closedForm="
                         << (s.family == ChannelFamily::depolarization ||
                                     s.family == ChannelFamily::amplitudeDamping ||
                                     s.family == ChannelFamily::phaseDamping
                                 ? "yes"
                                 : "no");
                   }
                 },
                 [&](const RandomChannelSpec& s) {
                   out << "weightMode=" << toString(s.weightMode) << ";trials=" << s.trials
                       << ";seed=" << s.seed;
                 },
                 [&](const SampledCombinedSpec& s) {
                   out << "eps1=" << formatDouble(s.base.eps1)
                       << ";eps3=" << formatDouble(s.base.eps3)
                       << ";eps4=" << formatDouble(s.base.eps4) << ";u3=haar;u4=haar"
                       << ";trials=" << s.trials << ";seed=" << s.seed;
                 },
             },
             channel);
  return out.str();
}

CurvePoint curvePoint(int numQubits, const CurveChannel& channel, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  return std::visit(
      Overloaded{
          [&](const ChannelSpec& s) { return CurvePoint{p, catalogFidelity(numQubits, s, p), 0.0}; },
          [&](RandomChannelSpec s) {
            s.p = p;
            const auto est = meanFidelityRandomChannel(numQubits, s);
            return CurvePoint{p, est.mean, est.standardError};
          },
          [&](const SampledCombinedSpec& s) {
            ChannelSpec base = s.base;
            base.p = p;
            base.gamma.reset();
            base.t.reset();
            const auto est =
                summarize(combinedChannelFidelities(catDensity(numQubits), base, s.seed, s.trials));
            return CurvePoint{p, est.mean, est.standardError};
          },
      },
      channel);
}

void validateGrid(const std::vector<double>& pGrid) {
  if (pGrid.empty()) throw DomainError("p grid is empty");
  for (std::size_t i = 0; i < pGrid.size(); ++i) {
    if (!(pGrid[i] >= 0.0 && pGrid[i] <= 1.0)) throw DomainError("p grid values must lie in [0, 1]");
    if (i > 0 && !(pGrid[i] > pGrid[i - 1])) throw DomainError("p grid must be strictly ascending");
  }
}

std::vector<double> linearGrid(double start, double end, std::size_t points) {
  if (points == 0) throw DomainError("grid needs at least one point");
  if (points == 1) return {start};
  std::vector<double> grid(points);
  const double step = (end - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = start + step * static_cast<double>(i);
  grid.back() = end;
  return grid;
}

FidelityCurve fidelityCurve(int numQubits, const CurveChannel& channel,
                            const std::vector<double>& pGrid) {
  validateGrid(pGrid);
  FidelityCurve curve{channel, numQubits, std::vector<CurvePoint>(pGrid.size())};
  if (std::holds_alternative<ChannelSpec>(channel)) {
    parallelFor(pGrid.size(),
                [&](std::size_t i) { curve.points[i] = curvePoint(numQubits, channel, pGrid[i]); });
  } else {
    // Monte Carlo points already parallelize over trials.
    for (std::size_t i = 0; i < pGrid.size(); ++i) {
      curve.points[i] = curvePoint(numQubits, channel, pGrid[i]);
    }
  }
  return curve;
}

void VerificationModel::validate() const {
  if (numStations < 2) throw DomainError("verification needs at least two stations");
  if (!(perStateFidelity >= 0.0 && perStateFidelity <= 1.0)) {
    throw DomainError("fidelity must lie in [0, 1]");
  }
}

int bellStatesPerInstance(int numStations) { return (numStations + 1) / 2; }

double instanceProbability(const VerificationModel& model) {
  model.validate();
  if (model.strategy == Strategy::ghzState) return model.perStateFidelity;
  double prob = 1.0;
  for (int i = 0; i < bellStatesPerInstance(model.numStations); ++i) prob *= model.perStateFidelity;
  return prob;
}

double atLeastKofM(int k, int m, double f) {
  if (m < 0 || k < 0 || k > m) throw DomainError("atLeastKofM needs 0 <= k <= m");
  if (!(f >= 0.0 && f <= 1.0)) throw DomainError("probability must lie in [0, 1]");
  if (k == 0) return 1.0;
  if (f == 0.0) return 0.0;
  if (f == 1.0) return 1.0;
  const double logF = std::log(f);
  const double logQ = std::log1p(-f);
  double total = 0.0;
  for (int j = k; j <= m; ++j) {
    double term;
    if (m <= 1000) {
      double choose = 1.0;
      for (int i = 1; i <= j; ++i) choose = choose * (m - j + i) / i;
      term = choose * std::pow(f, j) * std::pow(1.0 - f, m - j);
    } else {
      term = std::exp(std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0) +
                      j * logF + (m - j) * logQ);
    }
    total += term;
  }
  return std::min(total, 1.0);
}

PassProbability cloningPassProbability(double cloneFidelity, int numStates) {
  if (numStates < 1) throw DomainError("need at least one state");
  if (!(cloneFidelity >= 0.0 && cloneFidelity <= 1.0)) {
    throw DomainError("fidelity must lie in [0, 1]");
  }
  const double log10p = static_cast<double>(numStates) * std::log10(cloneFidelity);
  return {std::pow(10.0, log10p), log10p};
}

std::vector<StrategyRow> strategyComparison(int numStations, const CurveChannel& channel,
                                            const std::vector<double>& pGrid) {
  if (numStations < 3) throw DomainError("strategy comparison needs at least three stations");
  const auto bell = fidelityCurve(2, channel, pGrid);
  const auto ghz = fidelityCurve(numStations, channel, pGrid);
  std::vector<StrategyRow> rows;
  rows.reserve(pGrid.size());
  for (std::size_t i = 0; i < pGrid.size(); ++i) {
    StrategyRow row;
    row.p = pGrid[i];
    row.fidelityBell = bell.points[i].meanFidelity;
    row.fidelityGhz = ghz.points[i].meanFidelity;
    row.instanceProbBell = instanceProbability({numStations, Strategy::bellStates, row.fidelityBell});
    row.instanceProbGhz = instanceProbability({numStations, Strategy::ghzState, row.fidelityGhz});
    const int m = bellStatesPerInstance(numStations);
    row.bellKofM = atLeastKofM(m >= 3 ? m - 1 : m, m, row.fidelityBell);
    row.difference = row.instanceProbGhz - row.instanceProbBell;
    row.bellAhead = row.difference < 0.0;
    row.crossover = !rows.empty() && rows.back().bellAhead != row.bellAhead;
    rows.push_back(row);
  }
  return rows;
}

void writeCurvesCsv(std::ostream& out, const std::vector<CurveCsvRow>& rows) {
  out << "channel,family_params,N,p,mean_fidelity,stderr,instance_prob_bell,instance_prob_ghz\n";
  for (const auto& r : rows) {
    out << r.channel << ',' << r.familyParams << ',' << r.numQubits << ',' << formatDouble(r.p)
        << ',' << formatDouble(r.meanFidelity) << ',' << formatDouble(r.standardError) << ','
        << formatDouble(r.instanceProbBell) << ',' << formatDouble(r.instanceProbGhz) << '\n';
  }
}

void writeComparisonCsv(std::ostream& out, const std::string& channel,
                        const std::string& familyParams, int numStations,
                        const std::vector<StrategyRow>& rows, bool withHeader) {
  if (withHeader) {
    out << "channel,family_params,N,p,fidelity_bell,fidelity_ghz,instance_prob_bell,"
           "instance_prob_ghz,bell_k_of_m,difference,bell_ahead,crossover\n";
  }
  for (const auto& r : rows) {
    out << channel << ',' << familyParams << ',' << numStations << ',' << formatDouble(r.p) << ','
        << formatDouble(r.fidelityBell) << ',' << formatDouble(r.fidelityGhz) << ','
        << formatDouble(r.instanceProbBell) << ',' << formatDouble(r.instanceProbGhz) << ','
        << formatDouble(r.bellKofM) << ',' << formatDouble(r.difference) << ','
        << (r.bellAhead ? 1 : 0) << ',' << (r.crossover ? 1 : 0) << '\n';
  }
}

}  // namespace qlv
