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

#include "qlv/noise_random.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qlv/errors.hpp"
#include "qlv/parallel.hpp"
#include "qlv/states.hpp"

namespace qlv {

namespace {

std::mt19937_64 seededEngine(std::uint64_t seed, std::uint64_t streamId) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(streamId),
                    static_cast<std::uint32_t>(streamId >> 32)};
  return std::mt19937_64(seq);
}

Complex complexNormal(RngStream& rng) {
  const double re = rng.normal();
  const double im = rng.normal();
  return Complex(re, im) / std::numbers::sqrt2;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t streamId)
    : seed_(seed), streamId_(streamId), engine_(seededEngine(seed, streamId)) {}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RngStream::uniformOpen() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (spareNormal_) {
    const double v = *spareNormal_;
    spareNormal_.reset();
    return v;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniformOpen()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spareNormal_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw DomainError("below(0) has no values");
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % n;
  }
}

ComplexMatrix sampleUnitary2(RngStream& rng) {
  const Complex a00 = complexNormal(rng);
  const Complex a10 = complexNormal(rng);
  const Complex a01 = complexNormal(rng);
  const Complex a11 = complexNormal(rng);

  const double n0 = std::sqrt(std::norm(a00) + std::norm(a10));
  const Complex q00 = a00 / n0;
  const Complex q10 = a10 / n0;
  const Complex proj = std::conj(q00) * a01 + std::conj(q10) * a11;
  Complex c01 = a01 - proj * q00;
  Complex c11 = a11 - proj * q10;
  const double n1 = std::sqrt(std::norm(c01) + std::norm(c11));
  return ComplexMatrix{{q00, c01 / n1}, {q10, c11 / n1}};
}

std::string_view toString(WeightMode mode) {
  return mode == WeightMode::uniformSplit ? "uniformSplit" : "randomSimplex";
}

std::optional<WeightMode> parseWeightMode(std::string_view name) {
  if (name == "uniformSplit") return WeightMode::uniformSplit;
  if (name == "randomSimplex") return WeightMode::randomSimplex;
  return std::nullopt;
}

void RandomChannelSpec::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p must lie in [0, 1]");
  if (trials < 1) throw ValidationError("trials must be at least 1");
}

KrausSet sampleRandomKraus(const RandomChannelSpec& spec, RngStream& rng) {
  spec.validate();
  std::vector<ComplexMatrix> ops;
  ops.reserve(4);
  ops.push_back(std::sqrt(1.0 - spec.p) * ComplexMatrix::identity(2));

  std::array<double, 3> weights{spec.p / 3.0, spec.p / 3.0, spec.p / 3.0};
  std::array<ComplexMatrix, 3> unitaries{sampleUnitary2(rng), sampleUnitary2(rng),
                                         sampleUnitary2(rng)};
  if (spec.weightMode == WeightMode::randomSimplex) {
    // Normalized exponentials are uniform on the simplex.
    std::array<double, 3> e{};
    double total = 0.0;
    for (auto& v : e) total += (v = -std::log(rng.uniformOpen()));
    for (std::size_t i = 0; i < 3; ++i) weights[i] = spec.p * e[i] / total;
  }
  for (std::size_t i = 0; i < 3; ++i) ops.push_back(std::sqrt(weights[i]) * unitaries[i]);
  return KrausSet(std::move(ops));
}

KrausSet sampleCombinedKraus(ChannelSpec spec, RngStream& rng) {
  if (spec.family != ChannelFamily::combinedDampingRandom) {
    throw ValidationError("sampleCombinedKraus needs a combinedDampingRandom spec");
  }
  spec.u3 = sampleUnitary2(rng);
  spec.u4 = sampleUnitary2(rng);
  return krausFor(spec);
}

std::vector<double> randomChannelFidelities(const DensityOperator& reference,
                                            const RandomChannelSpec& spec) {
  spec.validate();
  std::vector<double> out(spec.trials);
  parallelFor(spec.trials, [&](std::size_t trial) {
    RngStream rng(spec.seed, trial);
    const auto kraus = sampleRandomKraus(spec, rng);
    out[trial] = fidelity(reference, applyPerQubit(reference, kraus));
  });
  return out;
}

std::vector<double> combinedChannelFidelities(const DensityOperator& reference,
                                              const ChannelSpec& channel, std::uint64_t seed,
                                              std::size_t trials) {
  if (trials < 1) throw ValidationError("trials must be at least 1");
  channel.validate();
  std::vector<double> out(trials);
  parallelFor(trials, [&](std::size_t trial) {
    RngStream rng(seed, trial);
    const auto kraus = sampleCombinedKraus(channel, rng);
    out[trial] = fidelity(reference, applyPerQubit(reference, kraus));
  });
  return out;
}

MonteCarloEstimate summarize(const std::vector<double>& samples) {
  if (samples.empty()) throw DomainError("no samples to summarize");
  double sum = 0.0;
  for (double v : samples) sum += v;
  const double n = static_cast<double>(samples.size());
  const double mean = sum / n;
  if (samples.size() < 2) return {mean, 0.0};
  double squares = 0.0;
  for (double v : samples) squares += (v - mean) * (v - mean);
  return {mean, std::sqrt(squares / (n - 1.0) / n)};
}

MonteCarloEstimate meanFidelityRandomChannel(int numQubits, const RandomChannelSpec& spec) {
  if (numQubits < 2) throw DomainError("random channel averages need N >= 2");
  return summarize(randomChannelFidelities(catDensity(numQubits), spec));
}

}  // namespace qlv
