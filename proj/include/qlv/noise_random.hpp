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
#include <limits>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "qlv/channels.hpp"
#include "qlv/linalg.hpp"

namespace qlv {

/// Reproducible random stream keyed by (seed, streamId).
///
/// The engine is std::mt19937_64 seeded through std::seed_seq, both fully
/// specified by the standard. Distributions are implemented here rather than
/// taken from <random>, whose distribution algorithms are
/// implementation-defined.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t streamId);

  static constexpr result_type min() { return std::numeric_limits<result_type>::min(); }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t streamId() const { return streamId_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniformOpen();
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);
  /// Fair coin.
  bool bit() { return (engine_() >> 63) != 0; }

 private:
  std::uint64_t seed_;
  std::uint64_t streamId_;
  std::mt19937_64 engine_;
  std::optional<double> spareNormal_;
};

/// Haar-distributed 2x2 unitary: Gram-Schmidt on a complex Ginibre matrix,
/// which leaves the triangular factor with a positive real diagonal.
ComplexMatrix sampleUnitary2(RngStream& rng);

enum class WeightMode { uniformSplit, randomSimplex };

std::string_view toString(WeightMode mode);
std::optional<WeightMode> parseWeightMode(std::string_view name);

struct RandomChannelSpec {
  double p = 0.0;
  /// Four Kraus operators: sqrt(1-p) I plus three weighted random unitaries.
  static constexpr int numOperators = 4;
  WeightMode weightMode = WeightMode::uniformSplit;
  std::uint64_t seed = 0;
  std::size_t trials = 10'000;

  void validate() const;
};

/// {sqrt(1-p) I, sqrt(p_2) U_2, sqrt(p_3) U_3, sqrt(p_4) U_4} with
/// p_2 + p_3 + p_4 = p.
KrausSet sampleRandomKraus(const RandomChannelSpec& spec, RngStream& rng);

/// Combined damping + random channel with Haar-sampled u3 and u4.
KrausSet sampleCombinedKraus(ChannelSpec spec, RngStream& rng);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standardError = 0.0;
};

/// Per-trial fidelities of `reference` under independently sampled random
/// channels. Trial i draws from stream (spec.seed, i).
std::vector<double> randomChannelFidelities(const DensityOperator& reference,
                                            const RandomChannelSpec& spec);

/// Same, for combined damping + random channels with fresh Haar unitaries per trial.
std::vector<double> combinedChannelFidelities(const DensityOperator& reference,
                                              const ChannelSpec& channel, std::uint64_t seed,
                                              std::size_t trials);

/// Sample mean and standard error, summed in index order.
MonteCarloEstimate summarize(const std::vector<double>& samples);

/// Mean cat-state fidelity over `spec.trials` sampled random channels.
MonteCarloEstimate meanFidelityRandomChannel(int numQubits, const RandomChannelSpec& spec);

}  // namespace qlv
