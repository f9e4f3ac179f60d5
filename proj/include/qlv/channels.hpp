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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlv/linalg.hpp"

namespace qlv {

enum class ChannelFamily {
  depolarization,
  amplitudeDamping,
  phaseDamping,
  bitFlip,
  phaseFlip,
  bitPhaseFlip,
  generalZ,
  randomNoise,
  combinedDampingRandom,
};

std::string_view toString(ChannelFamily family);
std::optional<ChannelFamily> parseChannelFamily(std::string_view name);

/// Parameters of the sigma_z-rotation-covariant model: rates gamma1, gamma2
/// (1/s), asymptotic polarization mu, precession frequency omega (rad/s).
struct GeneralZParams {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double mu = 0.0;
  double omega = 0.0;
};

/// A named channel family plus its parameters.
///
/// The decoherence parameter is either given directly as `p` or derived as
/// p = 1 - exp(-gamma t). generalZ uses `z` and the channel time `t`.
/// combinedDampingRandom mixes amplitude damping (weight 1 - eps1) with the
/// unitaries u3, u4 (weights eps3, eps4); missing unitaries default to I.
struct ChannelSpec {
  ChannelFamily family = ChannelFamily::depolarization;
  std::optional<double> p;
  std::optional<double> gamma;
  std::optional<double> t;
  GeneralZParams z;
  double eps1 = 0.0;
  double eps3 = 0.0;
  double eps4 = 0.0;
  std::optional<ComplexMatrix> u3;
  std::optional<ComplexMatrix> u4;

  static ChannelSpec withP(ChannelFamily family, double p);

  /// p, or 1 - exp(-gamma t) when p is absent.
  double decoherenceParameter() const;
  /// Throws ValidationError on any invariant violation.
  void validate() const;
};

/// Ordered single-qubit Kraus operators. Shapes are checked on construction;
/// completeness is checked by `requireComplete` (and by every consumer).
class KrausSet {
 public:
  explicit KrausSet(std::vector<ComplexMatrix> operators);
  static KrausSet identity();

  const std::vector<ComplexMatrix>& operators() const { return operators_; }
  std::size_t size() const { return operators_.size(); }

  /// max entrywise |sum_a K_a^dagger K_a - I|.
  double completenessDeviation() const;
  void requireComplete(double tol = 1e-10) const;

 private:
  std::vector<ComplexMatrix> operators_;
};

/// Catalog Kraus set for a deterministic channel family. randomNoise is
/// sampled by the noise_random module and is rejected here.
KrausSet krausFor(const ChannelSpec& spec);

struct ApplyOptions {
  /// Enumerate all M^N product operators when M^N is at most this; otherwise
  /// compose single-qubit channels qubit by qubit.
  std::size_t enumerationLimit = 64;
  double completenessTolerance = 1e-10;
};

/// The same single-qubit channel on every qubit, independently.
DensityOperator applyPerQubit(const DensityOperator& rho, const KrausSet& kraus,
                              const ApplyOptions& options = {});

/// Sum over all M^N tensor-product Kraus operators.
DensityOperator applyProductOperators(const DensityOperator& rho, const KrausSet& kraus);

/// Channel composition, one qubit at a time.
DensityOperator applySequential(const DensityOperator& rho, const KrausSet& kraus);

/// The channel on a single qubit, identity elsewhere.
DensityOperator applyOnQubit(const DensityOperator& rho, const KrausSet& kraus, int qubit);

// Closed-form cat-state evolution. p maps to the channel decay factor via
// exp(-gamma t) = 1 - p.
DensityOperator closedFormDepolarized(int numQubits, double p);
DensityOperator closedFormAmplitudeDamped(int numQubits, double p);
DensityOperator closedFormPhaseDamped(int numQubits, double p);

struct GeneralZResult {
  DensityOperator rho;
  double minEigenvalue;
  /// False when the output is not positive semidefinite: the parameter set
  /// does not describe a completely positive map. The state is still returned.
  bool completelyPositive;
};

GeneralZResult closedFormGeneralZ(int numQubits, const GeneralZParams& params, double t);

/// Tr(reference * evolved), clamped to [0, 1]. The reference must be pure.
double fidelity(const DensityOperator& reference, const DensityOperator& evolved);

/// Scalar cat-state fidelities for the damping families.
namespace cat_fidelity {
double depolarization(int numQubits, double p);
double amplitudeDamping(int numQubits, double p);
double phaseDamping(int numQubits, double p);
}  // namespace cat_fidelity

}  // namespace qlv
