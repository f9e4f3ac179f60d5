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

#include <cstdint>
#include <vector>

#include "qlv/linalg.hpp"

namespace qlv {

/// Normalized N-qubit state vector. Qubit 0 is the most significant bit of
/// the basis index, so |q0 q1 ... q(N-1)>.
class PureState {
 public:
  PureState(int numQubits, std::vector<Complex> amplitudes);

  int numQubits() const { return numQubits_; }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }

 private:
  int numQubits_;
  std::vector<Complex> amplitudes_;
};

enum class BasisFamily { bell, ghz };

/// Which orthogonal Bell or GHZ basis state a message symbol maps to.
struct BasisLabel {
  BasisFamily family;
  int numQubits;
  std::uint32_t index;

  /// Throws DomainError if the label is out of range for its family.
  void validate() const;
};

/// Bell basis: 0: (|00>+|11>)/sqrt2, 1: (|00>-|11>)/sqrt2,
///             2: (|10>+|01>)/sqrt2, 3: (|10>-|01>)/sqrt2.
PureState bellState(int index);

/// GHZ basis state (|x> +/- |~x>)/sqrt2. The top index bit is the sign
/// (0 = +), the low N-1 bits are the pattern x with a leading 0 qubit.
/// Index 0 is the cat state (|0...0> + |1...1>)/sqrt2.
PureState ghzState(int numQubits, std::uint32_t index);

PureState basisState(const BasisLabel& label);

/// Cat-state density operator built from the Pauli tensor expansion
/// [(so+sz)^N + (so-sz)^N + (sx+i sy)^N + (sx-i sy)^N] / 2^(N+1).
DensityOperator catDensity(int numQubits, int maxQubits = kDefaultMaxQubits);

/// |psi><psi|.
DensityOperator toDensity(const PureState& state);

/// <a|b>.
Complex innerProduct(const PureState& a, const PureState& b);

/// Single-qubit operator `op` applied to qubit `qubit` of `state`.
PureState applyToQubit(const PureState& state, const ComplexMatrix& op, int qubit);

/// Pauli operator for a two-bit frame/dibit label: 00 I, 01 Z, 10 X, 11 XZ.
ComplexMatrix pauliForDibit(std::uint8_t dibit);

/// Superdense encoding: applies pauliForDibit(dibit) to the first qubit of the
/// shared (|00>+|11>)/sqrt2 pair. The result is bellState(dibit) up to phase.
PureState encodeDibit(const PureState& pair, std::uint8_t dibit);

/// Ideal Bell-basis measurement of a two-qubit state: the Bell index with the
/// largest overlap probability.
int measureBell(const PureState& pair);

/// Dibit carried by Bell index `bellIndex` under the public encoding.
std::uint8_t decodeDibit(int bellIndex);

}  // namespace qlv
