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

#include "qlv/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qlv/errors.hpp"

namespace qlv {

namespace {
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
constexpr double kNormTolerance = 1e-12;
}  // namespace

PureState::PureState(int numQubits, std::vector<Complex> amplitudes)
    : numQubits_(numQubits), amplitudes_(std::move(amplitudes)) {
  if (numQubits < 1 || numQubits > 30) throw DomainError("unsupported qubit count");
  if (amplitudes_.size() != (std::size_t{1} << numQubits)) {
    throw ShapeError("state vector length must be 2^N");
  }
  double norm2 = 0.0;
  for (const auto& a : amplitudes_) norm2 += std::norm(a);
  if (std::abs(std::sqrt(norm2) - 1.0) > kNormTolerance) {
    throw ValidationError("state vector is not normalized (norm " + std::to_string(std::sqrt(norm2)) +
                          ")");
  }
}

void BasisLabel::validate() const {
  if (family == BasisFamily::bell) {
    if (numQubits != 2) throw DomainError("Bell labels are two-qubit");
    if (index >= 4) throw DomainError("Bell index out of range");
    return;
  }
  if (numQubits < 2) throw DomainError("GHZ labels need at least two qubits");
  if (numQubits > 30 || index >= (std::uint64_t{1} << numQubits)) {
    throw DomainError("GHZ index out of range");
  }
}

PureState bellState(int index) {
  if (index < 0 || index > 3) throw DomainError("Bell index must be in [0, 4)");
  std::vector<Complex> amp(4);
  const double sign = (index % 2 == 0) ? 1.0 : -1.0;
  if (index < 2) {
    amp[0b00] = kInvSqrt2;
    amp[0b11] = sign * kInvSqrt2;
  } else {
    amp[0b10] = kInvSqrt2;
    amp[0b01] = sign * kInvSqrt2;
  }
  return {2, std::move(amp)};
}

PureState ghzState(int numQubits, std::uint32_t index) {
  BasisLabel{BasisFamily::ghz, numQubits, index}.validate();
  const std::uint64_t dim = std::uint64_t{1} << numQubits;
  const std::uint64_t signBit = dim >> 1;
  const std::uint64_t pattern = index & (signBit - 1);
  const double sign = (index & signBit) ? -1.0 : 1.0;
  std::vector<Complex> amp(dim);
  amp[pattern] = kInvSqrt2;
  amp[(dim - 1) ^ pattern] = sign * kInvSqrt2;
  return {numQubits, std::move(amp)};
}

PureState basisState(const BasisLabel& label) {
  label.validate();
  if (label.family == BasisFamily::bell) return bellState(static_cast<int>(label.index));
  return ghzState(label.numQubits, label.index);
}

DensityOperator catDensity(int numQubits, int maxQubits) {
  if (numQubits < 1) throw DomainError("cat state needs at least one qubit");
  if (numQubits > maxQubits) {
    throw SizeLimitError("cat state of " + std::to_string(numQubits) + " qubits exceeds limit");
  }
  const Complex i(0.0, 1.0);
  const auto so = pauli::identity();
  const auto sx = pauli::x();
  const auto sy = pauli::y();
  const auto sz = pauli::z();
  ComplexMatrix sum = kronPower(so + sz, numQubits, maxQubits);
  sum += kronPower(so - sz, numQubits, maxQubits);
  sum += kronPower(sx + i * sy, numQubits, maxQubits);
  sum += kronPower(sx - i * sy, numQubits, maxQubits);
  sum *= 1.0 / std::ldexp(1.0, numQubits + 1);
  return {numQubits, std::move(sum)};
}

DensityOperator toDensity(const PureState& state) {
  const auto& a = state.amplitudes();
  ComplexMatrix m(a.size(), a.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < a.size(); ++c) m(r, c) = a[r] * std::conj(a[c]);
  }
  return {state.numQubits(), std::move(m)};
}

Complex innerProduct(const PureState& a, const PureState& b) {
  if (a.numQubits() != b.numQubits()) throw ShapeError("inner product of different sizes");
  Complex sum{};
  for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
    sum += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  }
  return sum;
}

PureState applyToQubit(const PureState& state, const ComplexMatrix& op, int qubit) {
  if (op.rows() != 2 || op.cols() != 2) throw ShapeError("single-qubit operator must be 2x2");
  const int n = state.numQubits();
  if (qubit < 0 || qubit >= n) throw DomainError("qubit index out of range");
  const std::size_t bit = std::size_t{1} << (n - 1 - qubit);
  std::vector<Complex> out(state.amplitudes());
  const auto& in = state.amplitudes();
  for (std::size_t idx = 0; idx < in.size(); ++idx) {
    if (idx & bit) continue;
    const Complex a0 = in[idx];
    const Complex a1 = in[idx | bit];
    out[idx] = op(0, 0) * a0 + op(0, 1) * a1;
    out[idx | bit] = op(1, 0) * a0 + op(1, 1) * a1;
  }
  return {n, std::move(out)};
}

ComplexMatrix pauliForDibit(std::uint8_t dibit) {
  switch (dibit & 0b11) {
    case 0b00:
      return pauli::identity();
    case 0b01:
      return pauli::z();
    case 0b10:
      return pauli::x();
    default:
      return pauli::x() * pauli::z();
  }
}

PureState encodeDibit(const PureState& pair, std::uint8_t dibit) {
  if (pair.numQubits() != 2) throw ShapeError("dibit encoding acts on a two-qubit pair");
  if (dibit > 3) throw DomainError("dibit must be in [0, 4)");
  return applyToQubit(pair, pauliForDibit(dibit), 0);
}

int measureBell(const PureState& pair) {
  if (pair.numQubits() != 2) throw ShapeError("Bell measurement needs a two-qubit state");
  int best = 0;
  double bestProb = -1.0;
  for (int k = 0; k < 4; ++k) {
    const double prob = std::norm(innerProduct(bellState(k), pair));
    if (prob > bestProb) {
      bestProb = prob;
      best = k;
    }
  }
  return best;
}

std::uint8_t decodeDibit(int bellIndex) {
  if (bellIndex < 0 || bellIndex > 3) throw DomainError("Bell index must be in [0, 4)");
  return static_cast<std::uint8_t>(bellIndex);
}

}  // namespace qlv
