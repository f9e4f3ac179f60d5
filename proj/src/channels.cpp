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

#include "qlv/channels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "qlv/errors.hpp"
#include "qlv/states.hpp"

namespace qlv {

namespace {

constexpr double kParamSlack = 1e-12;

// Row-major 4x4 superoperator acting on vec(X) = (x00, x01, x10, x11) of a
// 2x2 block: X -> sum_a K_a X K_a^dagger.
using SuperOp = std::array<Complex, 16>;

SuperOp superOpFor(const std::vector<ComplexMatrix>& ops) {
  SuperOp s{};
  for (const auto& k : ops) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        for (int u = 0; u < 2; ++u) {
          for (int v = 0; v < 2; ++v) s[(r * 2 + c) * 4 + u * 2 + v] += k(r, u) * std::conj(k(c, v));
        }
      }
    }
  }
  return s;
}

void applySuperOpInPlace(ComplexMatrix& m, int numQubits, int qubit, const SuperOp& s) {
  const std::size_t dim = m.rows();
  const std::size_t bit = std::size_t{1} << (numQubits - 1 - qubit);
  for (std::size_t r = 0; r < dim; ++r) {
    if (r & bit) continue;
    for (std::size_t c = 0; c < dim; ++c) {
      if (c & bit) continue;
      const std::array<Complex, 4> x{m(r, c), m(r, c | bit), m(r | bit, c), m(r | bit, c | bit)};
      std::array<Complex, 4> y{};
      for (int i = 0; i < 4; ++i) {
        y[i] = s[i * 4 + 0] * x[0] + s[i * 4 + 1] * x[1] + s[i * 4 + 2] * x[2] + s[i * 4 + 3] * x[3];
      }
      m(r, c) = y[0];
      m(r, c | bit) = y[1];
      m(r | bit, c) = y[2];
      m(r | bit, c | bit) = y[3];
    }
  }
}

void requireProbability(double value, const char* name) {
  if (!(value >= -kParamSlack && value <= 1.0 + kParamSlack)) {
    throw ValidationError(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

double clampUnit(double v) { return std::clamp(v, 0.0, 1.0); }

void requireUnitary(const ComplexMatrix& u, const char* name) {
  if (u.rows() != 2 || u.cols() != 2) throw ValidationError(std::string(name) + " must be 2x2");
  if ((u * dagger(u)).maxAbsDiff(ComplexMatrix::identity(2)) > 1e-10) {
    throw ValidationError(std::string(name) + " is not unitary");
  }
}

// [P^N + Q^N + c (sx + i sy)^N + conj(c) (sx - i sy)^N] / 2^(N+1)
DensityOperator evaluateCatForm(int numQubits, const ComplexMatrix& plus, const ComplexMatrix& minus,
                                Complex offDiagonal) {
  if (numQubits < 1) throw DomainError("cat state needs at least one qubit");
  if (numQubits > kDefaultMaxQubits) throw SizeLimitError("qubit count exceeds limit");
  const Complex i(0.0, 1.0);
  const auto raise = pauli::x() + i * pauli::y();
  const auto lower = pauli::x() - i * pauli::y();
  ComplexMatrix sum = kronPower(plus, numQubits);
  sum += kronPower(minus, numQubits);
  sum += offDiagonal * kronPower(raise, numQubits);
  sum += std::conj(offDiagonal) * kronPower(lower, numQubits);
  sum *= 1.0 / std::ldexp(1.0, numQubits + 1);
  return {numQubits, std::move(sum)};
}

}  // namespace

std::string_view toString(ChannelFamily family) {
  switch (family) {
    case ChannelFamily::depolarization: return "depolarization";
    case ChannelFamily::amplitudeDamping: return "amplitudeDamping";
    case ChannelFamily::phaseDamping: return "phaseDamping";
    case ChannelFamily::bitFlip: return "bitFlip";
    case ChannelFamily::phaseFlip: return "phaseFlip";
    case ChannelFamily::bitPhaseFlip: return "bitPhaseFlip";
    case ChannelFamily::generalZ: return "generalZ";
    case ChannelFamily::randomNoise: return "randomNoise";
    case ChannelFamily::combinedDampingRandom: return "combinedDampingRandom";
  }
  return "unknown";
}

std::optional<ChannelFamily> parseChannelFamily(std::string_view name) {
  for (auto f : {ChannelFamily::depolarization, ChannelFamily::amplitudeDamping,
                 ChannelFamily::phaseDamping, ChannelFamily::bitFlip, ChannelFamily::phaseFlip,
                 ChannelFamily::bitPhaseFlip, ChannelFamily::generalZ, ChannelFamily::randomNoise,
                 ChannelFamily::combinedDampingRandom}) {
    if (toString(f) == name) return f;
  }
  return std::nullopt;
}

ChannelSpec ChannelSpec::withP(ChannelFamily family, double p) {
  ChannelSpec spec;
  spec.family = family;
  spec.p = p;
  return spec;
}

double ChannelSpec::decoherenceParameter() const {
  if (p) return *p;
  if (gamma && t) return -std::expm1(-*gamma * *t);
  throw ValidationError("channel needs either p or both gamma and t");
}

void ChannelSpec::validate() const {
  if (gamma && *gamma < 0.0) throw ValidationError("gamma must be non-negative");
  if (t && *t < 0.0) throw ValidationError("t must be non-negative");
  switch (family) {
    case ChannelFamily::generalZ:
      if (z.gamma1 < 0.0 || z.gamma2 < 0.0) throw ValidationError("generalZ rates must be >= 0");
      if (std::abs(z.mu) > 1.0) throw ValidationError("generalZ requires |mu| <= 1");
      if (!t) throw ValidationError("generalZ needs the channel time t");
      return;
    case ChannelFamily::combinedDampingRandom:
      requireProbability(decoherenceParameter(), "p");
      requireProbability(eps1, "eps1");
      requireProbability(eps3, "eps3");
      requireProbability(eps4, "eps4");
      if (std::abs(eps1 - (eps3 + eps4)) > kParamSlack) {
        throw ValidationError("combined channel requires eps1 = eps3 + eps4");
      }
      if (u3) requireUnitary(*u3, "u3");
      if (u4) requireUnitary(*u4, "u4");
      return;
    default:
      requireProbability(decoherenceParameter(), "p");
  }
}

KrausSet::KrausSet(std::vector<ComplexMatrix> operators) : operators_(std::move(operators)) {
  if (operators_.empty() || operators_.size() > 4) {
    throw ValidationError("a single-qubit Kraus set holds 1 to 4 operators");
  }
  for (const auto& k : operators_) {
    if (k.rows() != 2 || k.cols() != 2) throw ValidationError("Kraus operators must be 2x2");
  }
}

KrausSet KrausSet::identity() { return KrausSet({ComplexMatrix::identity(2)}); }

double KrausSet::completenessDeviation() const {
  ComplexMatrix sum(2, 2);
  for (const auto& k : operators_) sum += dagger(k) * k;
  return sum.maxAbsDiff(ComplexMatrix::identity(2));
}

void KrausSet::requireComplete(double tol) const {
  const double dev = completenessDeviation();
  if (dev > tol) {
    throw ValidationError("Kraus set is not trace preserving (deviation " + std::to_string(dev) +
                          ")");
  }
}

KrausSet krausFor(const ChannelSpec& spec) {
  spec.validate();
  const auto so = pauli::identity();
  switch (spec.family) {
    case ChannelFamily::depolarization: {
      const double p = clampUnit(spec.decoherenceParameter());
      const double side = std::sqrt(p / 4.0);
      return KrausSet({std::sqrt(1.0 - 3.0 * p / 4.0) * so, side * pauli::x(), side * pauli::y(),
                       side * pauli::z()});
    }
    case ChannelFamily::amplitudeDamping: {
      const double p = clampUnit(spec.decoherenceParameter());
      return KrausSet({ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1.0 - p)}},
                       ComplexMatrix{{0.0, std::sqrt(p)}, {0.0, 0.0}}});
    }
    case ChannelFamily::phaseDamping: {
      const double p = clampUnit(spec.decoherenceParameter());
      return KrausSet({std::sqrt(1.0 - p) * so, ComplexMatrix{{std::sqrt(p), 0.0}, {0.0, 0.0}},
                       ComplexMatrix{{0.0, 0.0}, {0.0, std::sqrt(p)}}});
    }
    case ChannelFamily::bitFlip:
    case ChannelFamily::phaseFlip:
    case ChannelFamily::bitPhaseFlip: {
      // p weights the identity here: {sqrt(p) I, sqrt(1-p) sigma}.
      const double p = clampUnit(spec.decoherenceParameter());
      const auto sigma = spec.family == ChannelFamily::bitFlip     ? pauli::x()
                         : spec.family == ChannelFamily::phaseFlip ? pauli::z()
                                                                   : pauli::y();
      return KrausSet({std::sqrt(p) * so, std::sqrt(1.0 - p) * sigma});
    }
    case ChannelFamily::generalZ: {
      // Kraus form read off the Choi matrix of the single-qubit map
      // |0><0| -> (I + a Z)/2, |1><1| -> (I - b Z)/2, |0><1| -> lambda |0><1|.
      const auto& z = spec.z;
      const double t = *spec.t;
      const double e1 = std::exp(-z.gamma1 * t);
      const double a = e1 + z.mu * (1.0 - e1);
      const double b = e1 - z.mu * (1.0 - e1);
      const Complex lambda = std::exp(Complex(-z.gamma2 * t, -z.omega * t));
      const double alpha = (1.0 + a) / 2.0;
      const double beta = (1.0 + b) / 2.0;
      const double mean = (alpha + beta) / 2.0;
      const double radius = std::hypot((alpha - beta) / 2.0, std::abs(lambda));
      const double lower = mean - radius;
      if (lower < -1e-12 || (1.0 - a) < -1e-12 || (1.0 - b) < -1e-12) {
        throw ValidationError("generalZ parameters do not define a completely positive map");
      }
      std::vector<ComplexMatrix> ops;
      if (std::abs(lambda) <= 1e-15) {
        if (alpha > 1e-15) ops.push_back(ComplexMatrix{{std::sqrt(alpha), 0.0}, {0.0, 0.0}});
        if (beta > 1e-15) ops.push_back(ComplexMatrix{{0.0, 0.0}, {0.0, std::sqrt(beta)}});
      } else {
        for (double eig : {mean + radius, lower}) {
          if (eig <= 1e-15) continue;
          // Eigenvector (lambda, eig - alpha) of [[alpha, lambda], [conj(lambda), beta]].
          const Complex v0 = lambda;
          const Complex v1 = eig - alpha;
          const double scale = std::sqrt(eig) / std::sqrt(std::norm(v0) + std::norm(v1));
          ops.push_back(ComplexMatrix{{scale * v0, 0.0}, {0.0, scale * v1}});
        }
      }
      if ((1.0 - a) / 2.0 > 1e-15) {
        ops.push_back(ComplexMatrix{{0.0, 0.0}, {std::sqrt((1.0 - a) / 2.0), 0.0}});
      }
      if ((1.0 - b) / 2.0 > 1e-15) {
        ops.push_back(ComplexMatrix{{0.0, std::sqrt((1.0 - b) / 2.0)}, {0.0, 0.0}});
      }
      if (ops.empty()) ops.push_back(ComplexMatrix::identity(2));
      return KrausSet(std::move(ops));
    }
    case ChannelFamily::combinedDampingRandom: {
      const double p = clampUnit(spec.decoherenceParameter());
      const double damp = std::sqrt(1.0 - spec.eps1);
      const auto u3 = spec.u3.value_or(ComplexMatrix::identity(2));
      const auto u4 = spec.u4.value_or(ComplexMatrix::identity(2));
      return KrausSet({damp * ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1.0 - p)}},
                       damp * ComplexMatrix{{0.0, std::sqrt(p)}, {0.0, 0.0}},
                       std::sqrt(spec.eps3) * u3, std::sqrt(spec.eps4) * u4});
    }
    case ChannelFamily::randomNoise:
      throw ValidationError("random noise channels are sampled, not looked up");
  }
  throw ValidationError("unknown channel family");
}

DensityOperator applyOnQubit(const DensityOperator& rho, const KrausSet& kraus, int qubit) {
  kraus.requireComplete();
  if (qubit < 0 || qubit >= rho.numQubits()) throw DomainError("qubit index out of range");
  ComplexMatrix m = rho.matrix();
  applySuperOpInPlace(m, rho.numQubits(), qubit, superOpFor(kraus.operators()));
  return {rho.numQubits(), std::move(m)};
}

DensityOperator applySequential(const DensityOperator& rho, const KrausSet& kraus) {
  kraus.requireComplete();
  const auto s = superOpFor(kraus.operators());
  ComplexMatrix m = rho.matrix();
  for (int q = 0; q < rho.numQubits(); ++q) applySuperOpInPlace(m, rho.numQubits(), q, s);
  return {rho.numQubits(), std::move(m)};
}

DensityOperator applyProductOperators(const DensityOperator& rho, const KrausSet& kraus) {
  kraus.requireComplete();
  const int n = rho.numQubits();
  const std::size_t m = kraus.size();
  std::vector<SuperOp> single;
  for (const auto& k : kraus.operators()) single.push_back(superOpFor({k}));

  std::size_t total = 1;
  for (int q = 0; q < n; ++q) total *= m;

  ComplexMatrix sum(rho.dimension(), rho.dimension());
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t index = 0; index < total; ++index) {
    std::size_t rest = index;
    for (int q = n - 1; q >= 0; --q) {
      digits[q] = rest % m;
      rest /= m;
    }
    // (K_a0 (x) ... (x) K_a(n-1)) rho (...)^dagger, applied factor by factor.
    ComplexMatrix term = rho.matrix();
    for (int q = 0; q < n; ++q) applySuperOpInPlace(term, n, q, single[digits[q]]);
    sum += term;
  }
  return {n, std::move(sum)};
}

DensityOperator applyPerQubit(const DensityOperator& rho, const KrausSet& kraus,
                              const ApplyOptions& options) {
  kraus.requireComplete(options.completenessTolerance);
  std::size_t count = 1;
  for (int q = 0; q < rho.numQubits() && count <= options.enumerationLimit; ++q) {
    count *= kraus.size();
  }
  if (count <= options.enumerationLimit) return applyProductOperators(rho, kraus);
  return applySequential(rho, kraus);
}

DensityOperator closedFormDepolarized(int numQubits, double p) {
  requireProbability(p, "p");
  const double s = 1.0 - p;
  const auto so = pauli::identity();
  const auto sz = pauli::z();
  return evaluateCatForm(numQubits, so + s * sz, so - s * sz, std::pow(s, numQubits));
}

DensityOperator closedFormAmplitudeDamped(int numQubits, double p) {
  requireProbability(p, "p");
  const double decay = 1.0 - p;
  const auto so = pauli::identity();
  const auto sz = pauli::z();
  return evaluateCatForm(numQubits, so + sz, so + (1.0 - 2.0 * decay) * sz,
                         std::pow(decay, numQubits / 2.0));
}

DensityOperator closedFormPhaseDamped(int numQubits, double p) {
  requireProbability(p, "p");
  const double decay = 1.0 - p;
  const auto so = pauli::identity();
  const auto sz = pauli::z();
  return evaluateCatForm(numQubits, so + sz, so - sz, std::pow(decay, numQubits));
}

GeneralZResult closedFormGeneralZ(int numQubits, const GeneralZParams& params, double t) {
  if (params.gamma1 < 0.0 || params.gamma2 < 0.0) throw ValidationError("rates must be >= 0");
  if (std::abs(params.mu) > 1.0) throw ValidationError("|mu| must be <= 1");
  if (t < 0.0) throw ValidationError("t must be >= 0");
  const double e1 = std::exp(-params.gamma1 * t);
  const auto so = pauli::identity();
  const auto sz = pauli::z();
  const auto plus = so + (e1 + params.mu * (1.0 - e1)) * sz;
  const auto minus = so - (e1 - params.mu * (1.0 - e1)) * sz;
  const Complex offDiagonal =
      std::exp(-static_cast<double>(numQubits) * Complex(params.gamma2, params.omega) * t);
  auto rho = evaluateCatForm(numQubits, plus, minus, offDiagonal);
  const double lowest = rho.minEigenvalue();
  return {std::move(rho), lowest, lowest >= -Tolerances{}.psd};
}

double fidelity(const DensityOperator& reference, const DensityOperator& evolved) {
  if (reference.dimension() != evolved.dimension()) {
    throw ShapeError("fidelity needs operators of equal dimension");
  }
  if (reference.purity() < 1.0 - 1e-8) {
    throw ContractError("fidelity reference must be a pure state");
  }
  return clampUnit(traceProduct(reference.matrix(), evolved.matrix()).real());
}

namespace cat_fidelity {

double depolarization(int numQubits, double p) {
  const double s = 1.0 - p;
  return (std::pow(1.0 + s, numQubits) + std::pow(1.0 - s, numQubits)) /
             std::ldexp(1.0, numQubits + 1) +
         std::pow(s, numQubits) / 2.0;
}

double amplitudeDamping(int numQubits, double p) {
  return 0.25 * (1.0 + std::pow(p, numQubits) + std::pow(1.0 - p, numQubits) +
                 2.0 * std::pow(1.0 - p, numQubits / 2.0));
}

double phaseDamping(int numQubits, double p) { return (1.0 + std::pow(1.0 - p, numQubits)) / 2.0; }

}  // namespace cat_fidelity

}  // namespace qlv
