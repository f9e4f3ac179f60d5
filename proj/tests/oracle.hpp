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

// Reference computations for the tests. Written against plain nested vectors
// so they share no code with the library under test.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qlv/linalg.hpp"

namespace qlv::oracle {

using C = std::complex<double>;
using Mat = std::vector<std::vector<C>>;

inline Mat zeros(std::size_t n) { return Mat(n, std::vector<C>(n)); }

inline Mat fromLibrary(const ComplexMatrix& m) {
  Mat out(m.rows(), std::vector<C>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  }
  return out;
}

inline Mat mul(const Mat& a, const Mat& b) {
  Mat out(a.size(), std::vector<C>(b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == C(0.0)) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

inline Mat adjoint(const Mat& a) {
  Mat out(a[0].size(), std::vector<C>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[0].size(); ++j) out[j][i] = std::conj(a[i][j]);
  }
  return out;
}

inline Mat kron(const Mat& a, const Mat& b) {
  const std::size_t ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
  Mat out(ar * br, std::vector<C>(ac * bc));
  for (std::size_t i = 0; i < ar; ++i) {
    for (std::size_t j = 0; j < ac; ++j) {
      for (std::size_t k = 0; k < br; ++k) {
        for (std::size_t l = 0; l < bc; ++l) out[i * br + k][j * bc + l] = a[i][j] * b[k][l];
      }
    }
  }
  return out;
}

inline void addInto(Mat& acc, const Mat& x, C scale = 1.0) {
  for (std::size_t i = 0; i < acc.size(); ++i) {
    for (std::size_t j = 0; j < acc[i].size(); ++j) acc[i][j] += scale * x[i][j];
  }
}

inline double maxDiff(const Mat& a, const ComplexMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) worst = std::max(worst, std::abs(a[i][j] - b(i, j)));
  }
  return worst;
}

/// |psi><psi| for the cat state (|0..0> + |1..1>)/sqrt2, written out entry by entry.
inline Mat catMatrix(int n) {
  const std::size_t d = std::size_t{1} << n;
  Mat out = zeros(d);
  out[0][0] = out[d - 1][d - 1] = out[0][d - 1] = out[d - 1][0] = 0.5;
  return out;
}

/// Sum over every tensor product of single-qubit Kraus matrices, each built
/// as a full 2^N x 2^N operator.
inline Mat applyProductChannel(const Mat& rho, const std::vector<Mat>& kraus, int n) {
  Mat out = zeros(rho.size());
  std::size_t total = 1;
  for (int q = 0; q < n; ++q) total *= kraus.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    Mat op{{C(1.0)}};
    std::size_t rest = idx;
    for (int q = 0; q < n; ++q) {
      op = kron(op, kraus[rest % kraus.size()]);
      rest /= kraus.size();
    }
    addInto(out, mul(mul(op, rho), adjoint(op)));
  }
  return out;
}

inline double traceProductReal(const Mat& a, const Mat& b) {
  C s{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) s += a[i][j] * b[j][i];
  }
  return s.real();
}

/// Depolarization Kraus set {sqrt(1-3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}.
inline std::vector<Mat> depolarizingKraus(double p) {
  const double a = std::sqrt(1.0 - 0.75 * p), b = std::sqrt(p / 4.0);
  return {{{a, 0.0}, {0.0, a}},
          {{0.0, b}, {b, 0.0}},
          {{0.0, C(0.0, -b)}, {C(0.0, b), 0.0}},
          {{b, 0.0}, {0.0, -b}}};
}

inline std::vector<Mat> amplitudeDampingKraus(double p) {
  return {{{1.0, 0.0}, {0.0, std::sqrt(1.0 - p)}}, {{0.0, std::sqrt(p)}, {0.0, 0.0}}};
}

/// Phase damping as a mixture of identity and a full dephasing Z with the
/// same coherence decay 1 - p.
inline std::vector<Mat> phaseDampingKraus(double p) {
  const double keep = std::sqrt(1.0 - p / 2.0), flip = std::sqrt(p / 2.0);
  return {{{keep, 0.0}, {0.0, keep}}, {{flip, 0.0}, {0.0, -flip}}};
}

/// P(at least k successes of m) by enumerating all 2^m outcome patterns.
inline double atLeastByEnumeration(int k, int m, double f) {
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    int successes = 0;
    double prob = 1.0;
    for (int i = 0; i < m; ++i) {
      const bool ok = (mask >> i) & 1u;
      successes += ok ? 1 : 0;
      prob *= ok ? f : 1.0 - f;
    }
    if (successes >= k) total += prob;
  }
  return total;
}

}  // namespace qlv::oracle
