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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qlv {

using Complex = std::complex<double>;

/// Numerical tolerances used by validation. Defaults absorb double-precision
/// accumulation over matrices up to 4096 x 4096.
struct Tolerances {
  double hermitian = 1e-10;  // max |M - M^dagger| entrywise
  double trace = 1e-10;      // |Tr(rho) - 1|
  double psd = 1e-8;         // minimum eigenvalue may dip to -psd
};

inline constexpr int kDefaultMaxQubits = 12;

/// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix diagonal(std::span<const Complex> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool isSquare() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

  /// Largest entrywise |a - b|. Shapes must match.
  double maxAbsDiff(const ComplexMatrix& other) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

namespace pauli {
ComplexMatrix identity();  // sigma_o
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

/// Kronecker product. Throws SizeLimitError when either result dimension
/// exceeds 2^maxQubits.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                   int maxQubits = kDefaultMaxQubits);

/// a (x) a (x) ... (x) a, `count` factors (count >= 1).
ComplexMatrix kronPower(const ComplexMatrix& a, int count, int maxQubits = kDefaultMaxQubits);

ComplexMatrix dagger(const ComplexMatrix& a);

Complex trace(const ComplexMatrix& a);

/// Tr(a b) without forming the product.
Complex traceProduct(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |a - a^dagger| over all entries.
double hermitianDeviation(const ComplexMatrix& a);

/// Smallest eigenvalue of a Hermitian matrix. Throws ValidationError when the
/// input is not Hermitian within `tol.hermitian`.
double minEigenvalue(const ComplexMatrix& a, const Tolerances& tol = {});

/// All eigenvalues of a Hermitian matrix, ascending.
std::vector<double> hermitianEigenvalues(const ComplexMatrix& a, const Tolerances& tol = {});

/// Number of qubits n with 2^n == dim, or -1 if dim is not a power of two.
int qubitsForDimension(std::size_t dim);

/// N-qubit density operator: Hermitian, unit trace, positive semidefinite.
///
/// Construction checks shape, finiteness, Hermiticity and trace, which are
/// O(d^2). Positivity needs an eigen-solve and is checked by
/// `validatePositivity()` on demand.
class DensityOperator {
 public:
  DensityOperator(int numQubits, ComplexMatrix matrix, const Tolerances& tol = {});

  int numQubits() const { return numQubits_; }
  std::size_t dimension() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

  /// Tr(rho^2).
  double purity() const;
  double minEigenvalue() const;
  /// Throws ValidationError if the minimum eigenvalue is below -tol.psd.
  void validatePositivity(const Tolerances& tol = {}) const;

 private:
  int numQubits_;
  ComplexMatrix matrix_;
};

}  // namespace qlv
