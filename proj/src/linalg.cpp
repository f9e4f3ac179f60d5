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

#include "qlv/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qlv/errors.hpp"

namespace qlv {

namespace {

void checkFinite(std::span<const Complex> entries) {
  for (const auto& v : entries) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ValidationError("matrix entry is not finite");
    }
  }
}

void requireSameShape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be at least 1");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be at least 1");
  if (data_.size() != rows * cols) throw ShapeError("entry count does not match rows * cols");
  checkFinite(data_);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ == 0 || cols_ == 0) throw ShapeError("matrix dimensions must be at least 1");
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw ShapeError("ragged initializer list");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  checkFinite(data_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  requireSameShape(*this, other, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  requireSameShape(*this, other, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& v : data_) v *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("matrix product: inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

double ComplexMatrix::maxAbsDiff(const ComplexMatrix& other) const {
  requireSameShape(*this, other, "maxAbsDiff");
  double worst = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
  }
  return worst;
}

namespace pauli {
ComplexMatrix identity() { return {{1.0, 0.0}, {0.0, 1.0}}; }
ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
// i(|1><0| - |0><1|)
ComplexMatrix y() { return {{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, int maxQubits) {
  const std::size_t limit = std::size_t{1} << maxQubits;
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  if (rows > limit || cols > limit) {
    throw SizeLimitError("kron result " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " exceeds the " + std::to_string(maxQubits) + "-qubit limit");
  }
  ComplexMatrix out(rows, cols);
  for (std::size_t ar = 0; ar < a.rows(); ++ar) {
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex s = a(ar, ac);
      if (s == Complex{}) continue;
      for (std::size_t br = 0; br < b.rows(); ++br) {
        for (std::size_t bc = 0; bc < b.cols(); ++bc) {
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
        }
      }
    }
  }
  return out;
}

ComplexMatrix kronPower(const ComplexMatrix& a, int count, int maxQubits) {
  if (count < 1) throw DomainError("kronPower needs at least one factor");
  ComplexMatrix out = a;
  for (int i = 1; i < count; ++i) out = kron(out, a, maxQubits);
  return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  }
  return out;
}

Complex trace(const ComplexMatrix& a) {
  if (!a.isSquare()) throw ShapeError("trace of a non-square matrix");
  Complex sum{};
  for (std::size_t i = 0; i < a.rows(); ++i) sum += a(i, i);
  return sum;
}

Complex traceProduct(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.isSquare() || !b.isSquare() || a.rows() != b.rows()) {
    throw ShapeError("traceProduct needs square matrices of equal dimension");
  }
  const std::size_t n = a.rows();
  Complex sum{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) sum += a(i, j) * b(j, i);
  }
  return sum;
}

double hermitianDeviation(const ComplexMatrix& a) {
  if (!a.isSquare()) throw ShapeError("Hermiticity of a non-square matrix");
  double worst = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = r; c < a.cols(); ++c) {
      worst = std::max(worst, std::abs(a(r, c) - std::conj(a(c, r))));
    }
  }
  return worst;
}

std::vector<double> hermitianEigenvalues(const ComplexMatrix& a, const Tolerances& tol) {
  const double dev = hermitianDeviation(a);
  if (dev > tol.hermitian) {
    throw ValidationError("matrix is not Hermitian (deviation " + std::to_string(dev) + ")");
  }
  const auto n = static_cast<Eigen::Index>(a.rows());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = a(r, c);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ValidationError("eigenvalue solver did not converge");
  const auto& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

double minEigenvalue(const ComplexMatrix& a, const Tolerances& tol) {
  return hermitianEigenvalues(a, tol).front();
}

int qubitsForDimension(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) return -1;
  return std::countr_zero(dim);
}

DensityOperator::DensityOperator(int numQubits, ComplexMatrix matrix, const Tolerances& tol)
    : numQubits_(numQubits), matrix_(std::move(matrix)) {
  if (numQubits < 1) throw DomainError("density operator needs at least one qubit");
  const std::size_t dim = std::size_t{1} << numQubits;
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw ShapeError("density operator for " + std::to_string(numQubits) +
                     " qubits must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  checkFinite(matrix_.data());
  const double dev = hermitianDeviation(matrix_);
  if (dev > tol.hermitian) {
    throw ValidationError("density operator is not Hermitian (deviation " + std::to_string(dev) +
                          ")");
  }
  const Complex tr = trace(matrix_);
  if (std::abs(tr - Complex(1.0)) > tol.trace) {
    throw ValidationError("density operator trace is " + std::to_string(tr.real()) + ", not 1");
  }
}

double DensityOperator::purity() const { return traceProduct(matrix_, matrix_).real(); }

double DensityOperator::minEigenvalue() const { return qlv::minEigenvalue(matrix_); }

void DensityOperator::validatePositivity(const Tolerances& tol) const {
  const double lowest = minEigenvalue();
  if (lowest < -tol.psd) {
    throw ValidationError("density operator is not positive semidefinite (min eigenvalue " +
                          std::to_string(lowest) + ")");
  }
}

}  // namespace qlv
