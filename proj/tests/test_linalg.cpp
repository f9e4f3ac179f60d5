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

#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "qlv/errors.hpp"
#include "qlv/linalg.hpp"

using namespace qlv;

TEST(linalg, pauli_algebra) {
  const auto x = pauli::x(), y = pauli::y(), z = pauli::z(), i = pauli::identity();
  EXPECT_EQ(x * x, i);
  EXPECT_EQ(y * y, i);
  EXPECT_EQ(z * z, i);
  EXPECT_EQ(x * y, Complex(0.0, 1.0) * z);
  EXPECT_EQ(y, dagger(y));
}

TEST(linalg, kron_matches_reference) {
  const ComplexMatrix a{{1.0, Complex(0.0, 2.0)}, {3.0, -1.0}};
  const ComplexMatrix b{{0.5, 1.0, 0.0}, {Complex(1.0, 1.0), 2.0, -3.0}};
  const auto expected = oracle::kron(oracle::fromLibrary(a), oracle::fromLibrary(b));
  const auto got = kron(a, b);
  ASSERT_EQ(got.rows(), 4u);
  ASSERT_EQ(got.cols(), 6u);
  EXPECT_EQ(oracle::maxDiff(expected, got), 0.0);
}

TEST(linalg, kron_power_dimension_and_limit) {
  EXPECT_EQ(kronPower(pauli::z(), 3).rows(), 8u);
  EXPECT_EQ(kronPower(pauli::x(), 1), pauli::x());
  EXPECT_THROW(kronPower(pauli::x(), 5, 4), SizeLimitError);
  EXPECT_THROW(kronPower(pauli::x(), 0), DomainError);
}

TEST(linalg, shape_errors) {
  const ComplexMatrix a(2, 3);
  const ComplexMatrix b(2, 2);
  EXPECT_THROW(a * b, ShapeError);
  EXPECT_THROW(trace(a), ShapeError);
  EXPECT_THROW(ComplexMatrix(2, 2, std::vector<Complex>(3)), ShapeError);
}

TEST(linalg, trace_product_matches_full_product) {
  const ComplexMatrix a{{1.0, Complex(2.0, 1.0)}, {Complex(0.0, -1.0), 4.0}};
  const ComplexMatrix b{{Complex(0.5, 0.5), 1.0}, {2.0, -3.0}};
  const auto full = trace(a * b);
  const auto fast = traceProduct(a, b);
  EXPECT_NEAR(std::abs(full - fast), 0.0, 1e-15);
}

TEST(linalg, hermitian_eigenvalues) {
  const ComplexMatrix h{{2.0, Complex(0.0, 1.0)}, {Complex(0.0, -1.0), 2.0}};
  const auto ev = hermitianEigenvalues(h);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0], 1.0, 1e-12);
  EXPECT_NEAR(ev[1], 3.0, 1e-12);
  EXPECT_NEAR(minEigenvalue(h), 1.0, 1e-12);
  EXPECT_THROW(minEigenvalue(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}), ValidationError);
}

TEST(linalg, density_operator_validation) {
  EXPECT_NO_THROW(DensityOperator(1, ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}}));
  EXPECT_THROW(DensityOperator(1, ComplexMatrix{{0.5, 0.0}, {0.0, 0.6}}), ValidationError);
  EXPECT_THROW(DensityOperator(1, ComplexMatrix{{0.5, 0.1}, {0.0, 0.5}}), ValidationError);
  EXPECT_THROW(DensityOperator(2, ComplexMatrix{{0.5, 0.0}, {0.0, 0.5}}), ShapeError);
  EXPECT_THROW(DensityOperator(1, ComplexMatrix{{NAN, 0.0}, {0.0, 1.0}}), ValidationError);

  const DensityOperator negative(1, ComplexMatrix{{1.5, 0.0}, {0.0, -0.5}});
  EXPECT_THROW(negative.validatePositivity(), ValidationError);
  const DensityOperator mixed(1, ComplexMatrix{{0.5, 0.0}, {0.0, 0.5}});
  EXPECT_NO_THROW(mixed.validatePositivity());
  EXPECT_DOUBLE_EQ(mixed.purity(), 0.5);
}

TEST(linalg, qubits_for_dimension) {
  EXPECT_EQ(qubitsForDimension(1), 0);
  EXPECT_EQ(qubitsForDimension(8), 3);
  EXPECT_EQ(qubitsForDimension(6), -1);
}
