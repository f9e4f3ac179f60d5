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
#include "qlv/states.hpp"

using namespace qlv;

TEST(states, bell_basis_is_orthonormal) {
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const auto overlap = innerProduct(bellState(a), bellState(b));
      EXPECT_NEAR(std::abs(overlap), a == b ? 1.0 : 0.0, 1e-15) << a << "," << b;
    }
  }
  EXPECT_THROW(bellState(4), DomainError);
}

TEST(states, ghz_basis_is_orthonormal) {
  for (int n = 2; n <= 4; ++n) {
    const std::uint32_t count = 1u << n;
    for (std::uint32_t a = 0; a < count; ++a) {
      for (std::uint32_t b = 0; b < count; ++b) {
        EXPECT_NEAR(std::abs(innerProduct(ghzState(n, a), ghzState(n, b))), a == b ? 1.0 : 0.0,
                    1e-15);
      }
    }
    EXPECT_THROW(ghzState(n, count), DomainError);
  }
  EXPECT_THROW(ghzState(1, 0), DomainError);
}

TEST(states, ghz_two_qubits_spans_bell_basis) {
  for (std::uint32_t k = 0; k < 4; ++k) {
    double best = 0.0;
    for (int b = 0; b < 4; ++b) best = std::max(best, std::abs(innerProduct(ghzState(2, k), bellState(b))));
    EXPECT_NEAR(best, 1.0, 1e-15);
  }
}

TEST(states, cat_density_matches_pure_projector) {
  for (int n = 1; n <= 6; ++n) {
    const auto rho = catDensity(n);
    EXPECT_LE(oracle::maxDiff(oracle::catMatrix(n), rho.matrix()), 1e-15) << n;
    if (n >= 2) {
      EXPECT_LE(toDensity(ghzState(n, 0)).matrix().maxAbsDiff(rho.matrix()), 1e-15);
    }
    EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
    EXPECT_GE(rho.minEigenvalue(), -1e-12);
  }
}

TEST(states, cat_density_respects_size_limit) {
  EXPECT_THROW(catDensity(5, 4), SizeLimitError);
}

TEST(states, basis_label_validation) {
  EXPECT_NO_THROW((BasisLabel{BasisFamily::bell, 2, 3}.validate()));
  EXPECT_THROW((BasisLabel{BasisFamily::bell, 3, 0}.validate()), DomainError);
  EXPECT_THROW((BasisLabel{BasisFamily::ghz, 3, 8}.validate()), DomainError);
}

TEST(states, superdense_round_trip) {
  for (std::uint8_t d = 0; d < 4; ++d) {
    const auto encoded = encodeDibit(bellState(0), d);
    EXPECT_EQ(measureBell(encoded), d);
    EXPECT_EQ(decodeDibit(measureBell(encoded)), d);
    EXPECT_NEAR(std::abs(innerProduct(encoded, bellState(d))), 1.0, 1e-15);
  }
}

TEST(states, pure_state_requires_normalization) {
  EXPECT_THROW(PureState(1, {1.0, 1.0}), ValidationError);
  EXPECT_THROW(PureState(2, {1.0, 0.0}), ShapeError);
}
