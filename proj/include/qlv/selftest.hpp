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

#include <functional>
#include <string>
#include <vector>

#include "qlv/channels.hpp"

namespace qlv {

/// Source of catalog Kraus sets. Swappable so a corrupted catalog can be
/// shown to trip the checks.
using KrausProvider = std::function<KrausSet(const ChannelSpec&)>;

struct SelftestGroup {
  std::string name;
  bool passed = true;
  int checks = 0;
  /// First failure, empty when the group passed.
  std::string detail;
};

struct SelftestOptions {
  int maxQubits = 8;
  int gridPoints = 11;
};

/// Invariant groups: completeness, oracle-equivalence, generalZ-reductions,
/// trace-psd, pauli-frames, superdense.
std::vector<SelftestGroup> runSelftest(const KrausProvider& provider = krausFor,
                                       const SelftestOptions& options = {});

}  // namespace qlv
