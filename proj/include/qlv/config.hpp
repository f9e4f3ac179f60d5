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
#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qlv/analysis.hpp"
#include "qlv/channels.hpp"

namespace qlv::config {

using Json = nlohmann::json;

/// Throws ConfigError naming `path` if `object` is not a JSON object or holds
/// keys outside `allowed`.
void requireKeys(const Json& object, const std::string& path,
                 std::initializer_list<std::string_view> allowed);

double requireNumber(const Json& object, const std::string& key, const std::string& path);
double numberOr(const Json& object, const std::string& key, const std::string& path,
                double fallback);
std::int64_t requireInteger(const Json& object, const std::string& key, const std::string& path);
std::uint64_t requireUnsigned(const Json& object, const std::string& key, const std::string& path);
std::string requireString(const Json& object, const std::string& key, const std::string& path);

/// Deterministic channel from JSON:
///   {"family": "...", "p"|"gamma"+"t", "gamma1", "gamma2", "mu", "omega",
///    "eps1", "eps3", "eps4", "u3", "u4"}
/// u3/u4 are "identity" or a 2x2 matrix of [re, im] pairs.
ChannelSpec parseChannelSpec(const Json& object, const std::string& path);

/// Channel for a fidelity curve. Adds randomNoise ({"weightMode", "trials"})
/// and combinedDampingRandom with "u3"/"u4" = "haar" (plus "trials").
/// The p value is supplied by the grid, so "p", "gamma" and "t" are rejected.
CurveChannel parseCurveChannel(const Json& object, const std::string& path, std::uint64_t seed);

Json toJson(const ChannelSpec& spec);

}  // namespace qlv::config
