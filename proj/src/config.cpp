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

#include "qlv/config.hpp"

#include <algorithm>

#include "qlv/errors.hpp"

namespace qlv::config {

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

ComplexMatrix parseMatrix(const Json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 2) throw ConfigError(path, "expected a 2x2 matrix");
  std::vector<Complex> entries;
  for (const auto& row : value) {
    if (!row.is_array() || row.size() != 2) throw ConfigError(path, "expected a 2x2 matrix");
    for (const auto& cell : row) {
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number()) {
        throw ConfigError(path, "matrix entries are [re, im] pairs");
      }
      entries.emplace_back(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return ComplexMatrix(2, 2, std::move(entries));
}

void parseGeneralZ(const Json& object, const std::string& path, ChannelSpec& spec) {
  spec.z.gamma1 = numberOr(object, "gamma1", path, 0.0);
  spec.z.gamma2 = numberOr(object, "gamma2", path, 0.0);
  spec.z.mu = numberOr(object, "mu", path, 0.0);
  spec.z.omega = numberOr(object, "omega", path, 0.0);
}

void parseMixing(const Json& object, const std::string& path, ChannelSpec& spec) {
  spec.eps1 = numberOr(object, "eps1", path, 0.0);
  spec.eps3 = numberOr(object, "eps3", path, 0.0);
  spec.eps4 = numberOr(object, "eps4", path, 0.0);
}

ChannelFamily parseFamily(const Json& object, const std::string& path) {
  const auto name = requireString(object, "family", path);
  const auto family = parseChannelFamily(name);
  if (!family) throw ConfigError(join(path, "family"), "unknown channel family '" + name + "'");
  return *family;
}

void validated(const ChannelSpec& spec, const std::string& path) {
  try {
    spec.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

void requireKeys(const Json& object, const std::string& path,
                 std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(join(path, key), "unknown key");
    }
  }
}

double requireNumber(const Json& object, const std::string& key, const std::string& path) {
  if (!object.contains(key)) throw ConfigError(join(path, key), "missing required number");
  const auto& v = object.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  return v.get<double>();
}

double numberOr(const Json& object, const std::string& key, const std::string& path,
                double fallback) {
  return object.contains(key) ? requireNumber(object, key, path) : fallback;
}

std::int64_t requireInteger(const Json& object, const std::string& key, const std::string& path) {
  if (!object.contains(key)) throw ConfigError(join(path, key), "missing required integer");
  const auto& v = object.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t requireUnsigned(const Json& object, const std::string& key, const std::string& path) {
  if (!object.contains(key)) throw ConfigError(join(path, key), "missing required integer");
  const auto& v = object.at(key);
  if (!v.is_number_unsigned()) throw ConfigError(join(path, key), "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string requireString(const Json& object, const std::string& key, const std::string& path) {
  if (!object.contains(key)) throw ConfigError(join(path, key), "missing required string");
  const auto& v = object.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

ChannelSpec parseChannelSpec(const Json& object, const std::string& path) {
  requireKeys(object, path,
              {"family", "p", "gamma", "t", "gamma1", "gamma2", "mu", "omega", "eps1", "eps3",
               "eps4", "u3", "u4"});
  ChannelSpec spec;
  spec.family = parseFamily(object, path);
  if (spec.family == ChannelFamily::randomNoise) {
    throw ConfigError(join(path, "family"), "randomNoise is only valid for curves");
  }
  if (object.contains("p")) spec.p = requireNumber(object, "p", path);
  if (object.contains("gamma")) spec.gamma = requireNumber(object, "gamma", path);
  if (object.contains("t")) spec.t = requireNumber(object, "t", path);
  parseGeneralZ(object, path, spec);
  parseMixing(object, path, spec);
  for (const char* key : {"u3", "u4"}) {
    if (!object.contains(key)) continue;
    const auto& v = object.at(key);
    auto& slot = std::string_view(key) == "u3" ? spec.u3 : spec.u4;
    if (v.is_string() && v.get<std::string>() == "identity") {
      slot = ComplexMatrix::identity(2);
    } else if (v.is_array()) {
      try {
        slot = parseMatrix(v, join(path, key));
      } catch (const ValidationError& e) {
        throw ConfigError(join(path, key), e.what());
      }
    } else {
      throw ConfigError(join(path, key), "expected \"identity\" or a 2x2 matrix");
    }
  }
  return spec;
}

CurveChannel parseCurveChannel(const Json& object, const std::string& path, std::uint64_t seed) {
  const auto family = parseFamily(object, path);
  if (family == ChannelFamily::randomNoise) {
    requireKeys(object, path, {"family", "weightMode", "trials"});
    RandomChannelSpec spec;
    spec.seed = seed;
    if (object.contains("weightMode")) {
      const auto name = requireString(object, "weightMode", path);
      const auto mode = parseWeightMode(name);
      if (!mode) throw ConfigError(join(path, "weightMode"), "unknown weight mode '" + name + "'");
      spec.weightMode = *mode;
    }
    if (object.contains("trials")) spec.trials = requireUnsigned(object, "trials", path);
    if (spec.trials < 1) throw ConfigError(join(path, "trials"), "must be at least 1");
    return spec;
  }
  for (const char* key : {"p", "gamma"}) {
    if (object.contains(key)) throw ConfigError(join(path, key), "p comes from the grid");
  }
  if (family == ChannelFamily::generalZ && object.contains("t")) {
    throw ConfigError(join(path, "t"), "the generalZ channel time comes from the grid");
  }
  const bool haar = family == ChannelFamily::combinedDampingRandom &&
                    ((object.contains("u3") && object.at("u3") == "haar") ||
                     (object.contains("u4") && object.at("u4") == "haar"));
  if (haar) {
    requireKeys(object, path, {"family", "eps1", "eps3", "eps4", "u3", "u4", "trials"});
    for (const char* key : {"u3", "u4"}) {
      if (object.contains(key) && object.at(key) != "haar") {
        throw ConfigError(join(path, key), "mix of sampled and fixed unitaries is not supported");
      }
    }
    SampledCombinedSpec sampled;
    sampled.base.family = family;
    parseMixing(object, path, sampled.base);
    sampled.seed = seed;
    if (object.contains("trials")) sampled.trials = requireUnsigned(object, "trials", path);
    if (sampled.trials < 1) throw ConfigError(join(path, "trials"), "must be at least 1");
    ChannelSpec probe = sampled.base;
    probe.p = 0.0;
    validated(probe, path);
    return sampled;
  }
  auto spec = parseChannelSpec(object, path);
  ChannelSpec probe = spec;
  if (family == ChannelFamily::generalZ) {
    probe.t = 0.0;
  } else {
    probe.p = 0.0;
  }
  validated(probe, path);
  return spec;
}

Json toJson(const ChannelSpec& spec) {
  Json out;
  out["family"] = std::string(toString(spec.family));
  if (spec.p) out["p"] = *spec.p;
  if (spec.gamma) out["gamma"] = *spec.gamma;
  if (spec.t) out["t"] = *spec.t;
  if (spec.family == ChannelFamily::generalZ) {
    out["gamma1"] = spec.z.gamma1;
    out["gamma2"] = spec.z.gamma2;
    out["mu"] = spec.z.mu;
    out["omega"] = spec.z.omega;
  }
  if (spec.family == ChannelFamily::combinedDampingRandom) {
    out["eps1"] = spec.eps1;
    out["eps3"] = spec.eps3;
    out["eps4"] = spec.eps4;
  }
  for (const auto& [key, slot] : {std::pair{"u3", &spec.u3}, std::pair{"u4", &spec.u4}}) {
    if (!*slot) continue;
    Json m = Json::array();
    for (std::size_t r = 0; r < 2; ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < 2; ++c) row.push_back({(**slot)(r, c).real(), (**slot)(r, c).imag()});
      m.push_back(row);
    }
    out[key] = m;
  }
  return out;
}

}  // namespace qlv::config
