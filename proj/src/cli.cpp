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

#include "qlv/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "qlv/analysis.hpp"
#include "qlv/config.hpp"
#include "qlv/errors.hpp"
#include "qlv/protocol.hpp"

namespace qlv::cli {

namespace {

namespace fs = std::filesystem;
using config::Json;

struct Command {
  std::string verb;
  std::string configPath;
  std::string outPath;
  std::optional<std::uint64_t> seed;
  std::string grid;
  bool quiet = false;
};

struct GridSpec {
  double start = 0.0;
  double end = 0.5;
  std::size_t points = 101;
};

Json loadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
}

void requireOutDirectory(const std::string& outPath) {
  if (outPath.empty()) throw ConfigError("--out", "required");
  const auto parent = fs::path(outPath).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw ConfigError("--out", "directory '" + parent.string() + "' does not exist");
  }
}

void writeFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("--out", "cannot write '" + path + "'");
  out << contents;
}

GridSpec parseGridFlag(const std::string& text) {
  GridSpec g;
  std::istringstream in(text);
  std::string a, b, c;
  if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c) ||
      a.empty() || b.empty() || c.empty()) {
    throw ConfigError("--grid", "expected START:END:POINTS");
  }
  try {
    std::size_t used = 0;
    g.start = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    g.end = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    const long long points = std::stoll(c, &used);
    if (used != c.size() || points < 1) throw std::invalid_argument(c);
    g.points = static_cast<std::size_t>(points);
  } catch (const std::logic_error&) {
    throw ConfigError("--grid", "expected START:END:POINTS");
  }
  return g;
}

GridSpec parseGridJson(const Json& doc) {
  GridSpec g;
  if (!doc.contains("grid")) return g;
  const auto& grid = doc.at("grid");
  config::requireKeys(grid, "grid", {"start", "end", "points"});
  g.start = config::requireNumber(grid, "start", "grid");
  g.end = config::requireNumber(grid, "end", "grid");
  g.points = config::requireUnsigned(grid, "points", "grid");
  return g;
}

std::vector<double> resolveGrid(const Json& doc, const Command& cmd) {
  const auto g = cmd.grid.empty() ? parseGridJson(doc) : parseGridFlag(cmd.grid);
  try {
    auto grid = linearGrid(g.start, g.end, g.points);
    validateGrid(grid);
    return grid;
  } catch (const DomainError& e) {
    throw ConfigError(cmd.grid.empty() ? "grid" : "--grid", e.what());
  }
}

struct SweepConfig {
  std::vector<CurveChannel> channels;
  std::vector<int> numQubits;
  std::vector<double> grid;
};

SweepConfig parseSweep(const Json& doc, const Command& cmd, int minQubits, const char* nKey) {
  config::requireKeys(doc, "", {"seed", "channels", nKey, "grid"});
  std::uint64_t seed = doc.contains("seed") ? config::requireUnsigned(doc, "seed", "") : 0;
  if (cmd.seed) seed = *cmd.seed;
  SweepConfig sweep;
  if (!doc.contains("channels") || !doc.at("channels").is_array() || doc.at("channels").empty()) {
    throw ConfigError("channels", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < doc.at("channels").size(); ++i) {
    sweep.channels.push_back(config::parseCurveChannel(
        doc.at("channels")[i], "channels[" + std::to_string(i) + "]", seed));
  }
  if (!doc.contains(nKey) || !doc.at(nKey).is_array() || doc.at(nKey).empty()) {
    throw ConfigError(nKey, "expected a non-empty array of integers");
  }
  for (std::size_t i = 0; i < doc.at(nKey).size(); ++i) {
    const auto& v = doc.at(nKey)[i];
    const auto field = std::string(nKey) + "[" + std::to_string(i) + "]";
    if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
    const int n = v.get<int>();
    if (n < minQubits || n > kDefaultMaxQubits) {
      throw ConfigError(field, "must be in [" + std::to_string(minQubits) + ", " +
                                   std::to_string(kDefaultMaxQubits) + "]");
    }
    sweep.numQubits.push_back(n);
  }
  sweep.grid = resolveGrid(doc, cmd);
  return sweep;
}

int runCurves(const Command& cmd, std::ostream& out) {
  requireOutDirectory(cmd.outPath);
  const auto sweep = parseSweep(loadJson(cmd.configPath), cmd, 2, "N");
  std::vector<CurveCsvRow> rows;
  std::ostringstream summary;
  summary << "channel N F(p=0.05) F(p=0.1) F(p=0.2)\n";
  for (const auto& channel : sweep.channels) {
    const auto name = curveChannelName(channel);
    const auto params = curveChannelParams(channel);
    std::optional<FidelityCurve> pairCurve;
    for (const int n : sweep.numQubits) {
      const auto curve = fidelityCurve(n, channel, sweep.grid);
      if (!pairCurve) {
        pairCurve = n == 2 ? curve : fidelityCurve(2, channel, sweep.grid);
      }
      for (std::size_t k = 0; k < curve.points.size(); ++k) {
        const auto& pt = curve.points[k];
        CurveCsvRow row;
        row.channel = name;
        row.familyParams = params;
        row.numQubits = n;
        row.p = pt.p;
        row.meanFidelity = pt.meanFidelity;
        row.standardError = pt.standardError;
        row.instanceProbBell = instanceProbability(
            {n, Strategy::bellStates, pairCurve->points[k].meanFidelity});
        row.instanceProbGhz = pt.meanFidelity;
        rows.push_back(row);
      }
      summary << name << ' ' << n;
      for (const double p : {0.05, 0.1, 0.2}) {
        summary << ' ' << formatDouble(curvePoint(n, channel, p).meanFidelity);
      }
      summary << '\n';
    }
  }
  std::ostringstream csv;
  writeCurvesCsv(csv, rows);
  writeFile(cmd.outPath, csv.str());
  if (!cmd.quiet) out << summary.str();
  return kExitOk;
}

int runCompare(const Command& cmd, std::ostream& out) {
  requireOutDirectory(cmd.outPath);
  const auto sweep = parseSweep(loadJson(cmd.configPath), cmd, 3, "stations");
  std::ostringstream csv;
  bool header = true;
  for (const auto& channel : sweep.channels) {
    for (const int n : sweep.numQubits) {
      const auto rows = strategyComparison(n, channel, sweep.grid);
      writeComparisonCsv(csv, curveChannelName(channel), curveChannelParams(channel), n, rows,
                         header);
      header = false;
      if (!cmd.quiet) {
        int crossovers = 0;
        for (const auto& r : rows) crossovers += r.crossover ? 1 : 0;
        out << curveChannelName(channel) << " stations=" << n << " rows=" << rows.size()
            << " crossovers=" << crossovers << '\n';
      }
    }
  }
  writeFile(cmd.outPath, csv.str());
  return kExitOk;
}

std::string traceSidecar(const std::string& outPath) {
  fs::path p(outPath);
  return (p.parent_path() / (p.stem().string() + ".trace.jsonl")).string();
}

int runProtocolVerb(const Command& cmd, std::ostream& out, bool attack) {
  requireOutDirectory(cmd.outPath);
  auto doc = loadJson(cmd.configPath);
  auto scenario = protocol::parseScenarioConfig(doc);
  if (cmd.seed) scenario.seed = *cmd.seed;
  if (attack && scenario.device.kind == protocol::DeviceKind::honest) {
    throw ConfigError("deviceBehavior.kind", "attack needs a displaced or cloner device");
  }
  const auto result = protocol::runScenario(scenario);
  writeFile(cmd.outPath, protocol::toJson(result.verdict).dump(2) + "\n");
  writeFile(traceSidecar(cmd.outPath), protocol::traceJsonLines(result.trace));
  if (!cmd.quiet) {
    out << (result.verdict.accept ? "accept" : "reject");
    for (const auto& r : result.verdict.reasons) out << ' ' << r;
    out << " error_rate=" << formatDouble(result.verdict.errorRate)
        << " max_residual_s=" << formatDouble(result.verdict.maxAbsResidual) << '\n';
  }
  return result.verdict.accept ? kExitOk : kExitReject;
}

int runSelftestVerb(const Command& cmd, std::ostream& out, const Hooks& hooks) {
  const auto started = std::chrono::steady_clock::now();
  const auto groups = runSelftest(hooks.krausProvider);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  bool ok = true;
  std::ostringstream report;
  for (const auto& g : groups) {
    ok = ok && g.passed;
    report << (g.passed ? "PASS " : "FAIL ") << g.name << " (" << g.checks << " checks)";
    if (!g.passed) report << ": " << g.detail;
    report << '\n';
  }
  if (!cmd.quiet) {
    out << report.str();
    char buf[64];
    std::snprintf(buf, sizeof buf, "selftest %.2f s\n", seconds);
    out << buf;
  }
  if (!cmd.outPath.empty()) {
    requireOutDirectory(cmd.outPath);
    writeFile(cmd.outPath, report.str());
  }
  return ok ? kExitOk : kExitSelftestFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Hooks& hooks) {
  CLI::App app{"Quantum location verification simulator", "qlv"};
  app.require_subcommand(1);
  Command cmd;

  auto addCommon = [&](CLI::App* sub, bool needsConfig) {
    auto* config = sub->add_option("--config", cmd.configPath, "JSON configuration");
    if (needsConfig) config->required();
    sub->add_option("--out", cmd.outPath, "Output file");
    sub->add_option("--seed", cmd.seed, "Seed override");
    sub->add_flag("--quiet", cmd.quiet, "Suppress the standard output summary");
  };
  auto* curves = app.add_subcommand("curves", "Cat-state fidelity curves (CSV)");
  addCommon(curves, true);
  curves->add_option("--grid", cmd.grid, "START:END:POINTS");
  auto* compare = app.add_subcommand("compare", "Bell vs GHZ strategy comparison (CSV)");
  addCommon(compare, true);
  compare->add_option("--grid", cmd.grid, "START:END:POINTS");
  auto* proto = app.add_subcommand("protocol", "Run a verification scenario");
  addCommon(proto, true);
  auto* attack = app.add_subcommand("attack", "Run an adversarial verification scenario");
  addCommon(attack, true);
  auto* selftest = app.add_subcommand("selftest", "Run the invariant suite");
  addCommon(selftest, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    if (curves->parsed()) return runCurves(cmd, out);
    if (compare->parsed()) return runCompare(cmd, out);
    if (proto->parsed()) return runProtocolVerb(cmd, out, false);
    if (attack->parsed()) return runProtocolVerb(cmd, out, true);
    return runSelftestVerb(cmd, out, hooks);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace qlv::cli
