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

// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlv/analysis.hpp"
#include "qlv/channels.hpp"
#include "qlv/cli.hpp"
#include "qlv/noise_random.hpp"
#include "qlv/protocol.hpp"
#include "qlv/states.hpp"

using namespace qlv;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Result {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void report(int id, const std::string& title, double limitSeconds,
            const std::function<Result()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Result r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.fail(std::string("exception: ") + e.what());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limitSeconds > 0.0 && seconds >= limitSeconds) {
    r.fail("runtime " + formatDouble(seconds) + " s over " + formatDouble(limitSeconds) + " s");
  }
  std::printf("criterion %d %s: %s (%.2f s)%s%s\n", id, title.c_str(), r.pass ? "PASS" : "FAIL",
              seconds, r.detail.empty() ? "" : " ", r.detail.c_str());
  std::fflush(stdout);
  if (!r.pass) ++failures;
}

const ChannelFamily kDamping[] = {ChannelFamily::depolarization, ChannelFamily::amplitudeDamping,
                                  ChannelFamily::phaseDamping};
const ChannelFamily kCatalog[] = {
    ChannelFamily::depolarization, ChannelFamily::amplitudeDamping, ChannelFamily::phaseDamping,
    ChannelFamily::bitFlip,        ChannelFamily::phaseFlip,        ChannelFamily::bitPhaseFlip,
};

DensityOperator closedForm(ChannelFamily family, int n, double p) {
  switch (family) {
    case ChannelFamily::depolarization:
      return closedFormDepolarized(n, p);
    case ChannelFamily::amplitudeDamping:
      return closedFormAmplitudeDamped(n, p);
    default:
      return closedFormPhaseDamped(n, p);
  }
}

std::string where(ChannelFamily family, int n, double p) {
  return std::string(toString(family)) + " N=" + std::to_string(n) + " p=" + formatDouble(p);
}

Result channelOracleEquivalence() {
  Result r;
  double worst = 0.0;
  for (const auto family : kDamping) {
    for (int n = 1; n <= 8; ++n) {
      const auto cat = catDensity(n);
      for (const double p : linearGrid(0.0, 1.0, 21)) {
        const auto viaKraus = applyPerQubit(cat, krausFor(ChannelSpec::withP(family, p)));
        const double diff = viaKraus.matrix().maxAbsDiff(closedForm(family, n, p).matrix());
        worst = std::max(worst, diff);
        if (diff > 1e-10) r.fail(where(family, n, p) + " diff " + formatDouble(diff));
      }
    }
  }
  if (r.pass) r.detail = "max diff " + formatDouble(worst);
  return r;
}

Result generalZReductions() {
  Result r;
  double worst = 0.0;
  const std::vector<double> rates = {0.25, 0.5, 1.0, 2.0, 4.0};
  for (const double gamma1 : rates) {
    for (const double t : linearGrid(0.0, 2.0, 21)) {
      const double p = -std::expm1(-gamma1 * t);
      for (int n = 1; n <= 4; ++n) {
        const auto ad = closedFormGeneralZ(n, {gamma1, gamma1 / 2.0, 1.0, 0.0}, t);
        const double dAd = ad.rho.matrix().maxAbsDiff(closedFormAmplitudeDamped(n, p).matrix());
        // gamma2 plays the role of the dephasing rate once gamma1 = omega = 0.
        const auto pd = closedFormGeneralZ(n, {0.0, gamma1, 0.4, 0.0}, t);
        const double dPd = pd.rho.matrix().maxAbsDiff(closedFormPhaseDamped(n, p).matrix());
        worst = std::max({worst, dAd, dPd});
        if (dAd > 1e-10) r.fail("amplitude damping gamma1=" + formatDouble(gamma1));
        if (dPd > 1e-10) r.fail("phase damping gamma2=" + formatDouble(gamma1));
      }
      ChannelSpec z;
      z.family = ChannelFamily::generalZ;
      z.z = {gamma1, gamma1 / 2.0, 1.0, 0.0};
      z.t = t;
      const double dK = applyPerQubit(catDensity(2), krausFor(z))
                            .matrix()
                            .maxAbsDiff(closedFormAmplitudeDamped(2, p).matrix());
      worst = std::max(worst, dK);
      if (dK > 1e-10) r.fail("generalZ Kraus gamma1=" + formatDouble(gamma1));
    }
  }
  if (r.pass) r.detail = "max diff " + formatDouble(worst);
  return r;
}

Result cptpChecks() {
  Result r;
  double worstTrace = 0.0;
  double lowestEigen = 0.0;
  for (const auto family : kCatalog) {
    for (const double p : linearGrid(0.0, 1.0, 21)) {
      const auto kraus = krausFor(ChannelSpec::withP(family, p));
      if (kraus.completenessDeviation() > 1e-10) r.fail("completeness " + where(family, 1, p));
      for (int n = 1; n <= 8; ++n) {
        const auto out = applyPerQubit(catDensity(n), kraus);
        const double dt = std::abs(trace(out.matrix()).real() - 1.0);
        const double ev = out.minEigenvalue();
        worstTrace = std::max(worstTrace, dt);
        lowestEigen = std::min(lowestEigen, ev);
        if (dt > 1e-10) r.fail("trace " + where(family, n, p));
        if (ev < -1e-8) r.fail("eigenvalue " + where(family, n, p));
      }
    }
  }
  if (r.pass) {
    r.detail = "trace dev " + formatDouble(worstTrace) + ", min eig " + formatDouble(lowestEigen);
  }
  return r;
}

Result scalarAnchors() {
  Result r;
  auto near = [&](const std::string& what, double got, double want, double tol) {
    if (!(std::abs(got - want) <= tol)) {
      r.fail(what + " = " + formatDouble(got) + ", want " + formatDouble(want));
    }
  };
  const auto pd = [](int n, double p) {
    return fidelity(catDensity(n),
                    applyPerQubit(catDensity(n),
                                  krausFor(ChannelSpec::withP(ChannelFamily::phaseDamping, p))));
  };
  const auto ad = [](int n, double p) {
    return fidelity(
        catDensity(n),
        applyPerQubit(catDensity(n),
                      krausFor(ChannelSpec::withP(ChannelFamily::amplitudeDamping, p))));
  };
  near("F_pd(2, 0.1)", pd(2, 0.1), 0.9050, 1e-4);
  near("F_pd(6, 0.1)", pd(6, 0.1), 0.7657, 1e-4);
  near("F_pd(6, 0.1) vs 0.75", pd(6, 0.1), 0.75, 0.05);
  near("atLeastKofM(2, 3, 0.9)", atLeastKofM(2, 3, 0.9), 0.972, 1e-12);
  const double inst = instanceProbability({3, Strategy::bellStates, 0.9});
  if (inst != 0.81) r.fail("instance probability " + formatDouble(inst));
  const double lg = cloningPassProbability(0.7, 100).log10Probability;
  if (!(lg >= -15.6 && lg <= -15.4)) r.fail("cloning log10 " + formatDouble(lg));
  near("F_ad(2, 0.07)", ad(2, 0.07), 0.9325, 1e-4);
  for (const double p : linearGrid(0.005, 0.5, 100)) {
    if (!(ad(3, p) < ad(2, p))) r.fail("F_ad(3) >= F_ad(2) at p=" + formatDouble(p));
  }
  if (r.pass) {
    r.detail = "F_pd(2,.1)=" + formatDouble(pd(2, 0.1)) + " F_pd(6,.1)=" + formatDouble(pd(6, 0.1)) +
               " log10=" + formatDouble(lg);
  }
  return r;
}

Result randomNoise() {
  Result r;
  RandomChannelSpec spec;
  spec.seed = 20240101;
  spec.trials = 10'000;
  spec.p = 0.0;
  const auto zero = meanFidelityRandomChannel(2, spec);
  if (zero.mean != 1.0) r.fail("mean at p=0 is " + formatDouble(zero.mean));

  spec.p = 0.1;
  const auto low = meanFidelityRandomChannel(2, spec);
  spec.p = 0.3;
  const auto high = meanFidelityRandomChannel(2, spec);
  const double se = std::hypot(low.standardError, high.standardError);
  if (!(low.mean - high.mean > 3.0 * se)) {
    r.fail("p=0.3 not below p=0.1 by 3 standard errors");
  }

  for (const double p : linearGrid(0.0, 0.5, 11)) {
    spec.p = p;
    const auto two = meanFidelityRandomChannel(2, spec);
    const auto six = meanFidelityRandomChannel(6, spec);
    const double bound = two.mean + 2.0 * std::hypot(two.standardError, six.standardError);
    if (!(six.mean <= bound)) r.fail("N=6 above N=2 at p=" + formatDouble(p));
  }
  if (r.pass) {
    r.detail = "mean(0.1)=" + formatDouble(low.mean) + " mean(0.3)=" + formatDouble(high.mean);
  }
  return r;
}

protocol::ScenarioConfig lineScenario() {
  protocol::ScenarioConfig cfg;
  cfg.geometry.dimension = 1;
  cfg.geometry.stations = {{"alice", {0.0, 0.0}}, {"bob", {30'000.0, 0.0}}};
  cfg.geometry.claimed = {10'000.0, 0.0};
  cfg.L = 100;
  cfg.K = 20;
  cfg.decoherenceChannel = ChannelSpec::withP(ChannelFamily::depolarization, 0.0);
  cfg.timingTolerance = 1e-6;
  return cfg;
}

Result honestCompleteness() {
  Result r;
  int accepted = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto cfg = lineScenario();
    cfg.seed = seed;
    const auto v = protocol::runScenario(cfg, false).verdict;
    worst = std::max(worst, v.maxAbsResidual);
    if (v.accept && v.maxAbsResidual < 1e-12) {
      ++accepted;
    } else {
      r.fail("seed " + std::to_string(seed));
    }
  }
  r.detail = std::to_string(accepted) + "/1000 accepted, max residual " + formatDouble(worst) +
             (r.pass ? "" : ", first failure " + r.detail);
  return r;
}

Result soundness() {
  Result r;
  const double expected = 2.0 * 1000.0 / protocol::kSpeedOfLight;
  int displacedRejected = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto cfg = lineScenario();
    cfg.seed = seed;
    cfg.device.kind = protocol::DeviceKind::displaced;
    cfg.device.actualPosition = {11'000.0, 0.0};
    const auto v = protocol::runScenario(cfg, false).verdict;
    if (!v.accept) ++displacedRejected;
    if (v.accept || std::abs(v.maxAbsResidual - expected) > 1e-12) {
      r.fail("displaced seed " + std::to_string(seed));
    }
  }
  int clonerRejected = 0;
  const int clonerRuns = 10'000;
  for (std::uint64_t seed = 0; seed < static_cast<std::uint64_t>(clonerRuns); ++seed) {
    auto cfg = lineScenario();
    cfg.L = 102;
    cfg.K = 100;
    cfg.seed = seed;
    cfg.device.kind = protocol::DeviceKind::cloner;
    cfg.device.cloneFidelity = 0.7;
    const auto v = protocol::runScenario(cfg, false).verdict;
    const bool onErrorRate =
        std::find(v.reasons.begin(), v.reasons.end(), "error-rate") != v.reasons.end();
    if (onErrorRate) ++clonerRejected;
  }
  const double clonerRate = static_cast<double>(clonerRejected) / clonerRuns;
  r.pass = r.pass && clonerRate >= 0.999;
  r.detail = "displaced " + std::to_string(displacedRejected) + "/1000 rejected, cloner " +
             std::to_string(clonerRejected) + "/" + std::to_string(clonerRuns) +
             " rejected on error rate (need >= 99.9%)";
  return r;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result determinism() {
  Result r;
  const auto dir = fs::temp_directory_path() / "qlv_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const Json& doc) {
    std::ofstream(dir / name) << doc.dump(2);
    return (dir / name).string();
  };
  const auto curves = write("curves.json", Json::parse(R"({
    "seed": 20240101,
    "channels": [{"family": "randomNoise", "trials": 200}, {"family": "amplitudeDamping"},
                 {"family": "combinedDampingRandom", "eps1": 0.2, "eps3": 0.1, "eps4": 0.1,
                  "u3": "haar", "u4": "haar", "trials": 50}],
    "N": [2, 3],
    "grid": {"start": 0, "end": 0.5, "points": 6}
  })"));
  const auto compare = write("compare.json", Json::parse(R"({
    "seed": 3,
    "channels": [{"family": "phaseDamping"}, {"family": "randomNoise", "trials": 100}],
    "stations": [3, 4],
    "grid": {"start": 0, "end": 0.5, "points": 6}
  })"));
  auto scenario = Json::parse(R"({
    "geometry": {"dimension": 2,
                 "stations": [{"id": "alice", "position": [0, 0]},
                              {"id": "bob", "position": [30000, 0]},
                              {"id": "dave", "position": [15000, 25000]}],
                 "claimed": [14000, 8000]},
    "L": 100, "K": 20,
    "decoherenceChannel": {"family": "phaseDamping"},
    "storageRates": {"alice": 50, "bob": 50, "dave": 50, "cliff": 50},
    "deviceBehavior": {"kind": "honest"},
    "seed": 99
  })");
  const auto honest = write("honest.json", scenario);
  scenario["deviceBehavior"] = {{"kind", "cloner"}, {"cloneFidelity", 0.7}};
  const auto cloner = write("cloner.json", scenario);

  const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> commands = {
      {{"curves", "--config", curves, "--quiet"}, {".csv"}},
      {{"compare", "--config", compare, "--quiet"}, {".csv"}},
      {{"protocol", "--config", honest, "--quiet"}, {".json", ".trace.jsonl"}},
      {{"attack", "--config", cloner, "--quiet"}, {".json", ".trace.jsonl"}},
  };
  int files = 0;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    const auto& [args, suffixes] = commands[k];
    std::vector<std::string> outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto stem = "out" + std::to_string(k) + "_" + std::to_string(rep);
      const auto ext = suffixes.front();
      std::vector<std::string> argv = {"qlv"};
      argv.insert(argv.end(), args.begin(), args.end());
      argv.push_back("--out");
      argv.push_back((dir / (stem + ext)).string());
      std::ostringstream out, err;
      const int code = cli::run(argv, out, err);
      if (code != cli::kExitOk && code != cli::kExitReject) {
        r.fail(args.front() + " exited " + std::to_string(code) + ": " + err.str());
      }
      for (const auto& suffix : suffixes) outputs[rep].push_back(slurp(dir / (stem + suffix)));
    }
    for (std::size_t f = 0; f < outputs[0].size(); ++f) {
      ++files;
      if (outputs[0][f].empty() || outputs[0][f] != outputs[1][f]) {
        r.fail(args.front() + " output " + suffixes[f] + " differs");
      }
    }
  }
  fs::remove_all(dir);
  if (r.pass) r.detail = std::to_string(files) + " output files identical";
  return r;
}

Result pauliFrames() {
  Result r;
  const auto cases = protocol::pauliFrameCheck();
  if (cases.size() != 64) r.fail("expected 64 cases");
  int good = 0;
  for (const auto& c : cases) {
    if (c.symbolic && c.circuit) {
      ++good;
    } else {
      r.fail("m=" + std::to_string(c.swapOutcome) + " a=" + std::to_string(c.aliceOutcome) +
             " b=" + std::to_string(c.partnerOutcome));
    }
  }
  if (r.pass) r.detail = std::to_string(good) + "/64 compositions decode to the identity";
  return r;
}

}  // namespace

int main() {
  report(1, "channel-oracle equivalence", 30.0, channelOracleEquivalence);
  report(2, "generalZ reductions", 0.0, generalZReductions);
  report(3, "CPTP checks", 0.0, cptpChecks);
  report(4, "scalar fidelity anchors", 0.0, scalarAnchors);
  report(5, "random-noise channels", 120.0, randomNoise);
  report(6, "honest completeness", 60.0, honestCompleteness);
  report(7, "protocol soundness", 0.0, soundness);
  report(8, "determinism", 0.0, determinism);
  report(9, "Pauli-frame check", 0.0, pauliFrames);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
