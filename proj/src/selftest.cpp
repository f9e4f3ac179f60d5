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

#include "qlv/selftest.hpp"

#include <cmath>
#include <exception>

#include "qlv/analysis.hpp"
#include "qlv/protocol.hpp"
#include "qlv/states.hpp"

namespace qlv {

namespace {

constexpr double kTol = 1e-10;
constexpr double kPsdTol = 1e-8;

const ChannelFamily kCatalog[] = {
    ChannelFamily::depolarization, ChannelFamily::amplitudeDamping, ChannelFamily::phaseDamping,
    ChannelFamily::bitFlip,        ChannelFamily::phaseFlip,        ChannelFamily::bitPhaseFlip,
};

class GroupRunner {
 public:
  explicit GroupRunner(std::string name) { group_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++group_.checks;
    if (!ok && group_.passed) {
      group_.passed = false;
      group_.detail = what;
    }
  }

  template <class Fn>
  SelftestGroup run(Fn&& body) {
    try {
      body(*this);
    } catch (const std::exception& e) {
      group_.passed = false;
      if (group_.detail.empty()) group_.detail = e.what();
    }
    return group_;
  }

 private:
  SelftestGroup group_;
};

std::string label(ChannelFamily family, int n, double p) {
  return std::string(toString(family)) + " N=" + std::to_string(n) + " p=" + formatDouble(p);
}

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

}  // namespace

std::vector<SelftestGroup> runSelftest(const KrausProvider& provider,
                                       const SelftestOptions& options) {
  const auto grid = linearGrid(0.0, 1.0, static_cast<std::size_t>(options.gridPoints));
  std::vector<SelftestGroup> groups;

  groups.push_back(GroupRunner("completeness").run([&](GroupRunner& g) {
    for (const auto family : kCatalog) {
      for (const double p : grid) {
        const auto kraus = provider(ChannelSpec::withP(family, p));
        g.check(kraus.completenessDeviation() <= kTol, label(family, 1, p));
      }
    }
    for (const double mu : {-1.0, 0.0, 0.5, 1.0}) {
      ChannelSpec spec;
      spec.family = ChannelFamily::generalZ;
      spec.z = {1.0, 0.5, mu, 0.0};
      spec.t = 0.3;
      g.check(provider(spec).completenessDeviation() <= kTol, "generalZ mu=" + formatDouble(mu));
    }
  }));

  groups.push_back(GroupRunner("oracle-equivalence").run([&](GroupRunner& g) {
    for (const auto family : {ChannelFamily::depolarization, ChannelFamily::amplitudeDamping,
                              ChannelFamily::phaseDamping}) {
      for (int n = 1; n <= options.maxQubits; ++n) {
        const auto cat = catDensity(n);
        for (const double p : grid) {
          const auto viaKraus = applyPerQubit(cat, provider(ChannelSpec::withP(family, p)));
          const double diff = viaKraus.matrix().maxAbsDiff(closedForm(family, n, p).matrix());
          g.check(diff <= kTol, label(family, n, p));
        }
      }
    }
  }));

  groups.push_back(GroupRunner("generalZ-reductions").run([&](GroupRunner& g) {
    for (const double gamma1 : {0.5, 1.0, 2.0}) {
      for (const double t : {0.0, 0.1, 0.5, 2.0}) {
        const double p = -std::expm1(-gamma1 * t);
        for (int n = 1; n <= std::min(options.maxQubits, 4); ++n) {
          const auto ad = closedFormGeneralZ(n, {gamma1, gamma1 / 2.0, 1.0, 0.0}, t);
          g.check(ad.rho.matrix().maxAbsDiff(closedFormAmplitudeDamped(n, p).matrix()) <= kTol,
                  "amplitude damping reduction N=" + std::to_string(n));
          const auto pd = closedFormGeneralZ(n, {0.0, gamma1, 0.3, 0.0}, t);
          g.check(pd.rho.matrix().maxAbsDiff(closedFormPhaseDamped(n, p).matrix()) <= kTol,
                  "phase damping reduction N=" + std::to_string(n));
        }
        ChannelSpec z;
        z.family = ChannelFamily::generalZ;
        z.z = {gamma1, gamma1 / 2.0, 1.0, 0.0};
        z.t = t;
        const auto cat = catDensity(2);
        const auto lhs = applyPerQubit(cat, provider(z));
        const auto rhs =
            applyPerQubit(cat, provider(ChannelSpec::withP(ChannelFamily::amplitudeDamping, p)));
        g.check(lhs.matrix().maxAbsDiff(rhs.matrix()) <= kTol, "generalZ Kraus vs amplitude damping");
      }
    }
  }));

  groups.push_back(GroupRunner("trace-psd").run([&](GroupRunner& g) {
    for (const auto family : kCatalog) {
      for (int n = 1; n <= std::min(options.maxQubits, 6); ++n) {
        const auto cat = catDensity(n);
        for (const double p : grid) {
          const auto out = applyPerQubit(cat, provider(ChannelSpec::withP(family, p)));
          g.check(std::abs(trace(out.matrix()).real() - 1.0) <= kTol,
                  "trace " + label(family, n, p));
          g.check(out.minEigenvalue() >= -kPsdTol, "psd " + label(family, n, p));
        }
      }
    }
  }));

  groups.push_back(GroupRunner("pauli-frames").run([&](GroupRunner& g) {
    for (const auto& c : protocol::pauliFrameCheck()) {
      const std::string what = "m=" + std::to_string(c.swapOutcome) +
                               " a=" + std::to_string(c.aliceOutcome) +
                               " b=" + std::to_string(c.partnerOutcome);
      g.check(c.symbolic, "symbolic " + what);
      g.check(c.circuit, "circuit " + what);
    }
  }));

  groups.push_back(GroupRunner("superdense").run([&](GroupRunner& g) {
    for (std::uint8_t d = 0; d < 4; ++d) {
      g.check(decodeDibit(measureBell(encodeDibit(bellState(0), d))) == d,
              "dibit " + std::to_string(d));
    }
  }));

  return groups;
}

}  // namespace qlv
