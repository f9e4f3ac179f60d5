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

#include "qlv/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlv/analysis.hpp"
#include "qlv/config.hpp"
#include "qlv/errors.hpp"
#include "qlv/states.hpp"

namespace qlv::protocol {

namespace {

// Frame rules. Pauli labels compose by XOR up to a global phase.
std::uint8_t swapFrame(std::uint8_t outcome) { return outcome & 0b11; }

std::uint8_t teleportedIndex(std::uint8_t dibit, std::uint8_t aliceOutcome, std::uint8_t gammaFrame,
                             std::uint8_t partnerOutcome) {
  return (dibit ^ aliceOutcome ^ gammaFrame ^ partnerOutcome) & 0b11;
}

std::uint8_t partnerCorrection(std::uint8_t partnerOutcome, std::uint8_t gammaFrame) {
  return (partnerOutcome ^ gammaFrame) & 0b11;
}

std::uint8_t deviceDecode(std::uint8_t physical, std::uint8_t corrections) {
  return (physical ^ corrections) & 0b11;
}

bool queueLater(const QueuedEvent& a, const QueuedEvent& b) {
  if (a.time != b.time) return a.time > b.time;
  return a.seq > b.seq;
}

void requireStage(const ProtocolWorld& world, Stage expected, const char* step) {
  if (world.stage != expected) {
    throw ProtocolOrderError(std::string(step) + " called out of order");
  }
}

Json positionJson(const Vec2& v) { return Json::array({v.x, v.y}); }

Json pairJson(const Pair& pair) {
  return {{"label", pair.label},
          {"a", {pair.a.station, pair.a.slot}},
          {"b", {pair.b.station, pair.b.slot}},
          {"frame", pair.pauliFrame},
          {"state", pair.state},
          {"birth_s", pair.birthTime},
          {"consumed", pair.consumed}};
}

Json registryJson(const PairRegistry& registry) {
  Json pairs = Json::array();
  for (const auto& p : registry.pairs) pairs.push_back(pairJson(p));
  return {{"set", registry.setName}, {"pairs", pairs}};
}

Json payloadJson(const Payload& payload) {
  return std::visit(
      [](const auto& p) -> Json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SwapReport>) {
          Json entries = Json::array();
          for (const auto& e : p.entries) {
            entries.push_back({{"j", e.j}, {"i", e.i}, {"outcome", e.outcome}});
          }
          return {{"type", "swap-report"}, {"entries", entries}};
        } else if constexpr (std::is_same_v<T, ChallengeShare>) {
          Json segments = Json::array();
          for (const auto& s : p.segments) {
            segments.push_back({{"dibit_index", s.dibitIndex},
                                {"lambda_prime", s.lambdaPrimeLabel},
                                {"dibit", s.dibit},
                                {"encoder", s.encoder}});
          }
          return {{"type", "challenge-share"}, {"bits", p.bits}, {"segments", segments}};
        } else if constexpr (std::is_same_v<T, TeleportNotice>) {
          return {{"type", "teleport-notice"},
                  {"instance", p.instance},
                  {"dibit_index", p.dibitIndex},
                  {"label", p.deviceLabel},
                  {"correction", p.correction}};
        } else {
          return {{"type", "decode-reply"},
                  {"instance", p.instance},
                  {"dibit_index", p.dibitIndex},
                  {"dibit", p.dibit}};
        }
      },
      payload);
}

Json messageJson(const Message& m) {
  return {{"id", m.id},
          {"sender", m.sender},
          {"receiver", m.receiver},
          {"channel", m.channel == ChannelKind::open ? "open" : "secured"},
          {"emit_s", m.emitTime},
          {"arrive_s", m.arriveTime},
          {"payload", payloadJson(m.payload)}};
}

void record(ProtocolWorld& world, double time, std::string kind, std::string actor, Json payload) {
  const auto seq = world.nextSeq++;
  if (!world.recordTrace) return;
  world.trace.push_back({seq, time, std::move(kind), std::move(actor), std::move(payload)});
}

Vec2 positionOf(const ProtocolWorld& world, const std::string& id) {
  if (id == kDeviceId) return world.config.devicePosition();
  return world.config.geometry.station(id).position;
}

void schedule(ProtocolWorld& world, double time, QueueKind kind, std::size_t message) {
  world.queue.push_back({time, world.nextSeq++, kind, message});
  std::push_heap(world.queue.begin(), world.queue.end(), queueLater);
}

std::size_t post(ProtocolWorld& world, std::string sender, std::string receiver,
                 ChannelKind channel, Payload payload, double emitTime) {
  Message m;
  m.id = world.messages.size();
  m.sender = std::move(sender);
  m.receiver = std::move(receiver);
  m.channel = channel;
  m.payload = std::move(payload);
  m.emitTime = emitTime;
  world.messages.push_back(std::move(m));
  schedule(world, emitTime, QueueKind::emit, world.messages.size() - 1);
  return world.messages.size() - 1;
}

double storageExponent(const ProtocolWorld& world, const DibitRecord& d, double decodeTime) {
  const auto& cfg = world.config;
  return cfg.storageRate(cfg.geometry.stations[0].id) * d.aliceEmit +
         cfg.storageRate(d.partner) * d.partnerEmit + 2.0 * cfg.storageRate(kDeviceId) * decodeTime;
}

void handleNotice(ProtocolWorld& world, const Message& m, double now, RngStream* rng) {
  const auto& notice = std::get<TeleportNotice>(m.payload);
  if (notice.dibitIndex < 0 || static_cast<std::size_t>(notice.dibitIndex) >= world.dibits.size()) {
    throw ProtocolCorruptionError("notice for an unknown challenge pair");
  }
  if (notice.deviceLabel < 0 ||
      static_cast<std::size_t>(notice.deviceLabel) >= world.deviceMeasured.size()) {
    throw ProtocolCorruptionError("notice references unknown qubit label " +
                                  std::to_string(notice.deviceLabel));
  }
  if (world.deviceMeasured[notice.deviceLabel]) {
    throw ProtocolCorruptionError("notice references consumed qubit label " +
                                  std::to_string(notice.deviceLabel));
  }
  auto& d = world.dibits[notice.dibitIndex];
  const bool fromAlice = m.sender == world.config.geometry.stations[0].id;
  const int expectedLabel = fromAlice ? d.aliceOmegaLabel : d.partnerDeviceLabel;
  if (notice.deviceLabel != expectedLabel) {
    throw ProtocolCorruptionError("notice label does not match the challenge pair");
  }
  d.noticesArrived += 1;
  d.noticeCorrection ^= notice.correction;
  if (d.noticesArrived < 2) return;
  if (rng == nullptr) throw ProtocolOrderError("device decode outside the decode step");

  world.deviceMeasured[d.aliceOmegaLabel] = true;
  world.deviceMeasured[d.partnerDeviceLabel] = true;
  const auto& cfg = world.config;
  double success = storageFidelity(cfg.decoherenceChannel, storageExponent(world, d, now));
  if (cfg.device.kind == DeviceKind::cloner) success = std::min(success, cfg.device.cloneFidelity);
  const auto ideal = deviceDecode(d.physicalIndex, d.noticeCorrection);
  d.successProbability = success;
  d.decodeTime = now;
  d.decoded = sampleDecode(ideal, success, *rng);
  record(world, now, "decode", kDeviceId,
         {{"dibit_index", d.index}, {"dibit", *d.decoded}, {"success_probability", success}});
  for (const auto& to : {cfg.geometry.stations[0].id, d.partner}) {
    post(world, kDeviceId, to, ChannelKind::open, DecodeReply{d.instance, d.index, *d.decoded},
         now);
  }
}

void handleReply(ProtocolWorld& world, const Message& m, double now) {
  const auto& reply = std::get<DecodeReply>(m.payload);
  auto& d = world.dibits.at(reply.dibitIndex);
  if (m.receiver == world.config.geometry.stations[0].id) {
    d.aliceReplyArrival = now;
  } else {
    d.partnerReplyArrival = now;
  }
}

void drain(ProtocolWorld& world, RngStream* rng) {
  while (!world.queue.empty()) {
    std::pop_heap(world.queue.begin(), world.queue.end(), queueLater);
    const QueuedEvent ev = world.queue.back();
    world.queue.pop_back();
    world.clock = ev.time;
    auto& m = world.messages[ev.message];
    if (ev.kind == QueueKind::emit) {
      m.arriveTime =
          m.emitTime + world.config.geometry.delay(positionOf(world, m.sender),
                                                   positionOf(world, m.receiver));
      record(world, ev.time, "send", m.sender, messageJson(m));
      schedule(world, m.arriveTime, QueueKind::deliver, ev.message);
      continue;
    }
    m.delivered = true;
    record(world, ev.time, "deliver", m.receiver, {{"message", m.id}});
    // Handlers may post new messages, which can reallocate the message list.
    const Message delivered = m;
    if (std::holds_alternative<TeleportNotice>(delivered.payload)) {
      handleNotice(world, delivered, ev.time, rng);
    } else if (std::holds_alternative<DecodeReply>(delivered.payload)) {
      handleReply(world, delivered, ev.time);
    }
  }
}

Vec2 parsePosition(const Json& v, const std::string& path, int dimension) {
  if (!v.is_array() || v.empty() || v.size() > 2) {
    throw ConfigError(path, "expected [x] or [x, y] in meters");
  }
  for (const auto& c : v) {
    if (!c.is_number()) throw ConfigError(path, "coordinates must be numbers");
  }
  Vec2 out{v[0].get<double>(), v.size() == 2 ? v[1].get<double>() : 0.0};
  if (dimension == 1 && out.y != 0.0) throw ConfigError(path, "1D positions have y = 0");
  return out;
}

void requireFinite(double value, const std::string& field) {
  if (!std::isfinite(value)) throw ConfigError(field, "must be finite");
}

}  // namespace

double distance(const Vec2& a, const Vec2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

const Station& Geometry::station(const std::string& id) const {
  for (const auto& s : stations) {
    if (s.id == id) return s;
  }
  throw DomainError("unknown station '" + id + "'");
}

void Geometry::validate() const {
  if (dimension != 1 && dimension != 2) throw ConfigError("geometry.dimension", "must be 1 or 2");
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("geometry.c", "must be positive");
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const auto& s = stations[i];
    const auto field = "geometry.stations[" + std::to_string(i) + "]";
    if (s.id.empty() || s.id == kDeviceId) throw ConfigError(field + ".id", "invalid station id");
    for (std::size_t k = 0; k < i; ++k) {
      if (stations[k].id == s.id) throw ConfigError(field + ".id", "duplicate station id");
    }
    requireFinite(s.position.x, field + ".position");
    requireFinite(s.position.y, field + ".position");
  }
  requireFinite(claimed.x, "geometry.claimed");
  requireFinite(claimed.y, "geometry.claimed");
  if (dimension == 1) {
    if (stations.size() != 2) throw ConfigError("geometry.stations", "1D needs exactly 2 stations");
    const double tab = delay(stations[0].position, stations[1].position);
    const double tac = delay(stations[0].position, claimed);
    const double tbc = delay(stations[1].position, claimed);
    if (!(tab > 0.0)) throw ConfigError("geometry.stations", "stations coincide");
    if (std::abs(tac + tbc - tab) > 1e-12 * tab) {
      throw ConfigError("geometry.claimed", "claimed position must lie between the stations");
    }
  } else if (stations.size() < 3) {
    throw ConfigError("geometry.stations", "2D needs at least 3 stations");
  }
}

std::string_view toString(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::honest:
      return "honest";
    case DeviceKind::displaced:
      return "displaced";
    case DeviceKind::cloner:
      return "cloner";
  }
  return "honest";
}

void ScenarioConfig::validate() const {
  geometry.validate();
  const auto partners = static_cast<int>(geometry.numPartners());
  if (L < 2 || L % 2 != 0) throw ConfigError("L", "must be a positive even count");
  if (K < 2 || K % 2 != 0) throw ConfigError("K", "must be a positive even count");
  if (K >= L) throw ConfigError("K", "must be less than L");
  if ((K / 2) % partners != 0) {
    throw ConfigError("K", "K/2 must be a multiple of the number of partner stations");
  }
  if (!(timingTolerance > 0.0) || !std::isfinite(timingTolerance)) {
    throw ConfigError("timingTolerance", "must be positive");
  }
  if (errorRateThreshold && !(*errorRateThreshold >= 0.0 && *errorRateThreshold <= 1.0)) {
    throw ConfigError("errorRateThreshold", "must be in [0, 1]");
  }
  const auto family = decoherenceChannel.family;
  if (family != ChannelFamily::depolarization && family != ChannelFamily::amplitudeDamping &&
      family != ChannelFamily::phaseDamping) {
    throw ConfigError("decoherenceChannel.family",
                      "storage decoherence must be depolarization, amplitudeDamping or "
                      "phaseDamping");
  }
  for (const auto& [id, rate] : storageRates) {
    const bool known = id == kDeviceId || std::any_of(geometry.stations.begin(),
                                                      geometry.stations.end(),
                                                      [&](const Station& s) { return s.id == id; });
    if (!known) throw ConfigError("storageRates." + id, "unknown station");
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
      throw ConfigError("storageRates." + id, "must be a finite non-negative rate");
    }
  }
  if (device.kind == DeviceKind::cloner &&
      !(device.cloneFidelity >= 0.0 && device.cloneFidelity <= 1.0)) {
    throw ConfigError("deviceBehavior.cloneFidelity", "must be in [0, 1]");
  }
  if (device.kind == DeviceKind::displaced) {
    requireFinite(device.actualPosition.x, "deviceBehavior.actualPosition");
    requireFinite(device.actualPosition.y, "deviceBehavior.actualPosition");
  }
}

double ScenarioConfig::storageRate(const std::string& id) const {
  const auto it = storageRates.find(id);
  return it == storageRates.end() ? 0.0 : it->second;
}

Vec2 ScenarioConfig::devicePosition() const {
  return device.kind == DeviceKind::displaced ? device.actualPosition : geometry.claimed;
}

std::size_t PairRegistry::unconsumed() const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const Pair& p) { return !p.consumed; }));
}

std::vector<int> PairRegistry::unconsumedLabels() const {
  std::vector<int> out;
  for (const auto& p : pairs) {
    if (!p.consumed) out.push_back(p.label);
  }
  return out;
}

Pair& PairRegistry::at(int label) {
  return const_cast<Pair&>(static_cast<const PairRegistry&>(*this).at(label));
}

const Pair& PairRegistry::at(int label) const {
  if (label < 0 || static_cast<std::size_t>(label) >= pairs.size()) {
    throw ProtocolCorruptionError(setName + ": unknown pair label " + std::to_string(label));
  }
  return pairs[label];
}

PartnerState& ProtocolWorld::partner(const std::string& id) {
  for (auto& p : partners) {
    if (p.partner == id) return p;
  }
  throw DomainError("unknown partner '" + id + "'");
}

ProtocolWorld setupWorld(const ScenarioConfig& config) {
  config.validate();
  ProtocolWorld world;
  world.config = config;
  const auto& stations = config.geometry.stations;
  const std::string& alice = stations[0].id;
  const int numPartners = static_cast<int>(config.geometry.numPartners());

  world.omega.setName = "Omega_AC";
  const int omegaSize = config.L * numPartners;
  for (int i = 0; i < omegaSize; ++i) {
    world.omega.pairs.push_back({i, {alice, i}, {kDeviceId, i}, 0, 0, 0.0, false});
  }
  world.deviceMeasured.assign(omegaSize, false);
  int aliceSlot = omegaSize;
  for (int k = 0; k < numPartners; ++k) {
    PartnerState ps;
    ps.partner = stations[k + 1].id;
    ps.lambda.setName = "Lambda_AB";
    ps.gamma.setName = "Gamma_BC";
    ps.lambdaPrime.setName = "LambdaPrime_AB";
    int partnerSlot = 0;
    for (int j = 0; j < config.L / 2; ++j) {
      ps.lambda.pairs.push_back({j, {alice, aliceSlot++}, {ps.partner, partnerSlot++}, 0, 0, 0.0,
                                 false});
    }
    for (int j = 0; j < config.L / 2; ++j) {
      ps.lambdaPrime.pairs.push_back({j, {alice, aliceSlot++}, {ps.partner, partnerSlot++}, 0, 0,
                                      0.0, false});
    }
    world.partners.push_back(std::move(ps));
  }
  record(world, 0.0, "setup", alice,
         {{"omega", omegaSize}, {"lambda_per_partner", config.L / 2}, {"partners", numPartners}});
  return world;
}

void entanglementSwap(ProtocolWorld& world, RngStream& rng) {
  requireStage(world, Stage::created, "entanglementSwap");
  const std::string& alice = world.config.geometry.stations[0].id;
  for (auto& ps : world.partners) {
    for (auto& lambda : ps.lambda.pairs) {
      const auto free = world.omega.unconsumedLabels();
      if (free.empty()) throw ResourceError("no unconsumed Omega pair left for the swap");
      auto& omega = world.omega.at(free[rng.below(free.size())]);
      const auto outcome = static_cast<std::uint8_t>(rng.below(4));
      omega.consumed = true;
      lambda.consumed = true;
      Pair gamma;
      gamma.label = lambda.label;
      gamma.a = lambda.b;
      gamma.b = omega.b;
      gamma.pauliFrame = lambda.pauliFrame ^ omega.pauliFrame ^ swapFrame(outcome);
      gamma.state = 0;
      gamma.birthTime = 0.0;
      ps.gamma.pairs.push_back(gamma);
      ps.jToI[lambda.label] = omega.label;
      ps.swapOutcome[lambda.label] = outcome;
      record(world, 0.0, "swap", alice,
             {{"partner", ps.partner}, {"j", lambda.label}, {"outcome", outcome}});
    }
  }
  world.stage = Stage::swapped;
}

void informPartner(ProtocolWorld& world) {
  requireStage(world, Stage::swapped, "informPartner");
  const std::string& alice = world.config.geometry.stations[0].id;
  for (const auto& ps : world.partners) {
    SwapReport report;
    for (const auto& [j, i] : ps.jToI) report.entries.push_back({j, i, ps.swapOutcome.at(j)});
    post(world, alice, ps.partner, ChannelKind::secured, std::move(report), 0.0);
  }
  drain(world, nullptr);
  world.stage = Stage::informed;
}

void generateChallenge(ProtocolWorld& world, RngStream& rng) {
  requireStage(world, Stage::informed, "generateChallenge");
  const auto& cfg = world.config;
  const std::string& alice = cfg.geometry.stations[0].id;
  const int numDibits = cfg.K / 2;
  const int numPartners = static_cast<int>(world.partners.size());
  std::size_t available = 0;
  for (const auto& ps : world.partners) available += ps.lambdaPrime.unconsumed();
  for (int p = 0; p < numPartners; ++p) {
    if (world.partners[p].lambdaPrime.unconsumed() <
        static_cast<std::size_t>(numDibits / numPartners)) {
      available = 0;
    }
  }
  if (available < static_cast<std::size_t>(numDibits)) {
    throw ResourceError("not enough unconsumed LambdaPrime pairs for the challenge");
  }

  world.challengeBits.resize(cfg.K);
  for (auto& bit : world.challengeBits) bit = rng.bit() ? 1 : 0;

  std::vector<ChallengeShare> shares(numPartners);
  for (auto& share : shares) share.bits = world.challengeBits;
  for (int k = 0; k < numDibits; ++k) {
    const int p = k % numPartners;
    auto& ps = world.partners[p];
    const auto dibit =
        static_cast<std::uint8_t>((world.challengeBits[2 * k] << 1) | world.challengeBits[2 * k + 1]);
    auto& pair = ps.lambdaPrime.at(ps.lambdaPrime.unconsumedLabels().front());
    const std::string encoder = rng.bit() ? ps.partner : alice;
    const auto encoded = encodeDibit(bellState(pair.physicalIndex()), dibit);
    pair.state = static_cast<std::uint8_t>(measureBell(encoded)) ^ pair.pauliFrame;
    pair.consumed = true;

    DibitRecord d;
    d.index = k;
    d.instance = k / numPartners;
    d.partner = ps.partner;
    d.sent = dibit;
    d.lambdaPrimeLabel = pair.label;
    d.encoder = encoder;
    world.dibits.push_back(d);
    shares[p].segments.push_back({k, pair.label, dibit, encoder});
  }
  for (int p = 0; p < numPartners; ++p) {
    post(world, alice, world.partners[p].partner, ChannelKind::secured, std::move(shares[p]),
         world.clock);
  }
  drain(world, nullptr);
  // Encoders act once every share has arrived.
  for (const auto& d : world.dibits) {
    record(world, world.clock, "encode", d.encoder,
           {{"dibit_index", d.index}, {"lambda_prime", d.lambdaPrimeLabel}});
  }
  world.stage = Stage::challenged;
}

void teleportChallenge(ProtocolWorld& world, RngStream& rng) {
  requireStage(world, Stage::challenged, "teleportChallenge");
  const auto& cfg = world.config;
  const auto& geo = cfg.geometry;
  const Station& alice = geo.stations[0];

  double farthest = 0.0;
  for (const auto& s : geo.stations) {
    farthest = std::max(farthest, geo.delay(s.position, geo.claimed));
  }
  const double start = world.clock + farthest;
  const double spacing = 2.0 * farthest;

  for (auto& d : world.dibits) {
    auto& ps = world.partner(d.partner);
    const auto freeOmega = world.omega.unconsumedLabels();
    const auto freeGamma = ps.gamma.unconsumedLabels();
    if (freeOmega.empty() || freeGamma.empty()) {
      throw ResourceError("not enough unconsumed pairs to teleport the challenge");
    }
    auto& omega = world.omega.at(freeOmega[rng.below(freeOmega.size())]);
    auto& gamma = ps.gamma.at(freeGamma[rng.below(freeGamma.size())]);
    const auto& lambdaPrime = ps.lambdaPrime.at(d.lambdaPrimeLabel);
    d.aliceOutcome = static_cast<std::uint8_t>(rng.below(4));
    d.partnerOutcome = static_cast<std::uint8_t>(rng.below(4));
    omega.consumed = true;
    gamma.consumed = true;
    d.aliceOmegaLabel = omega.label;
    d.gammaLabel = gamma.label;
    d.partnerDeviceLabel = ps.jToI.at(gamma.label);
    d.physicalIndex = teleportedIndex(lambdaPrime.physicalIndex(), d.aliceOutcome,
                                      gamma.pauliFrame, d.partnerOutcome);

    const Station& partner = geo.station(d.partner);
    d.targetArrival = start + d.instance * spacing;
    d.aliceEmit = d.targetArrival - geo.delay(alice.position, geo.claimed);
    d.partnerEmit = d.targetArrival - geo.delay(partner.position, geo.claimed);
    d.nominalFidelity =
        storageFidelity(cfg.decoherenceChannel, storageExponent(world, d, d.targetArrival));

    post(world, alice.id, kDeviceId, ChannelKind::open,
         TeleportNotice{d.instance, d.index, d.aliceOmegaLabel, d.aliceOutcome}, d.aliceEmit);
    post(world, partner.id, kDeviceId, ChannelKind::open,
         TeleportNotice{d.instance, d.index, d.partnerDeviceLabel,
                        partnerCorrection(d.partnerOutcome, gamma.pauliFrame)},
         d.partnerEmit);
  }
  world.stage = Stage::teleported;
}

void decodeAtDevice(ProtocolWorld& world, RngStream& rng) {
  requireStage(world, Stage::teleported, "decodeAtDevice");
  drain(world, &rng);
  world.stage = Stage::decoded;
}

Verdict verify(ProtocolWorld& world) {
  requireStage(world, Stage::decoded, "verify");
  const auto& cfg = world.config;
  const auto& geo = cfg.geometry;
  Verdict v;
  for (const auto& s : geo.stations) {
    v.stations.push_back({s.id, 2.0 * geo.delay(s.position, geo.claimed), {}, {}, 0.0});
  }
  auto timingFor = [&](const std::string& id) -> StationTiming& {
    for (auto& t : v.stations) {
      if (t.station == id) return t;
    }
    throw DomainError("unknown station '" + id + "'");
  };

  bool timedOut = false;
  double honestError = 0.0;
  for (const auto& d : world.dibits) {
    v.sentDibits.push_back(d.sent);
    honestError += 1.0 - d.nominalFidelity;
    if (!d.decoded || !d.aliceReplyArrival || !d.partnerReplyArrival) {
      timedOut = true;
      v.decodedDibits.push_back(0);
      continue;
    }
    v.decodedDibits.push_back(*d.decoded);
    if (*d.decoded == d.sent) ++v.dibitsCorrect;
    const std::pair<const std::string*, double> legs[] = {
        {&geo.stations[0].id, *d.aliceReplyArrival - d.aliceEmit},
        {&d.partner, *d.partnerReplyArrival - d.partnerEmit}};
    for (const auto& [id, rtt] : legs) {
      auto& t = timingFor(*id);
      t.roundTrips.push_back(rtt);
      t.residuals.push_back(rtt - t.expectedRoundTrip);
      t.maxAbsResidual = std::max(t.maxAbsResidual, std::abs(rtt - t.expectedRoundTrip));
      v.maxAbsResidual = std::max(v.maxAbsResidual, t.maxAbsResidual);
    }
  }
  v.dibitsSent = static_cast<int>(world.dibits.size());
  v.errorRate = v.dibitsSent == 0
                    ? 0.0
                    : static_cast<double>(v.dibitsSent - v.dibitsCorrect) / v.dibitsSent;
  const double meanHonestError = v.dibitsSent == 0 ? 0.0 : honestError / v.dibitsSent;
  v.errorRateThreshold = cfg.errorRateThreshold.value_or(defaultErrorRateThreshold(meanHonestError));

  if (timedOut) v.reasons.emplace_back("timeout");
  if (v.maxAbsResidual > cfg.timingTolerance) v.reasons.emplace_back("timing");
  if (v.errorRate > v.errorRateThreshold) v.reasons.emplace_back("error-rate");
  v.accept = v.reasons.empty();
  world.stage = Stage::verified;
  record(world, world.clock, "verdict", geo.stations[0].id,
         {{"accept", v.accept}, {"reasons", v.reasons}});
  return v;
}

ScenarioResult runScenario(const ScenarioConfig& config, bool recordTrace) {
  auto world = setupWorld(config);
  world.recordTrace = recordTrace;
  if (!recordTrace) world.trace.clear();
  RngStream swapRng(config.seed, 0);
  RngStream challengeRng(config.seed, 1);
  RngStream teleportRng(config.seed, 2);
  RngStream decodeRng(config.seed, 3);
  entanglementSwap(world, swapRng);
  informPartner(world);
  generateChallenge(world, challengeRng);
  teleportChallenge(world, teleportRng);
  decodeAtDevice(world, decodeRng);
  auto verdict = verify(world);
  return {std::move(verdict), std::move(world.trace)};
}

std::uint8_t sampleDecode(std::uint8_t correct, double successProbability, RngStream& rng) {
  if (rng.uniform() < successProbability) return correct & 0b11;
  return static_cast<std::uint8_t>((correct ^ (1 + rng.below(3))) & 0b11);
}

double storageFidelity(const ChannelSpec& channel, double exponent) {
  if (exponent <= 0.0) return 1.0;
  const double p = -std::expm1(-exponent);
  const auto reference = toDensity(bellState(0));
  const auto out = applyOnQubit(reference, krausFor(ChannelSpec::withP(channel.family, p)), 1);
  return fidelity(reference, out);
}

double defaultErrorRateThreshold(double honestExpectedError) {
  return 0.5 * (honestExpectedError + (1.0 - qlv::kBipartiteCloningBound));
}

Json eavesdropperView(const ProtocolWorld& world) {
  Json out = Json::array();
  for (const auto& m : world.messages) {
    if (m.channel == ChannelKind::open) out.push_back(messageJson(m));
  }
  return out;
}

Json deviceView(const ProtocolWorld& world) {
  Json labels = Json::array();
  for (const auto& p : world.omega.pairs) labels.push_back(p.b.slot);
  Json received = Json::array();
  for (const auto& m : world.messages) {
    if (m.receiver == kDeviceId && m.delivered) received.push_back(messageJson(m));
  }
  return {{"qubits", labels}, {"received", received}};
}

Json partnerView(const ProtocolWorld& world, const std::string& partnerId) {
  Json received = Json::array();
  for (const auto& m : world.messages) {
    if (m.receiver == partnerId && m.delivered) received.push_back(messageJson(m));
  }
  Json out = {{"partner", partnerId}, {"received", received}};
  for (const auto& ps : world.partners) {
    if (ps.partner != partnerId) continue;
    Json mine = Json::array();
    for (const auto* reg : {&ps.lambda, &ps.gamma, &ps.lambdaPrime}) {
      for (const auto& p : reg->pairs) {
        mine.push_back({{"set", reg->setName}, {"label", p.label}, {"slot", p.b.slot}});
      }
    }
    out["pairs"] = mine;
  }
  return out;
}

Json toJson(const ProtocolWorld& world) {
  Json partners = Json::array();
  for (const auto& ps : world.partners) {
    Json mapping = Json::array();
    for (const auto& [j, i] : ps.jToI) mapping.push_back({j, i, ps.swapOutcome.at(j)});
    partners.push_back({{"partner", ps.partner},
                        {"lambda", registryJson(ps.lambda)},
                        {"gamma", registryJson(ps.gamma)},
                        {"lambda_prime", registryJson(ps.lambdaPrime)},
                        {"mapping", mapping}});
  }
  Json dibits = Json::array();
  for (const auto& d : world.dibits) {
    dibits.push_back({{"index", d.index},
                      {"partner", d.partner},
                      {"sent", d.sent},
                      {"physical", d.physicalIndex},
                      {"decoded", d.decoded ? Json(*d.decoded) : Json()},
                      {"decode_s", d.decodeTime ? Json(*d.decodeTime) : Json()}});
  }
  Json messages = Json::array();
  for (const auto& m : world.messages) messages.push_back(messageJson(m));
  return {{"stage", static_cast<int>(world.stage)},
          {"clock_s", world.clock},
          {"config", toJson(world.config)},
          {"omega", registryJson(world.omega)},
          {"partners", partners},
          {"challenge", world.challengeBits},
          {"dibits", dibits},
          {"messages", messages}};
}

std::uint64_t worldDigest(const ProtocolWorld& world) {
  const auto text = toJson(world).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Json toJson(const Verdict& verdict) {
  Json stations = Json::array();
  for (const auto& t : verdict.stations) {
    stations.push_back({{"station", t.station},
                        {"expected_round_trip_s", t.expectedRoundTrip},
                        {"round_trips_s", t.roundTrips},
                        {"residuals_s", t.residuals},
                        {"max_abs_residual_s", t.maxAbsResidual}});
  }
  return {{"accept", verdict.accept},
          {"reasons", verdict.reasons},
          {"stations", stations},
          {"max_abs_residual_s", verdict.maxAbsResidual},
          {"dibits_sent", verdict.dibitsSent},
          {"dibits_correct", verdict.dibitsCorrect},
          {"error_rate", verdict.errorRate},
          {"error_rate_threshold", verdict.errorRateThreshold},
          {"sent_dibits", verdict.sentDibits},
          {"decoded_dibits", verdict.decodedDibits}};
}

Json toJson(const TraceEvent& event) {
  return {{"seq", event.seq},
          {"time_s", event.time},
          {"kind", event.kind},
          {"actor", event.actor},
          {"payload", event.payload}};
}

std::string traceJsonLines(const std::vector<TraceEvent>& trace) {
  std::string out;
  for (const auto& e : trace) {
    out += toJson(e).dump();
    out += '\n';
  }
  return out;
}

ScenarioConfig parseScenarioConfig(const Json& document) {
  using namespace qlv::config;
  requireKeys(document, "",
              {"geometry", "L", "K", "decoherenceChannel", "storageRates", "deviceBehavior",
               "timingTolerance", "errorRateThreshold", "seed"});
  ScenarioConfig cfg;

  if (!document.contains("geometry")) throw ConfigError("geometry", "missing");
  const auto& g = document.at("geometry");
  requireKeys(g, "geometry", {"dimension", "stations", "claimed", "c"});
  cfg.geometry.dimension = static_cast<int>(requireInteger(g, "dimension", "geometry"));
  cfg.geometry.c = numberOr(g, "c", "geometry", kSpeedOfLight);
  if (!g.contains("stations") || !g.at("stations").is_array()) {
    throw ConfigError("geometry.stations", "expected an array");
  }
  for (std::size_t i = 0; i < g.at("stations").size(); ++i) {
    const auto path = "geometry.stations[" + std::to_string(i) + "]";
    const auto& s = g.at("stations")[i];
    requireKeys(s, path, {"id", "position"});
    if (!s.contains("position")) throw ConfigError(path + ".position", "missing");
    cfg.geometry.stations.push_back(
        {requireString(s, "id", path),
         parsePosition(s.at("position"), path + ".position", cfg.geometry.dimension)});
  }
  if (!g.contains("claimed")) throw ConfigError("geometry.claimed", "missing");
  cfg.geometry.claimed = parsePosition(g.at("claimed"), "geometry.claimed", cfg.geometry.dimension);

  cfg.L = static_cast<int>(requireInteger(document, "L", ""));
  cfg.K = static_cast<int>(requireInteger(document, "K", ""));
  if (!document.contains("decoherenceChannel")) {
    throw ConfigError("decoherenceChannel", "missing");
  }
  const auto& ch = document.at("decoherenceChannel");
  requireKeys(ch, "decoherenceChannel", {"family"});
  cfg.decoherenceChannel = parseChannelSpec(ch, "decoherenceChannel");

  if (document.contains("storageRates")) {
    const auto& rates = document.at("storageRates");
    if (!rates.is_object()) throw ConfigError("storageRates", "expected an object");
    for (const auto& [id, value] : rates.items()) {
      if (!value.is_number()) throw ConfigError("storageRates." + id, "expected a number");
      cfg.storageRates[id] = value.get<double>();
    }
  }

  if (document.contains("deviceBehavior")) {
    const auto& d = document.at("deviceBehavior");
    requireKeys(d, "deviceBehavior", {"kind", "actualPosition", "cloneFidelity"});
    const auto kind = requireString(d, "kind", "deviceBehavior");
    if (kind == "honest") {
      cfg.device.kind = DeviceKind::honest;
    } else if (kind == "displaced") {
      cfg.device.kind = DeviceKind::displaced;
      if (!d.contains("actualPosition")) {
        throw ConfigError("deviceBehavior.actualPosition", "required for a displaced device");
      }
      cfg.device.actualPosition = parsePosition(d.at("actualPosition"),
                                                "deviceBehavior.actualPosition",
                                                cfg.geometry.dimension);
    } else if (kind == "cloner") {
      cfg.device.kind = DeviceKind::cloner;
      cfg.device.cloneFidelity = numberOr(d, "cloneFidelity", "deviceBehavior", 0.7);
    } else {
      throw ConfigError("deviceBehavior.kind", "unknown device behavior '" + kind + "'");
    }
    if (cfg.device.kind != DeviceKind::displaced && d.contains("actualPosition")) {
      throw ConfigError("deviceBehavior.actualPosition", "only valid for a displaced device");
    }
    if (cfg.device.kind != DeviceKind::cloner && d.contains("cloneFidelity")) {
      throw ConfigError("deviceBehavior.cloneFidelity", "only valid for a cloner");
    }
  }
  cfg.timingTolerance = numberOr(document, "timingTolerance", "", 1e-6);
  if (document.contains("errorRateThreshold")) {
    cfg.errorRateThreshold = requireNumber(document, "errorRateThreshold", "");
  }
  if (document.contains("seed")) cfg.seed = requireUnsigned(document, "seed", "");
  cfg.validate();
  return cfg;
}

Json toJson(const ScenarioConfig& config) {
  Json stations = Json::array();
  for (const auto& s : config.geometry.stations) {
    stations.push_back({{"id", s.id}, {"position", positionJson(s.position)}});
  }
  Json device = {{"kind", std::string(toString(config.device.kind))}};
  if (config.device.kind == DeviceKind::displaced) {
    device["actualPosition"] = positionJson(config.device.actualPosition);
  }
  if (config.device.kind == DeviceKind::cloner) device["cloneFidelity"] = config.device.cloneFidelity;
  Json rates = Json::object();
  for (const auto& [id, rate] : config.storageRates) rates[id] = rate;
  Json out = {{"geometry",
               {{"dimension", config.geometry.dimension},
                {"stations", stations},
                {"claimed", positionJson(config.geometry.claimed)},
                {"c", config.geometry.c}}},
              {"L", config.L},
              {"K", config.K},
              {"decoherenceChannel",
               {{"family", std::string(qlv::toString(config.decoherenceChannel.family))}}},
              {"storageRates", rates},
              {"deviceBehavior", device},
              {"timingTolerance", config.timingTolerance},
              {"seed", config.seed}};
  if (config.errorRateThreshold) out["errorRateThreshold"] = *config.errorRateThreshold;
  return out;
}

namespace {

// Dense state vector with qubit 0 as the most significant bit.
using Amplitudes = std::vector<Complex>;

std::size_t bitOf(int numQubits, int qubit) { return std::size_t{1} << (numQubits - 1 - qubit); }

Amplitudes bellProduct(int numPairs) {
  const auto bell = bellState(0).amplitudes();
  Amplitudes state{Complex(1.0)};
  for (int k = 0; k < numPairs; ++k) {
    Amplitudes next(state.size() * 4);
    for (std::size_t i = 0; i < state.size(); ++i) {
      for (std::size_t j = 0; j < 4; ++j) next[i * 4 + j] = state[i] * bell[j];
    }
    state = std::move(next);
  }
  return state;
}

void applyPauli(Amplitudes& state, int numQubits, int qubit, std::uint8_t label) {
  const auto op = pauliForDibit(label);
  const auto bit = bitOf(numQubits, qubit);
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    if (idx & bit) continue;
    const Complex a0 = state[idx];
    const Complex a1 = state[idx | bit];
    state[idx] = op(0, 0) * a0 + op(0, 1) * a1;
    state[idx | bit] = op(1, 0) * a0 + op(1, 1) * a1;
  }
}

// (|B_k><B_k| on qubits q1, q2) applied to the state, unnormalized.
Amplitudes projectBell(const Amplitudes& state, int numQubits, int q1, int q2, int k) {
  const auto bell = bellState(k).amplitudes();
  const auto b1 = bitOf(numQubits, q1);
  const auto b2 = bitOf(numQubits, q2);
  Amplitudes out(state.size());
  for (std::size_t idx = 0; idx < state.size(); ++idx) {
    if (state[idx] == Complex(0.0)) continue;
    const std::size_t in2 = ((idx & b1) ? 2 : 0) | ((idx & b2) ? 1 : 0);
    const std::size_t rest = idx & ~(b1 | b2);
    for (std::size_t c = 0; c < 4; ++c) {
      const std::size_t target = rest | ((c & 2) ? b1 : 0) | ((c & 1) ? b2 : 0);
      out[target] += bell[c] * std::conj(bell[in2]) * state[idx];
    }
  }
  return out;
}

double norm2(const Amplitudes& state) {
  double s = 0.0;
  for (const auto& a : state) s += std::norm(a);
  return s;
}

}  // namespace

std::vector<FrameCase> pauliFrameCheck() {
  // Qubits: Omega (0, 1) and (2, 3) with the device holding 0 and 2, Lambda (4, 5),
  // LambdaPrime (6, 7). Alice holds 1, 3, 4, 6 and the partner 5, 7.
  constexpr int n = 8;
  std::vector<FrameCase> cases;
  for (std::uint8_t m = 0; m < 4; ++m) {
    for (std::uint8_t a = 0; a < 4; ++a) {
      for (std::uint8_t b = 0; b < 4; ++b) {
        FrameCase fc{m, a, b, true, true};
        const auto gammaFrame = swapFrame(m);
        for (std::uint8_t d = 0; d < 4; ++d) {
          const auto physical = teleportedIndex(d, a, gammaFrame, b);
          const auto decoded = deviceDecode(physical, a ^ partnerCorrection(b, gammaFrame));
          if (decoded != d) fc.symbolic = false;

          auto state = bellProduct(4);
          applyPauli(state, n, 6, d);
          state = projectBell(state, n, 3, 4, m);
          state = projectBell(state, n, 6, 1, a);
          state = projectBell(state, n, 7, 5, b);
          const double total = norm2(state);
          const double landed = norm2(projectBell(state, n, 0, 2, physical));
          if (!(total > 0.0) || std::abs(landed / total - 1.0) > 1e-12) fc.circuit = false;
        }
        cases.push_back(fc);
      }
    }
  }
  return cases;
}

}  // namespace qlv::protocol
