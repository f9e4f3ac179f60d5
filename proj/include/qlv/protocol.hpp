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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qlv/channels.hpp"
#include "qlv/noise_random.hpp"

namespace qlv::protocol {

using Json = nlohmann::json;

inline constexpr double kSpeedOfLight = 299'792'458.0;
/// Identifier of the device under verification in messages and rate maps.
inline constexpr const char* kDeviceId = "cliff";

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

struct Station {
  std::string id;
  Vec2 position;
};

/// Reference stations and the claimed device position. stations[0] is the hub
/// (Alice), which shares the Omega pairs with the device; every other station
/// is a partner.
struct Geometry {
  int dimension = 1;
  std::vector<Station> stations;
  Vec2 claimed;
  double c = kSpeedOfLight;

  double delay(const Vec2& a, const Vec2& b) const { return distance(a, b) / c; }
  const Station& station(const std::string& id) const;
  std::size_t numPartners() const { return stations.empty() ? 0 : stations.size() - 1; }
  /// Throws ConfigError on a broken invariant.
  void validate() const;
};

enum class DeviceKind { honest, displaced, cloner };

struct DeviceBehavior {
  DeviceKind kind = DeviceKind::honest;
  /// Used by `displaced`; the other kinds sit at the claimed position.
  Vec2 actualPosition;
  /// Used by `cloner`: cap on the per-dibit decode success probability.
  double cloneFidelity = 0.7;
};

std::string_view toString(DeviceKind kind);

struct ScenarioConfig {
  Geometry geometry;
  int L = 100;
  int K = 20;
  /// depolarization, amplitudeDamping or phaseDamping; p comes from storage age.
  ChannelSpec decoherenceChannel;
  /// Memory decay rate (1/s) per station id and for the device; missing ids are 0.
  std::map<std::string, double> storageRates;
  DeviceBehavior device;
  double timingTolerance = 1e-6;
  /// Defaults to the midpoint of the honest expected error and the cloning error.
  std::optional<double> errorRateThreshold;
  std::uint64_t seed = 0;

  void validate() const;
  double storageRate(const std::string& id) const;
  Vec2 devicePosition() const;
};

struct Endpoint {
  std::string station;
  int slot = 0;
};

struct Pair {
  int label = 0;
  Endpoint a;
  Endpoint b;
  /// Pauli correction relating the physical Bell index to `state`.
  std::uint8_t pauliFrame = 0;
  /// Logical Bell index.
  std::uint8_t state = 0;
  double birthTime = 0.0;
  bool consumed = false;

  std::uint8_t physicalIndex() const { return state ^ pauliFrame; }
};

struct PairRegistry {
  std::string setName;
  std::vector<Pair> pairs;

  std::size_t unconsumed() const;
  std::vector<int> unconsumedLabels() const;
  Pair& at(int label);
  const Pair& at(int label) const;
};

/// Pairs Alice shares with one partner, plus the swap bookkeeping.
struct PartnerState {
  std::string partner;
  PairRegistry lambda;
  PairRegistry gamma;
  PairRegistry lambdaPrime;
  /// Gamma label j -> device qubit label i.
  std::map<int, int> jToI;
  /// Gamma label j -> BSM outcome of the swap that created it.
  std::map<int, std::uint8_t> swapOutcome;
};

enum class ChannelKind { open, secured };

struct SwapEntry {
  int j = 0;
  int i = 0;
  std::uint8_t outcome = 0;
};

struct SwapReport {
  std::vector<SwapEntry> entries;
};

struct ChallengeSegment {
  int dibitIndex = 0;
  int lambdaPrimeLabel = 0;
  std::uint8_t dibit = 0;
  std::string encoder;
};

struct ChallengeShare {
  std::vector<std::uint8_t> bits;
  std::vector<ChallengeSegment> segments;
};

struct TeleportNotice {
  int instance = 0;
  int dibitIndex = 0;
  /// Label i of the device qubit holding this half of the challenge pair.
  int deviceLabel = 0;
  /// Frame correction the device applies before its BSM.
  std::uint8_t correction = 0;
};

struct DecodeReply {
  int instance = 0;
  int dibitIndex = 0;
  std::uint8_t dibit = 0;
};

using Payload = std::variant<SwapReport, ChallengeShare, TeleportNotice, DecodeReply>;

struct Message {
  std::uint64_t id = 0;
  std::string sender;
  std::string receiver;
  ChannelKind channel = ChannelKind::open;
  Payload payload;
  double emitTime = 0.0;
  /// Filled in when the message is emitted, from the receiver's true position.
  double arriveTime = 0.0;
  bool delivered = false;
};

/// Book-keeping for one teleported challenge dibit.
struct DibitRecord {
  int index = 0;
  int instance = 0;
  std::string partner;
  std::uint8_t sent = 0;
  int lambdaPrimeLabel = 0;
  std::string encoder;
  int aliceOmegaLabel = -1;
  int gammaLabel = -1;
  int partnerDeviceLabel = -1;
  std::uint8_t aliceOutcome = 0;
  std::uint8_t partnerOutcome = 0;
  /// Bell index of the device's two qubits after both teleportations.
  std::uint8_t physicalIndex = 0;
  double aliceEmit = 0.0;
  double partnerEmit = 0.0;
  /// Planned arrival at the claimed position.
  double targetArrival = 0.0;
  /// Decode success probability on the honest schedule.
  double nominalFidelity = 1.0;
  int noticesArrived = 0;
  std::uint8_t noticeCorrection = 0;
  std::optional<double> decodeTime;
  std::optional<std::uint8_t> decoded;
  double successProbability = 0.0;
  std::optional<double> aliceReplyArrival;
  std::optional<double> partnerReplyArrival;
};

enum class Stage { created, swapped, informed, challenged, teleported, decoded, verified };

struct TraceEvent {
  std::uint64_t seq = 0;
  double time = 0.0;
  std::string kind;
  std::string actor;
  Json payload;
};

enum class QueueKind { emit, deliver };

struct QueuedEvent {
  double time = 0.0;
  std::uint64_t seq = 0;
  QueueKind kind = QueueKind::deliver;
  std::size_t message = 0;
};

struct ProtocolWorld {
  ScenarioConfig config;
  Stage stage = Stage::created;
  double clock = 0.0;
  PairRegistry omega;
  std::vector<PartnerState> partners;
  std::vector<std::uint8_t> challengeBits;
  std::vector<DibitRecord> dibits;
  std::vector<Message> messages;
  /// Min-heap on (time, seq).
  std::vector<QueuedEvent> queue;
  /// Device qubits already measured by the device.
  std::vector<bool> deviceMeasured;
  std::vector<TraceEvent> trace;
  bool recordTrace = true;
  std::uint64_t nextSeq = 0;

  PartnerState& partner(const std::string& id);
};

/// Builds the registries, all pairs in Bell index 0 with frame 0 at t = 0.
/// Omega holds L pairs per partner (L in one dimension); each partner gets
/// L/2 Lambda and L/2 LambdaPrime pairs.
ProtocolWorld setupWorld(const ScenarioConfig& config);

/// For each Lambda pair, Alice swaps it with a random unconsumed Omega qubit.
void entanglementSwap(ProtocolWorld& world, RngStream& rng);
/// Secured message to each partner with the swap outcomes and the j -> i map.
void informPartner(ProtocolWorld& world);
/// Draws K challenge bits and encodes each dibit into a LambdaPrime pair.
void generateChallenge(ProtocolWorld& world, RngStream& rng);
/// Schedules both teleportations of every challenge pair so the notices reach
/// the claimed position together.
void teleportChallenge(ProtocolWorld& world, RngStream& rng);
/// Runs the event queue: device decodes and replies on the arrival of the
/// last notice of each dibit, replies travel back to the stations.
void decodeAtDevice(ProtocolWorld& world, RngStream& rng);

struct StationTiming {
  std::string station;
  double expectedRoundTrip = 0.0;
  std::vector<double> roundTrips;
  std::vector<double> residuals;
  double maxAbsResidual = 0.0;
};

struct Verdict {
  std::vector<StationTiming> stations;
  double maxAbsResidual = 0.0;
  int dibitsSent = 0;
  int dibitsCorrect = 0;
  double errorRate = 0.0;
  double errorRateThreshold = 0.0;
  std::vector<std::uint8_t> sentDibits;
  std::vector<std::uint8_t> decodedDibits;
  bool accept = false;
  /// Subset of {"timing", "error-rate", "timeout"}.
  std::vector<std::string> reasons;
};

Verdict verify(ProtocolWorld& world);

struct ScenarioResult {
  Verdict verdict;
  std::vector<TraceEvent> trace;
};

/// Steps 1-6 in order on streams (seed, 0..3).
ScenarioResult runScenario(const ScenarioConfig& config, bool recordTrace = true);

/// Decode outcome for a dibit: `correct` with probability `successProbability`,
/// otherwise one of the three other dibits, uniformly.
std::uint8_t sampleDecode(std::uint8_t correct, double successProbability, RngStream& rng);

/// Fidelity of the reference pair after the storage channel at exponent
/// sum(gamma * t), i.e. p = 1 - exp(-exponent).
double storageFidelity(const ChannelSpec& channel, double exponent);

/// Default error-rate threshold for a given honest expected error.
double defaultErrorRateThreshold(double honestExpectedError);

// Views of the world as seen by the listed party.
Json eavesdropperView(const ProtocolWorld& world);
Json deviceView(const ProtocolWorld& world);
Json partnerView(const ProtocolWorld& world, const std::string& partnerId);

Json toJson(const ProtocolWorld& world);
std::uint64_t worldDigest(const ProtocolWorld& world);

Json toJson(const Verdict& verdict);
Json toJson(const TraceEvent& event);
/// One JSON object per line.
std::string traceJsonLines(const std::vector<TraceEvent>& trace);

/// Parses a scenario document; unknown keys throw ConfigError naming the path.
ScenarioConfig parseScenarioConfig(const Json& document);
Json toJson(const ScenarioConfig& config);

/// Outcome of one (swap, Alice, partner) BSM outcome combination.
struct FrameCase {
  std::uint8_t swapOutcome = 0;
  std::uint8_t aliceOutcome = 0;
  std::uint8_t partnerOutcome = 0;
  /// Every dibit decodes to itself through the frame rules.
  bool symbolic = false;
  /// The state-vector circuit lands on the Bell index the frame rules predict.
  bool circuit = false;
};

/// All 64 outcome combinations, checked symbolically and on an 8-qubit
/// state-vector circuit.
std::vector<FrameCase> pauliFrameCheck();

}  // namespace qlv::protocol
