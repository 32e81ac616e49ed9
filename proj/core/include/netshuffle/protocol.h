// Copyright 2026 The Netshuffle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Simulated message-relay protocol: keying, relayed exchange rounds through
// the server, final submission and aggregation. Public-key encryption is
// modeled by capability-checked envelopes; nothing is encrypted.

#ifndef NETSHUFFLE_PROTOCOL_H_
#define NETSHUFFLE_PROTOCOL_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "netshuffle/accountant.h"
#include "netshuffle/graph.h"
#include "netshuffle/walk.h"

namespace netshuffle {

// Clients are 0..n-1.
using Identity = std::int64_t;
inline constexpr Identity kServer = -1;

enum class Layer { kNone, kHop, kServer };
enum class Phase { kKeying, kExchanging, kSubmitting, kAggregated };

std::string ToString(Layer layer);
std::string ToString(Phase phase);

// What a holder sees: an opaque handle plus routing metadata. Handles are
// fresh for every seal or wrap and carry no information about contents.
struct Envelope {
  std::uint64_t handle = 0;
  Identity recipient = kServer;
  Layer layer = Layer::kNone;
};

struct ReportPayload {
  // Locally randomized value.
  int value = 0;
};

struct OpenRecord {
  Identity opener = kServer;
  Layer layer = Layer::kNone;
  bool granted = false;
};

// Holds sealed contents and enforces that only the addressed identity can
// open the outermost layer.
class EnvelopeStore {
 public:
  Envelope Seal(const ReportPayload& payload);
  Envelope Wrap(Identity recipient, const Envelope& inner);
  // Peels a hop layer; PermissionDenied unless opener is the recipient.
  absl::StatusOr<Envelope> OpenHop(Identity opener, const Envelope& envelope);
  // Reveals a server-layer payload; PermissionDenied unless opener is the
  // server.
  absl::StatusOr<ReportPayload> OpenServer(Identity opener,
                                           const Envelope& envelope);

  const std::vector<OpenRecord>& audit() const { return audit_; }

 private:
  struct Entry {
    Envelope envelope;
    std::optional<Envelope> inner;
    std::optional<ReportPayload> payload;
  };

  absl::StatusOr<const Entry*> Find(const Envelope& envelope) const;

  std::uint64_t next_handle_ = 1;
  std::vector<Entry> entries_;  // indexed by handle - 1
  std::vector<OpenRecord> audit_;
};

struct TranscriptEvent {
  std::int64_t round = 0;
  Identity sender = kServer;
  Identity receiver = kServer;
  Layer layer = Layer::kNone;
  // key_publish, key_broadcast, relay, submit, access_violation, aggregate.
  std::string event;
  // Handle of the envelope on the wire; 0 when none.
  std::uint64_t handle = 0;
};

// "round,sender,receiver,layer,event"; the server prints as "server".
std::string FormatEvent(const TranscriptEvent& event);

struct Submission {
  Identity sender = 0;
  Envelope envelope;
  // Ground truth kept outside the envelopes for analysis only: the report
  // (== its original owner) or nullopt for a dummy.
  std::optional<ReportId> report;
};

struct ProtocolConfig {
  std::int64_t rounds = 1;
  Protocol reporting = Protocol::kAll;
  // k-ary randomized response applied to each input before sealing.
  int categories = 4;
  double epsilon0 = 1.0;
  std::uint64_t seed = 0;
};

struct ProtocolRun {
  ProtocolConfig config;
  Phase phase = Phase::kKeying;
  std::vector<TranscriptEvent> transcript;
  // Randomized value of report j (owned by client j).
  std::vector<int> randomized;
  // Holder of each report after the final exchange round.
  std::vector<NodeId> final_holder;
  std::vector<Submission> submissions;
  // Values the server decrypted, in submission order.
  std::vector<int> aggregated;
  // Number of held reports at the start of each exchange round.
  std::vector<std::int64_t> in_flight;
  // Server-layer envelopes each client unwrapped from a hop layer.
  std::vector<std::vector<Envelope>> unwrapped;
  EnvelopeStore store;
};

// inputs[j] in [0, categories) is client j's true value.
absl::StatusOr<ProtocolRun> RunProtocol(const Graph& graph,
                                        const std::vector<int>& inputs,
                                        const ProtocolConfig& config);

// Report counts per node at submission time.
ReportAllocation AllocationFromRun(const ProtocolRun& run);

// Checks every audited open and every transcript event: server-layer
// payloads are only opened by the server, phases advance monotonically,
// per-round message counts equal the held reports, and the submission count
// matches the reporting mode.
absl::Status CheckInvariants(const ProtocolRun& run);

struct ServerView {
  // (server-layer handle, final-round sender) per submission.
  std::vector<std::pair<std::uint64_t, Identity>> links;
  // True when nothing the server saw lets it tie a submitted envelope to an
  // earlier hop: hop handles are never reused, submitted handles never
  // appeared on the wire earlier, and every hop layer refuses the server.
  bool ignorant_of_earlier_hops = false;
};

struct ClientView {
  Identity client = 0;
  // Server-layer handles this client held after peeling a hop layer.
  std::vector<std::uint64_t> relayed;
  // Attempts to open those envelopes; all must be refused.
  std::int64_t access_violations = 0;
  std::int64_t payloads_revealed = 0;
};

// Both views probe the run's envelope store, so the run is mutated only by
// appending audit records and access_violation events.
ServerView ServerAdversaryView(ProtocolRun& run);
absl::StatusOr<ClientView> ClientAdversaryView(ProtocolRun& run,
                                               Identity client);

}  // namespace netshuffle

#endif  // NETSHUFFLE_PROTOCOL_H_
