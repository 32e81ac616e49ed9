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

#include "netshuffle/protocol.h"

#include <algorithm>
#include <set>
#include <unordered_set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "netshuffle/ldp.h"
#include "netshuffle/rng.h"
#include "netshuffle/status_macros.h"

namespace netshuffle {
namespace {

constexpr std::uint64_t kLocalStream = 1ULL << 48;
constexpr std::uint64_t kRelayStream = 2ULL << 48;
constexpr std::uint64_t kSubmitStream = 3ULL << 48;

std::string IdentityName(Identity id) {
  return id == kServer ? "server" : absl::StrCat(id);
}

struct Held {
  ReportId report;
  Envelope envelope;
};

}  // namespace

std::string ToString(Layer layer) {
  switch (layer) {
    case Layer::kNone:
      return "none";
    case Layer::kHop:
      return "hop";
    case Layer::kServer:
      return "server";
  }
  return "unknown";
}

std::string ToString(Phase phase) {
  switch (phase) {
    case Phase::kKeying:
      return "keying";
    case Phase::kExchanging:
      return "exchanging";
    case Phase::kSubmitting:
      return "submitting";
    case Phase::kAggregated:
      return "aggregated";
  }
  return "unknown";
}

Envelope EnvelopeStore::Seal(const ReportPayload& payload) {
  Entry entry;
  entry.envelope = {next_handle_++, kServer, Layer::kServer};
  entry.payload = payload;
  entries_.push_back(entry);
  return entry.envelope;
}

Envelope EnvelopeStore::Wrap(Identity recipient, const Envelope& inner) {
  Entry entry;
  entry.envelope = {next_handle_++, recipient, Layer::kHop};
  entry.inner = inner;
  entries_.push_back(entry);
  return entry.envelope;
}

absl::StatusOr<const EnvelopeStore::Entry*> EnvelopeStore::Find(
    const Envelope& envelope) const {
  if (envelope.handle == 0 || envelope.handle >= next_handle_) {
    return absl::NotFoundError(
        absl::StrCat("unknown envelope handle ", envelope.handle));
  }
  return &entries_[envelope.handle - 1];
}

absl::StatusOr<Envelope> EnvelopeStore::OpenHop(Identity opener,
                                                const Envelope& envelope) {
  NETSHUFFLE_ASSIGN_OR_RETURN(const Entry* entry, Find(envelope));
  // Routing metadata on the caller's copy is not trusted.
  const bool granted = entry->envelope.layer == Layer::kHop &&
                       entry->envelope.recipient == opener;
  audit_.push_back({opener, entry->envelope.layer, granted});
  if (!granted) {
    return absl::PermissionDeniedError(
        absl::StrCat(IdentityName(opener), " cannot open envelope ",
                     envelope.handle, " (", ToString(entry->envelope.layer),
                     " layer for ", IdentityName(entry->envelope.recipient),
                     ")"));
  }
  return *entry->inner;
}

absl::StatusOr<ReportPayload> EnvelopeStore::OpenServer(
    Identity opener, const Envelope& envelope) {
  NETSHUFFLE_ASSIGN_OR_RETURN(const Entry* entry, Find(envelope));
  const bool granted =
      entry->envelope.layer == Layer::kServer && opener == kServer;
  audit_.push_back({opener, entry->envelope.layer, granted});
  if (!granted) {
    return absl::PermissionDeniedError(
        absl::StrCat(IdentityName(opener), " cannot open envelope ",
                     envelope.handle, " (", ToString(entry->envelope.layer),
                     " layer)"));
  }
  return *entry->payload;
}

std::string FormatEvent(const TranscriptEvent& event) {
  return absl::StrCat(event.round, ",", IdentityName(event.sender), ",",
                      IdentityName(event.receiver), ",", ToString(event.layer),
                      ",", event.event);
}

absl::StatusOr<ProtocolRun> RunProtocol(const Graph& graph,
                                        const std::vector<int>& inputs,
                                        const ProtocolConfig& config) {
  const std::int64_t n = graph.node_count();
  if (n < 2 || graph.min_degree() < 1) {
    return absl::FailedPreconditionError(
        "protocol needs at least two nodes, each with a neighbor");
  }
  if (!CheckErgodic(graph).is_connected) {
    return absl::FailedPreconditionError("protocol needs a connected graph");
  }
  if (config.rounds < 1) {
    return absl::InvalidArgumentError("rounds must be >= 1");
  }
  if (static_cast<std::int64_t>(inputs.size()) != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", n, " inputs, got ", inputs.size()));
  }
  NETSHUFFLE_ASSIGN_OR_RETURN(
      const RandomizedResponse rr,
      RandomizedResponse::Create(config.categories, config.epsilon0));
  for (int value : inputs) {
    if (value < 0 || value >= config.categories) {
      return absl::InvalidArgumentError(
          absl::StrCat("input ", value, " outside [0, ", config.categories,
                       ")"));
    }
  }

  ProtocolRun run;
  run.config = config;
  run.unwrapped.resize(n);
  auto log = [&run](std::int64_t round, Identity sender, Identity receiver,
                    Layer layer, std::string event, std::uint64_t handle) {
    run.transcript.push_back(
        {round, sender, receiver, layer, std::move(event), handle});
  };

  // Keying: every key passes through the server, clients' hop keys and the
  // server's own key alike.
  for (Identity j = 0; j < n; ++j) {
    log(0, j, kServer, Layer::kNone, "key_publish", 0);
  }
  for (Identity j = 0; j < n; ++j) {
    log(0, kServer, j, Layer::kNone, "key_broadcast", 0);
  }
  run.phase = Phase::kExchanging;

  std::vector<std::vector<Held>> held(n);
  run.randomized.resize(n);
  for (Identity j = 0; j < n; ++j) {
    Rng rng = MakeStream(config.seed, kLocalStream + j);
    run.randomized[j] = rr.Randomize(inputs[j], rng);
    held[j].push_back({static_cast<ReportId>(j),
                       run.store.Seal({run.randomized[j]})});
  }

  for (std::int64_t round = 1; round <= config.rounds; ++round) {
    std::int64_t count = 0;
    for (const auto& reports : held) count += reports.size();
    run.in_flight.push_back(count);

    std::vector<std::vector<Held>> pending(n);
    for (Identity j = 0; j < n; ++j) {
      Rng rng = MakeStream(config.seed,
                           kRelayStream + static_cast<std::uint64_t>(round) *
                                              static_cast<std::uint64_t>(n) +
                               j);
      const auto neighbors = graph.neighbors(static_cast<NodeId>(j));
      for (const Held& item : held[j]) {
        const NodeId next = neighbors[UniformIndex(rng, neighbors.size())];
        const Envelope hop = run.store.Wrap(next, item.envelope);
        log(round, j, next, Layer::kHop, "relay", hop.handle);
        pending[next].push_back({item.report, hop});
      }
    }
    for (Identity u = 0; u < n; ++u) {
      held[u].clear();
      for (const Held& item : pending[u]) {
        NETSHUFFLE_ASSIGN_OR_RETURN(const Envelope inner,
                                    run.store.OpenHop(u, item.envelope));
        run.unwrapped[u].push_back(inner);
        held[u].push_back({item.report, inner});
      }
    }
  }
  run.phase = Phase::kSubmitting;

  run.final_holder.assign(n, 0);
  for (Identity u = 0; u < n; ++u) {
    for (const Held& item : held[u]) {
      run.final_holder[item.report] = static_cast<NodeId>(u);
    }
  }

  const std::int64_t submit_round = config.rounds + 1;
  if (config.reporting == Protocol::kAll) {
    for (Identity u = 0; u < n; ++u) {
      for (const Held& item : held[u]) {
        run.submissions.push_back({u, item.envelope, item.report});
      }
    }
  } else {
    WalkTrace trace;
    trace.final_node = run.final_holder;
    trace.steps = config.rounds;
    trace.seed = config.seed;
    const ReportAllocation allocation = AllocationFromTrace(trace, n);
    NETSHUFFLE_ASSIGN_OR_RETURN(
        const auto chosen,
        SampleSingleReports(allocation, trace, config.seed ^ kSubmitStream));
    for (Identity u = 0; u < n; ++u) {
      if (chosen[u].has_value()) {
        const auto it = std::find_if(
            held[u].begin(), held[u].end(),
            [&](const Held& item) { return item.report == *chosen[u]; });
        run.submissions.push_back({u, it->envelope, it->report});
      } else {
        // Dummy: a randomization of the fixed value 0, sealed like any
        // other report.
        Rng rng = MakeStream(config.seed, kSubmitStream + u);
        const Envelope dummy = run.store.Seal({rr.Randomize(0, rng)});
        run.submissions.push_back({u, dummy, std::nullopt});
      }
    }
  }
  for (const Submission& submission : run.submissions) {
    log(submit_round, submission.sender, kServer, Layer::kServer, "submit",
        submission.envelope.handle);
  }

  for (const Submission& submission : run.submissions) {
    NETSHUFFLE_ASSIGN_OR_RETURN(
        const ReportPayload payload,
        run.store.OpenServer(kServer, submission.envelope));
    run.aggregated.push_back(payload.value);
  }
  log(submit_round + 1, kServer, kServer, Layer::kServer, "aggregate", 0);
  run.phase = Phase::kAggregated;
  return run;
}

ReportAllocation AllocationFromRun(const ProtocolRun& run) {
  ReportAllocation allocation;
  allocation.counts.assign(run.final_holder.size(), 0);
  for (NodeId holder : run.final_holder) ++allocation.counts[holder];
  return allocation;
}

absl::Status CheckInvariants(const ProtocolRun& run) {
  const auto n = static_cast<std::int64_t>(run.randomized.size());
  for (const OpenRecord& record : run.store.audit()) {
    if (record.granted && record.layer == Layer::kServer &&
        record.opener != kServer) {
      return absl::InternalError(absl::StrCat(
          "server-layer payload exposed to ", IdentityName(record.opener)));
    }
    if (record.granted && record.layer == Layer::kHop &&
        record.opener == kServer) {
      return absl::InternalError("server opened a hop layer");
    }
  }

  // Event kinds must follow the phase order; rounds never decrease; senders
  // are sorted within a round.
  auto rank = [](const std::string& event) {
    if (event == "key_publish" || event == "key_broadcast") return 0;
    if (event == "relay") return 1;
    if (event == "submit") return 2;
    if (event == "aggregate") return 3;
    return 4;  // probes appended by adversary views
  };
  std::vector<std::int64_t> relays(run.config.rounds + 1, 0);
  std::int64_t submits = 0;
  const TranscriptEvent* previous = nullptr;
  for (const TranscriptEvent& event : run.transcript) {
    if (previous != nullptr) {
      if (rank(event.event) < rank(previous->event) ||
          event.round < previous->round) {
        return absl::InternalError(
            absl::StrCat("transcript out of phase order at \"",
                         FormatEvent(event), "\""));
      }
      const bool canonical = event.event == "relay" || event.event == "submit";
      if (canonical && previous->event == event.event &&
          previous->round == event.round && event.sender < previous->sender) {
        return absl::InternalError(absl::StrCat(
            "senders not sorted in round ", event.round));
      }
    }
    if (event.event == "submit" &&
        (event.layer != Layer::kServer || event.receiver != kServer)) {
      return absl::InternalError("submission not sealed for the server");
    }
    if (event.event == "relay") {
      if (event.layer != Layer::kHop || event.round < 1 ||
          event.round > run.config.rounds) {
        return absl::InternalError("relay outside an exchange round");
      }
      ++relays[event.round];
    }
    if (event.event == "submit") ++submits;
    previous = &event;
  }
  for (std::int64_t round = 1; round <= run.config.rounds; ++round) {
    const std::int64_t expected = run.in_flight[round - 1];
    if (relays[round] != expected || expected != n) {
      return absl::InternalError(absl::StrCat(
          "round ", round, ": ", relays[round], " relays for ", expected,
          " held reports, n = ", n));
    }
  }
  if (submits != n || static_cast<std::int64_t>(run.submissions.size()) != n) {
    return absl::InternalError(
        absl::StrCat("expected ", n, " submissions, got ", submits));
  }
  if (run.phase != Phase::kAggregated) {
    return absl::InternalError(
        absl::StrCat("run ended in phase ", ToString(run.phase)));
  }

  // End-to-end conservation of what the server decrypts.
  for (std::size_t i = 0; i < run.submissions.size(); ++i) {
    const auto& report = run.submissions[i].report;
    if (report.has_value() && run.aggregated[i] != run.randomized[*report]) {
      return absl::InternalError("decrypted value differs from sealed value");
    }
  }
  if (run.config.reporting == Protocol::kAll) {
    std::multiset<int> sent(run.randomized.begin(), run.randomized.end());
    std::multiset<int> received(run.aggregated.begin(), run.aggregated.end());
    if (sent != received) {
      return absl::InternalError("aggregated multiset differs from inputs");
    }
  }
  return absl::OkStatus();
}

ServerView ServerAdversaryView(ProtocolRun& run) {
  ServerView view;
  std::unordered_set<std::uint64_t> wire;
  bool reused = false;
  for (const TranscriptEvent& event : run.transcript) {
    if (event.event != "relay") continue;
    reused |= !wire.insert(event.handle).second;
  }
  bool linked = false;
  for (const Submission& submission : run.submissions) {
    view.links.emplace_back(submission.envelope.handle, submission.sender);
    linked |= wire.contains(submission.envelope.handle);
  }
  // Try to peel every hop layer the server relayed.
  bool opened = false;
  for (const TranscriptEvent& event : run.transcript) {
    if (event.event != "relay") continue;
    opened |= run.store
                  .OpenHop(kServer, {event.handle, event.receiver, Layer::kHop})
                  .ok();
  }
  view.ignorant_of_earlier_hops = !reused && !linked && !opened;
  return view;
}

absl::StatusOr<ClientView> ClientAdversaryView(ProtocolRun& run,
                                               Identity client) {
  const auto n = static_cast<Identity>(run.unwrapped.size());
  if (client < 0 || client >= n) {
    return absl::InvalidArgumentError(
        absl::StrCat("client ", client, " outside [0, ", n, ")"));
  }
  ClientView view;
  view.client = client;
  const std::int64_t probe_round = run.config.rounds + 2;
  for (const Envelope& envelope : run.unwrapped[client]) {
    view.relayed.push_back(envelope.handle);
    if (run.store.OpenServer(client, envelope).ok()) {
      ++view.payloads_revealed;
    } else {
      ++view.access_violations;
      run.transcript.push_back({probe_round, client, kServer, Layer::kServer,
                                "access_violation", envelope.handle});
    }
  }
  return view;
}

}  // namespace netshuffle
