#pragma once

#include <set>

#include "fair/protest.hpp"
#include "fair/wire.hpp"

namespace fair {

enum class SbAction { forward, drop, delay };

const char* sb_action_name(SbAction a);

// Per-switch flagging state: sources with acknowledged violations and
// ingress ports whose upstream neighbour fails to flag them.
struct SbState {
    std::set<uint32_t> sus_sources;
    std::set<uint32_t> sus_ports;
    SbAction action_policy = SbAction::forward;
};

struct SbDecision {
    SbAction action = SbAction::forward;
    bool sb_out = false;  // suspicious bit on the forwarded header
};

// The five forwarding transitions. A flagged arrival on a suspicious
// port clears the port: an upstream neighbour that starts flagging wins
// back unflagged treatment for the rest of its traffic.
SbDecision sb_forward(SbState& state, const NetHeader& net, FairHeader& fair,
                      uint32_t port_in);

// Verdicts naming a guilty source feed the suspicious-source set; other
// outcomes are no-ops. Idempotent.
void ingest_verdict(SbState& state, const Verdict& verdict);

}  // namespace fair
