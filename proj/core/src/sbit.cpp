#include "fair/sbit.hpp"

namespace fair {

const char* sb_action_name(SbAction a) {
    switch (a) {
        case SbAction::forward: return "forward";
        case SbAction::drop: return "drop";
        case SbAction::delay: return "delay";
    }
    return "unknown";
}

SbDecision sb_forward(SbState& state, const NetHeader& net, FairHeader& fair,
                      uint32_t port_in) {
    bool sb_in = fair.suspicious();
    bool port_sus = state.sus_ports.count(port_in) > 0;

    if (!port_sus) {
        if (sb_in) return {state.action_policy, true};
        if (state.sus_sources.count(addr_asn(net.src_addr)) > 0) {
            state.sus_ports.insert(port_in);
            fair.set_suspicious(true);
            return {state.action_policy, true};
        }
        return {SbAction::forward, false};
    }
    if (sb_in) {
        state.sus_ports.erase(port_in);
        return {SbAction::forward, true};
    }
    fair.set_suspicious(true);
    return {state.action_policy, true};
}

void ingest_verdict(SbState& state, const Verdict& verdict) {
    if (verdict.outcome == Outcome::source_guilty)
        state.sus_sources.insert(verdict.source_asn);
}

}  // namespace fair
