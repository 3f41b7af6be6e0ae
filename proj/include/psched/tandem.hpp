#pragma once

#include <psched/policies.hpp>
#include <psched/workload.hpp>

#include <vector>

namespace psched {

/// A chain of nodes: arrivals enter node 1, each scheduling node forwards at
/// most one packet per step, the last node is the sink. With
/// adjust_deadlines, node k (of N, sink = N) enforces the temporary deadline
/// d - (N - 1 - k) so a forwarded packet always has enough hops left.
struct TandemConfig {
    int nodes = 3;
    bool adjust_deadlines = true;
    // One spec shared by all scheduling nodes, or one per node (nodes - 1).
    std::vector<PolicySpec> node_policies{PolicySpec{PolicyKind::Mg}};
    GenConfig gen;

    void validate() const;
};

struct TandemResult {
    // zeta[k] for k < nodes-1: window weight sent by scheduling node k+1;
    // zeta[nodes-1]: weight reaching the sink (sent from the penultimate node
    // at a step <= its deadline).
    std::vector<double> zeta;
    std::vector<std::vector<std::pair<Step, PacketId>>> sent;  // per scheduling node
    std::vector<std::int64_t> dropped;                         // expired per node
};

/// Run the tandem chain on a fixed instance. A packet sent from node k at
/// step t joins node k+1's buffer at step t+1.
TandemResult run_tandem(const Instance& inst, const TandemConfig& config, Step t_end,
                        Window window);

/// Generate the instance from config.gen, then run.
TandemResult run_tandem(const TandemConfig& config, Step t_end, Window window);

}  // namespace psched
