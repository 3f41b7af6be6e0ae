#pragma once

#include <psched/packet.hpp>

#include <functional>
#include <vector>

namespace psched {

/// Pending packets at the current step. Every pending packet satisfies
/// release <= now <= deadline once expiry has run for the step.
struct Buffer {
    std::vector<Packet> pending;
    Step now = 0;

    bool empty() const { return pending.empty(); }
    std::size_t size() const { return pending.size(); }
};

/// Per-step information handed to a selector alongside the buffer. The
/// occupancy statistics include the current step's sample.
struct StepContext {
    Step now = 0;
    std::int64_t occupancy_samples = 0;
    double occupancy_running_mean = 0.0;
};

/// Returns the id of the packet to send; must name a pending packet.
using Selector = std::function<PacketId(const Buffer&, const StepContext&)>;

/// Called after each step completes (post-send), with the buffer as left for
/// the next step.
using StepHook = std::function<void(Step, const Buffer&)>;

struct RunResult {
    std::vector<std::pair<Step, PacketId>> sent;
    double zeta = 0.0;        // weight sent inside the window
    double zeta_total = 0.0;  // weight sent over all steps
    std::vector<std::int64_t> occupancy_trace;  // sampled after arrivals/expiry, pre-send
    Window window;
};

/// Drive one policy over an instance for steps 1..t_end. Per step: insert
/// arrivals with r = t, drop packets with d < t, sample occupancy, then ask the
/// selector for at most one packet to send. A packet with d = t is sendable at
/// step t. Throws std::logic_error if the selector names a packet that is not
/// pending.
RunResult run_with_selector(const Instance& inst, Step t_end, Window window,
                            const Selector& select, const StepHook& after_step = {});

/// Mean of the occupancy trace over the result's window.
double window_mean_occupancy(const RunResult& result);

}  // namespace psched
