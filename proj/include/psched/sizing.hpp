#pragma once

#include <psched/workload.hpp>

#include <cstdint>
#include <vector>

namespace psched {

/// Model-1 defaults used by the occupancy sizing experiment.
GenConfig sizing_defaults();

struct SizingResult {
    std::int64_t b = 0;      // smallest b with exceedance fraction <= target
    double ratio = 0.0;      // b / lambda
    bool resolution_warning = false;  // run too short to resolve the target
    std::int64_t max_occupancy = 0;
    Step steps = 0;
};

/// Stream a single-node run under the ratio rule for `run_length` steps and
/// find the smallest buffer bound b whose empirical exceedance probability is
/// at most `target`. Occupancy is sampled after arrivals and expiry, before
/// the send, as in the engine. Runs in O(d_max + w_max) per step and never
/// materializes a packet list.
SizingResult buffer_size_study(double lambda, double target, Step run_length, std::uint64_t seed,
                               GenConfig defaults = sizing_defaults());

/// Occupancy trace of the streaming simulator (testing hook: must match the
/// engine's trace for the same generator config).
std::vector<std::int64_t> mg_occupancy_trace(const GenConfig& config, Step t_end, double divisor);

}  // namespace psched
