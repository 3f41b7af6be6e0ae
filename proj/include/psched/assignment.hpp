#pragma once

#include <psched/packet.hpp>

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace psched {

/// One schedulable item: a packet that may occupy any slot in [slot_lo, slot_hi].
struct AssignmentItem {
    PacketId id = 0;
    double weight = 0.0;
    Step slot_lo = 0;
    Step slot_hi = 0;
    // Deadline used for tie-breaking; defaults to slot_hi when not set explicitly.
    Step deadline = 0;
};

/// Items competing for an inclusive interval of unit-capacity slots.
struct AssignmentProblem {
    std::vector<AssignmentItem> items;
    Step slots_lo = 0;
    Step slots_hi = -1;  // empty by default

    void validate() const;
};

struct AssignmentSolution {
    std::unordered_map<PacketId, Step> assigned;  // packet id -> slot
    double total_weight = 0.0;
};

/// Maximum-total-weight feasible assignment. Items are considered in order of
/// weight descending (ties: earlier deadline, then lower id); each is accepted
/// iff an augmenting path over the slot interval graph exists. The accepted set
/// is then canonicalized earliest-deadline-first: earlier slots are filled
/// whenever possible.
AssignmentSolution solve(const AssignmentProblem& problem);

/// Exhaustive oracle; refuses problems with more than 10 items or 10 slots.
AssignmentSolution solve_bruteforce(const AssignmentProblem& problem);

/// How the offline baseline treats the measurement window.
enum class OfflineWindowMode {
    CountOnly,  // optimize the full horizon, then count window-slot weight
    Restrict,   // optimize over window slots only (sensitivity alternative)
};

struct OfflineResult {
    double zeta_off = 0.0;  // window-counted weight
    double total_weight = 0.0;
    AssignmentSolution schedule;
};

/// Exact offline optimum: every packet becomes an item with slot range
/// [r, min(d, t_end)] over slots [1, t_end].
OfflineResult offline_optimum(const Instance& inst, Step t_end, Window window,
                              OfflineWindowMode mode = OfflineWindowMode::CountOnly);

}  // namespace psched
