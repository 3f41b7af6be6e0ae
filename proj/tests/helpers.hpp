#pragma once

#include <psched/engine.hpp>
#include <psched/packet.hpp>
#include <psched/rng.hpp>

#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

namespace psched::test {

struct PacketSpec {
    Step release;
    Step deadline;
    double weight;
};

inline Instance make_instance(std::vector<PacketSpec> specs, Step horizon = 0) {
    std::stable_sort(specs.begin(), specs.end(),
                     [](const PacketSpec& a, const PacketSpec& b) { return a.release < b.release; });
    Instance inst;
    for (const PacketSpec& s : specs) {
        Packet p;
        p.id = static_cast<PacketId>(inst.packets.size());
        p.release = s.release;
        p.deadline = s.deadline;
        p.weight = s.weight;
        inst.packets.push_back(p);
        inst.horizon = std::max(inst.horizon, s.release);
    }
    if (horizon > 0) inst.horizon = horizon;
    inst.validate();
    return inst;
}

inline Buffer make_buffer(const std::vector<PacketSpec>& specs, Step now = 1) {
    Buffer buf;
    buf.now = now;
    for (const PacketSpec& s : specs) {
        Packet p;
        p.id = static_cast<PacketId>(buf.pending.size());
        p.release = s.release;
        p.deadline = s.deadline;
        p.weight = s.weight;
        buf.pending.push_back(p);
    }
    return buf;
}

/// Schedule validity: send times within [r, d], strictly increasing, no packet
/// twice, and conservation of zeta.
inline void check_schedule_valid(const Instance& inst, const RunResult& rr) {
    std::set<PacketId> seen;
    Step prev_t = 0;
    double total = 0.0, window_total = 0.0;
    for (const auto& [t, id] : rr.sent) {
        REQUIRE(t > prev_t);
        prev_t = t;
        REQUIRE(seen.insert(id).second);
        const Packet& p = inst.packets.at(static_cast<std::size_t>(id));
        REQUIRE(p.id == id);
        REQUIRE(p.release <= t);
        REQUIRE(t <= p.deadline);
        total += p.weight;
        if (rr.window.contains(t)) window_total += p.weight;
    }
    REQUIRE(rr.zeta_total == doctest::Approx(total).epsilon(1e-12));
    REQUIRE(rr.zeta == doctest::Approx(window_total).epsilon(1e-12));
    REQUIRE(rr.zeta <= rr.zeta_total + 1e-9);
}

}  // namespace psched::test
