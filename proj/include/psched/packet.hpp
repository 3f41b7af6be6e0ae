#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace psched {

using Step = std::int64_t;
using PacketId = std::int64_t;

/// One unit-length job: released at `release`, must be sent by `deadline`
/// (inclusive), worth `weight` when sent in time.
struct Packet {
    PacketId id = 0;
    Step release = 1;
    Step deadline = 1;
    double weight = 1.0;

    Step slack() const { return deadline - release; }
};

/// Inclusive step interval [first, last] used for throughput accounting.
struct Window {
    Step first = 1;
    Step last = 1;

    bool contains(Step t) const { return first <= t && t <= last; }
    Step length() const { return last - first + 1; }
};

/// A full arrival schedule: packets sorted by (release, id), ids 0..n-1 in that
/// order, every release within [1, horizon].
struct Instance {
    Step horizon = 0;
    std::vector<Packet> packets;
    std::string meta = "external";

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;
    /// Largest deadline over all packets (0 when empty).
    Step max_deadline() const;
};

/// Line-oriented text format: header `H=<horizon>`, then one packet per line
/// `id r d w`. Blank lines and lines starting with '#' are skipped.
Instance load_instance(std::istream& in);
Instance load_instance_file(const std::string& path);
void save_instance(const Instance& inst, std::ostream& out);
void save_instance_file(const Instance& inst, const std::string& path);

}  // namespace psched
