#include <psched/engine.hpp>

#include <algorithm>
#include <stdexcept>

namespace psched {

RunResult run_with_selector(const Instance& inst, Step t_end, Window window,
                            const Selector& select, const StepHook& after_step) {
    if (t_end < 1) throw std::invalid_argument("run: t_end must be >= 1");
    if (window.first > window.last) throw std::invalid_argument("run: empty window");
    if (window.first < 1 || window.last > t_end)
        throw std::invalid_argument("run: window must lie within [1, t_end]");

    RunResult result;
    result.window = window;
    result.occupancy_trace.reserve(static_cast<std::size_t>(t_end));

    Buffer buf;
    std::size_t next_arrival = 0;
    double occupancy_sum = 0.0;

    for (Step t = 1; t <= t_end; ++t) {
        buf.now = t;
        while (next_arrival < inst.packets.size() && inst.packets[next_arrival].release == t)
            buf.pending.push_back(inst.packets[next_arrival++]);

        std::erase_if(buf.pending, [t](const Packet& p) { return p.deadline < t; });

        const auto occupancy = static_cast<std::int64_t>(buf.pending.size());
        result.occupancy_trace.push_back(occupancy);
        occupancy_sum += static_cast<double>(occupancy);

        if (!buf.pending.empty()) {
            StepContext ctx;
            ctx.now = t;
            ctx.occupancy_samples = t;
            ctx.occupancy_running_mean = occupancy_sum / static_cast<double>(t);

            const PacketId chosen = select(buf, ctx);
            const auto it = std::find_if(buf.pending.begin(), buf.pending.end(),
                                         [chosen](const Packet& p) { return p.id == chosen; });
            if (it == buf.pending.end())
                throw std::logic_error("policy selected a packet that is not in the buffer");

            result.sent.emplace_back(t, chosen);
            result.zeta_total += it->weight;
            if (window.contains(t)) result.zeta += it->weight;
            buf.pending.erase(it);
        }

        if (after_step) after_step(t, buf);
    }
    return result;
}

double window_mean_occupancy(const RunResult& result) {
    const Step first = result.window.first;
    const Step last = std::min<Step>(result.window.last,
                                     static_cast<Step>(result.occupancy_trace.size()));
    if (first > last) return 0.0;
    double sum = 0.0;
    for (Step t = first; t <= last; ++t)
        sum += static_cast<double>(result.occupancy_trace[static_cast<std::size_t>(t - 1)]);
    return sum / static_cast<double>(last - first + 1);
}

}  // namespace psched
