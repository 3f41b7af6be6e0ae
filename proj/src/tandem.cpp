#include <psched/tandem.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace psched {

void TandemConfig::validate() const {
    if (nodes < 2) throw std::invalid_argument("tandem: need at least 2 nodes");
    const std::size_t schedulers = static_cast<std::size_t>(nodes) - 1;
    if (node_policies.size() != 1 && node_policies.size() != schedulers)
        throw std::invalid_argument("tandem: provide one policy or one per scheduling node");
    for (const PolicySpec& spec : node_policies) {
        spec.validate();
        if (spec.kind == PolicyKind::Lmg && spec.lmg_epoch < 1)
            throw std::invalid_argument("tandem: lmg needs an explicit epoch length");
    }
    gen.validate();
}

namespace {

// Per-node scheduling state; packets are stored with the node's effective
// deadline so the shared selectors and expiry apply unchanged.
struct NodeState {
    Buffer buf;
    double occupancy_sum = 0.0;
    // epoch-learning state (only used when the node runs the learning rule)
    double phi_star = kGoldenRatio;
    std::vector<Packet> snapshot;
    std::vector<std::pair<Step, Packet>> epoch_arrivals;
    Step epoch_start = 1;
    double epoch_zeta = 0.0;
};

double replay_logged_epoch(const NodeState& node, Step from, Step to, double divisor) {
    Buffer buf;
    buf.pending = node.snapshot;
    std::size_t next = 0;
    double zeta = 0.0;
    for (Step t = from; t <= to; ++t) {
        buf.now = t;
        while (next < node.epoch_arrivals.size() && node.epoch_arrivals[next].first == t)
            buf.pending.push_back(node.epoch_arrivals[next++].second);
        std::erase_if(buf.pending, [t](const Packet& p) { return p.deadline < t; });
        if (buf.pending.empty()) continue;
        const PacketId pick = select_mg(buf, divisor);
        const auto it = std::find_if(buf.pending.begin(), buf.pending.end(),
                                     [pick](const Packet& p) { return p.id == pick; });
        zeta += it->weight;
        buf.pending.erase(it);
    }
    return zeta;
}

PacketId node_select(NodeState& node, const PolicySpec& spec, Step t) {
    switch (spec.kind) {
        case PolicyKind::Mg: return select_mg(node.buf, spec.divisor);
        case PolicyKind::Greedy: return select_greedy(node.buf);
        case PolicyKind::EdfAlpha: return select_edf_alpha(node.buf, spec.edf_alpha);
        case PolicyKind::Mlp: return select_mlp(node.buf, t);
        case PolicyKind::Mm:
            return select_mm(node.buf, t, node.occupancy_sum / static_cast<double>(t), spec);
        case PolicyKind::Smmg: return select_smmg(node.buf, spec);
        case PolicyKind::Lmg: {
            const PacketId pick = select_mg(node.buf, node.phi_star);
            for (const Packet& p : node.buf.pending)
                if (p.id == pick) {
                    node.epoch_zeta += p.weight;
                    break;
                }
            return pick;
        }
    }
    throw std::logic_error("tandem: unknown policy kind");
}

void node_end_of_step(NodeState& node, const PolicySpec& spec, Step t) {
    if (spec.kind != PolicyKind::Lmg) return;
    if (t - node.epoch_start + 1 < spec.lmg_epoch) return;
    if (spec.lmg_smoothing < 1.0) {
        const double anchor = node.epoch_zeta;
        const auto eval = [&](double phi) {
            if (phi == node.phi_star) return anchor;
            return replay_logged_epoch(node, node.epoch_start, t, phi);
        };
        const double better = lmg_better_divisor(node.phi_star, eval);
        node.phi_star = spec.lmg_smoothing * node.phi_star + (1.0 - spec.lmg_smoothing) * better;
    }
    node.snapshot = node.buf.pending;
    node.epoch_arrivals.clear();
    node.epoch_start = t + 1;
    node.epoch_zeta = 0.0;
}

}  // namespace

TandemResult run_tandem(const Instance& inst, const TandemConfig& config, Step t_end,
                        Window window) {
    config.validate();
    if (t_end < 1) throw std::invalid_argument("tandem: t_end must be >= 1");
    if (window.first > window.last || window.first < 1 || window.last > t_end)
        throw std::invalid_argument("tandem: window must lie within [1, t_end]");

    const std::size_t schedulers = static_cast<std::size_t>(config.nodes) - 1;
    auto policy_at = [&](std::size_t k) -> const PolicySpec& {
        return config.node_policies.size() == 1 ? config.node_policies.front()
                                                : config.node_policies[k];
    };

    TandemResult result;
    result.zeta.assign(static_cast<std::size_t>(config.nodes), 0.0);
    result.sent.resize(schedulers);
    result.dropped.assign(static_cast<std::size_t>(config.nodes), 0);

    std::vector<NodeState> nodes(schedulers);
    for (std::size_t k = 0; k < schedulers; ++k) nodes[k].phi_star = policy_at(k).divisor;

    // in_flight[k]: packet sent by node k-1 last step, joining node k now.
    std::vector<std::optional<Packet>> in_flight(schedulers);

    // Deadline shift at node k (0-based): nodes - 2 - k when adjusting.
    const auto shift_at = [&](std::size_t k) {
        return config.adjust_deadlines ? static_cast<Step>(schedulers - 1 - k) : 0;
    };

    std::size_t next_arrival = 0;
    for (Step t = 1; t <= t_end; ++t) {
        // deliveries first: arrivals from outside and from upstream sends at t-1
        while (next_arrival < inst.packets.size() && inst.packets[next_arrival].release == t) {
            Packet p = inst.packets[next_arrival++];
            p.deadline -= shift_at(0);
            p.release = t;
            nodes[0].buf.pending.push_back(p);
        }
        for (std::size_t k = 1; k < schedulers; ++k) {
            if (!in_flight[k]) continue;
            Packet p = *in_flight[k];
            in_flight[k].reset();
            p.deadline += config.adjust_deadlines ? 1 : 0;
            p.release = t;
            nodes[k].buf.pending.push_back(p);
        }

        for (std::size_t k = 0; k < schedulers; ++k) {
            NodeState& node = nodes[k];
            node.buf.now = t;
            const std::size_t before = node.buf.pending.size();
            std::erase_if(node.buf.pending, [t](const Packet& p) { return p.deadline < t; });
            result.dropped[k] += static_cast<std::int64_t>(before - node.buf.pending.size());
            node.occupancy_sum += static_cast<double>(node.buf.pending.size());

            if (policy_at(k).kind == PolicyKind::Lmg) {
                const std::size_t fresh = node.buf.pending.size();
                // everything inserted this step is an epoch arrival
                for (std::size_t i = 0; i < fresh; ++i) {
                    const Packet& p = node.buf.pending[i];
                    if (p.release == t) node.epoch_arrivals.emplace_back(t, p);
                }
            }

            if (!node.buf.pending.empty()) {
                const PacketId pick = node_select(node, policy_at(k), t);
                const auto it =
                    std::find_if(node.buf.pending.begin(), node.buf.pending.end(),
                                 [pick](const Packet& p) { return p.id == pick; });
                if (it == node.buf.pending.end())
                    throw std::logic_error("tandem: policy selected a packet not in the buffer");
                result.sent[k].emplace_back(t, it->id);
                if (window.contains(t)) {
                    result.zeta[k] += it->weight;
                    if (k + 1 == schedulers) result.zeta[schedulers] += it->weight;
                }
                if (k + 1 < schedulers)
                    in_flight[k + 1] = *it;
                node.buf.pending.erase(it);
            }

            node_end_of_step(node, policy_at(k), t);
        }
    }
    return result;
}

TandemResult run_tandem(const TandemConfig& config, Step t_end, Window window) {
    return run_tandem(generate(config.gen), config, t_end, window);
}

}  // namespace psched
