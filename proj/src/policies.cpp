#include <psched/policies.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psched {

std::string to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Mg: return "mg";
        case PolicyKind::Greedy: return "greedy";
        case PolicyKind::EdfAlpha: return "edf";
        case PolicyKind::Mlp: return "mlp";
        case PolicyKind::Mm: return "mm";
        case PolicyKind::Lmg: return "lmg";
        case PolicyKind::Smmg: return "smmg";
    }
    throw std::logic_error("unknown policy kind");
}

PolicyKind policy_kind_from_string(const std::string& name) {
    if (name == "mg") return PolicyKind::Mg;
    if (name == "greedy") return PolicyKind::Greedy;
    if (name == "edf") return PolicyKind::EdfAlpha;
    if (name == "mlp") return PolicyKind::Mlp;
    if (name == "mm") return PolicyKind::Mm;
    if (name == "lmg") return PolicyKind::Lmg;
    if (name == "smmg") return PolicyKind::Smmg;
    throw std::invalid_argument("unknown policy: " + name +
                                " (expected mg|greedy|edf|mlp|mm|lmg|smmg)");
}

void PolicySpec::validate() const {
    if (divisor < 1.0 || divisor > 2.5)
        throw std::invalid_argument("policy: divisor must be in [1, 2.5]");
    if (edf_alpha < 1.0) throw std::invalid_argument("policy: edf alpha must be >= 1");
    if (!(mm_threshold > 0.0)) throw std::invalid_argument("policy: mm threshold must be > 0");
    if (mm_ewma < 0.0 || mm_ewma > 1.0)
        throw std::invalid_argument("policy: mm ewma must be in [0, 1]");
    if (lmg_smoothing < 0.0 || lmg_smoothing > 1.0)
        throw std::invalid_argument("policy: lmg smoothing must be in [0, 1]");
    if (lmg_epoch < 0) throw std::invalid_argument("policy: lmg epoch must be >= 0");
    if (!(smmg_fraction > 0.0) || !(smmg_fraction < 1.0))
        throw std::invalid_argument("policy: smmg fraction must be in (0, 1)");
}

EhChoice select_eh(const Buffer& buf) {
    if (buf.pending.empty()) throw std::logic_error("select_eh: empty buffer");
    Step min_d = buf.pending.front().deadline;
    double max_w = buf.pending.front().weight;
    for (const Packet& p : buf.pending) {
        min_d = std::min(min_d, p.deadline);
        max_w = std::max(max_w, p.weight);
    }
    EhChoice choice;
    for (const Packet& p : buf.pending) {
        if (p.deadline == min_d &&
            (choice.e < 0 || p.weight > choice.w_e || (p.weight == choice.w_e && p.id < choice.e))) {
            choice.e = p.id;
            choice.w_e = p.weight;
            choice.d_e = p.deadline;
        }
        if (p.weight == max_w &&
            (choice.h < 0 || p.deadline < choice.d_h || (p.deadline == choice.d_h && p.id < choice.h))) {
            choice.h = p.id;
            choice.w_h = p.weight;
            choice.d_h = p.deadline;
        }
    }
    return choice;
}

PacketId select_mg(const Buffer& buf, double divisor) {
    if (divisor < 1.0) throw std::invalid_argument("select_mg: divisor must be >= 1");
    const EhChoice eh = select_eh(buf);
    return eh.w_e >= eh.w_h / divisor ? eh.e : eh.h;
}

PacketId select_greedy(const Buffer& buf) { return select_eh(buf).h; }

PacketId select_edf_alpha(const Buffer& buf, double alpha) {
    if (alpha < 1.0) throw std::invalid_argument("select_edf_alpha: alpha must be >= 1");
    if (buf.pending.empty()) throw std::logic_error("select_edf_alpha: empty buffer");
    double max_w = 0.0;
    for (const Packet& p : buf.pending) max_w = std::max(max_w, p.weight);
    const double threshold = max_w / alpha;
    const Packet* pick = nullptr;
    for (const Packet& p : buf.pending) {
        if (p.weight < threshold) continue;
        if (!pick || p.deadline < pick->deadline ||
            (p.deadline == pick->deadline &&
             (p.weight > pick->weight || (p.weight == pick->weight && p.id < pick->id))))
            pick = &p;
    }
    return pick->id;
}

PacketId select_mlp(const Buffer& buf, Step now) {
    if (buf.pending.empty()) throw std::logic_error("select_mlp: empty buffer");
    AssignmentProblem problem;
    problem.slots_lo = 0;
    problem.slots_hi = 0;
    for (const Packet& p : buf.pending)
        problem.slots_hi = std::max(problem.slots_hi, p.deadline - now);
    problem.items.reserve(buf.pending.size());
    for (const Packet& p : buf.pending) {
        AssignmentItem item;
        item.id = p.id;
        item.weight = p.weight;
        item.slot_lo = 0;
        item.slot_hi = p.deadline - now;
        item.deadline = p.deadline;
        problem.items.push_back(item);
    }
    const AssignmentSolution solution = solve(problem);
    for (const auto& [id, slot] : solution.assigned)
        if (slot == 0) return id;
    throw std::logic_error("select_mlp: no packet assigned to the current slot");
}

PacketId select_mm(const Buffer& buf, Step now, double running_nbar, const PolicySpec& spec) {
    return running_nbar > spec.mm_threshold ? select_mg(buf, spec.divisor)
                                            : select_mlp(buf, now);
}

PacketId select_smmg(const Buffer& buf, const PolicySpec& spec) {
    const EhChoice eh = select_eh(buf);
    if (eh.w_e >= eh.w_h / spec.divisor) return eh.e;

    // s: earliest packet at the highest weight level below w_h. The alternate
    // reading admits duplicates of w_h (any packet other than h itself).
    const Packet* s = nullptr;
    double s_level = 0.0;
    for (const Packet& p : buf.pending) {
        if (spec.smmg_include_ties ? p.id == eh.h : p.weight >= eh.w_h) continue;
        if (p.weight > s_level) {
            s_level = p.weight;
            s = &p;
        } else if (p.weight == s_level && s &&
                   (p.deadline < s->deadline || (p.deadline == s->deadline && p.id < s->id))) {
            s = &p;
        }
    }
    if (!s) return eh.h;
    if (s->deadline < eh.d_h && s->weight >= std::max(eh.w_e, spec.smmg_fraction * eh.w_h))
        return s->id;
    return eh.h;
}

Step lmg_epoch_length(Step T, double lambda) {
    if (T < 1 || !(lambda > 0.0))
        throw std::invalid_argument("lmg_epoch_length: need T >= 1 and lambda > 0");
    const double f = std::max(0.1 * static_cast<double>(T), 30.0 / std::min(1.0, lambda));
    return static_cast<Step>(std::ceil(f));
}

double lmg_better_divisor(double phi_star, const std::function<double(double)>& eval, double lo,
                          double hi, double grid_step) {
    const double base = eval(phi_star);
    double left_phi = phi_star, left_val = base;
    for (int k = 1;; ++k) {
        const double candidate = phi_star - grid_step * k;
        if (candidate < lo - 1e-12) break;
        const double value = eval(candidate);
        if (value > left_val) {
            left_phi = candidate;
            left_val = value;
        } else {
            break;
        }
    }
    double right_phi = phi_star, right_val = base;
    for (int k = 1;; ++k) {
        const double candidate = phi_star + grid_step * k;
        if (candidate > hi + 1e-12) break;
        const double value = eval(candidate);
        if (value > right_val) {
            right_phi = candidate;
            right_val = value;
        } else {
            break;
        }
    }
    if (left_val > right_val) return left_phi;
    if (right_val > left_val) return right_phi;
    return phi_star;
}

namespace {

// Re-run the ratio rule over steps [from, to], starting from the pending set
// the controller saw at the epoch boundary, with the instance's arrivals.
double replay_epoch(const Instance& inst, const std::vector<Packet>& snapshot, Step from, Step to,
                    double divisor) {
    Buffer buf;
    buf.pending = snapshot;
    auto next = std::lower_bound(inst.packets.begin(), inst.packets.end(), from,
                                 [](const Packet& p, Step t) { return p.release < t; });
    double zeta = 0.0;
    for (Step t = from; t <= to; ++t) {
        buf.now = t;
        while (next != inst.packets.end() && next->release == t) buf.pending.push_back(*next++);
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

}  // namespace

RunResult lmg_run(const Instance& inst, Step t_end, Window window, const PolicySpec& spec) {
    spec.validate();
    if (spec.lmg_epoch < 1)
        throw std::invalid_argument("lmg_run: epoch length must be derived or set (>= 1)");

    double phi_star = spec.divisor;
    std::vector<Packet> snapshot;  // pending set at the current epoch's start
    Step epoch_start = 1;
    double epoch_zeta = 0.0;

    const Selector selector = [&](const Buffer& buf, const StepContext&) {
        const PacketId pick = select_mg(buf, phi_star);
        for (const Packet& p : buf.pending)
            if (p.id == pick) {
                epoch_zeta += p.weight;
                break;
            }
        return pick;
    };

    const StepHook hook = [&](Step t, const Buffer& buf_after) {
        if (t - epoch_start + 1 < spec.lmg_epoch) return;
        if (spec.lmg_smoothing < 1.0) {
            const double anchor_zeta = epoch_zeta;
            const auto eval = [&](double phi) {
                if (phi == phi_star) return anchor_zeta;
                return replay_epoch(inst, snapshot, epoch_start, t, phi);
            };
            const double better = lmg_better_divisor(phi_star, eval);
            phi_star = spec.lmg_smoothing * phi_star + (1.0 - spec.lmg_smoothing) * better;
        }
        snapshot = buf_after.pending;
        epoch_start = t + 1;
        epoch_zeta = 0.0;
    };

    return run_with_selector(inst, t_end, window, selector, hook);
}

RunResult run(const PolicySpec& spec, const Instance& inst, Step t_end, Window window,
              std::uint64_t /*seed*/) {
    spec.validate();
    switch (spec.kind) {
        case PolicyKind::Mg:
            return run_with_selector(inst, t_end, window, [&](const Buffer& buf, const StepContext&) {
                return select_mg(buf, spec.divisor);
            });
        case PolicyKind::Greedy:
            return run_with_selector(inst, t_end, window, [](const Buffer& buf, const StepContext&) {
                return select_greedy(buf);
            });
        case PolicyKind::EdfAlpha:
            return run_with_selector(inst, t_end, window, [&](const Buffer& buf, const StepContext&) {
                return select_edf_alpha(buf, spec.edf_alpha);
            });
        case PolicyKind::Mlp:
            return run_with_selector(inst, t_end, window, [](const Buffer& buf, const StepContext& ctx) {
                return select_mlp(buf, ctx.now);
            });
        case PolicyKind::Mm: {
            if (spec.mm_ewma == 0.0)
                return run_with_selector(inst, t_end, window,
                                         [&](const Buffer& buf, const StepContext& ctx) {
                                             return select_mm(buf, ctx.now,
                                                              ctx.occupancy_running_mean, spec);
                                         });
            // EWMA variant: steps where the selector is not called had an empty
            // buffer, so their occupancy samples are exactly zero.
            double ewma = 0.0;
            Step last_seen = 0;
            return run_with_selector(
                inst, t_end, window, [&, ewma, last_seen](const Buffer& buf, const StepContext& ctx) mutable {
                    for (Step t = last_seen + 1; t < ctx.now; ++t) ewma *= 1.0 - spec.mm_ewma;
                    ewma = (1.0 - spec.mm_ewma) * ewma +
                           spec.mm_ewma * static_cast<double>(buf.pending.size());
                    last_seen = ctx.now;
                    return select_mm(buf, ctx.now, ewma, spec);
                });
        }
        case PolicyKind::Lmg:
            return lmg_run(inst, t_end, window, spec);
        case PolicyKind::Smmg:
            return run_with_selector(inst, t_end, window, [&](const Buffer& buf, const StepContext&) {
                return select_smmg(buf, spec);
            });
    }
    throw std::logic_error("run: unknown policy kind");
}

}  // namespace psched
