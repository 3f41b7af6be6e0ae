#pragma once

#include <psched/assignment.hpp>
#include <psched/engine.hpp>
#include <psched/packet.hpp>

#include <functional>
#include <string>

namespace psched {

inline constexpr double kGoldenRatio = 1.6180339887498948482;

enum class PolicyKind { Mg, Greedy, EdfAlpha, Mlp, Mm, Lmg, Smmg };

std::string to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& name);

/// Tagged description of one online policy. Unused fields are ignored by the
/// other kinds.
struct PolicySpec {
    PolicyKind kind = PolicyKind::Mg;
    double divisor = kGoldenRatio;    // MG weight-ratio divisor; LMG start; SMMG base rule
    double edf_alpha = kGoldenRatio;  // EDF-alpha admission threshold
    double mm_threshold = 10.0;       // MM occupancy threshold N-bar
    double mm_ewma = 0.0;             // 0 = cumulative mean; else EWMA factor in (0,1]
    double lmg_smoothing = 0.5;       // LMG alpha
    Step lmg_epoch = 0;               // LMG f; 0 means "derive before running"
    double smmg_fraction = 0.85;      // SMMG p
    bool smmg_include_ties = false;   // alternate reading of "second largest"

    void validate() const;
    std::string tag() const { return to_string(kind); }
};

/// The two reference packets of the ratio rule: e is the heaviest among the
/// earliest-deadline packets, h the earliest-deadline among the heaviest.
/// Always w_e <= w_h and d_e <= d_h; e == h iff w_e == w_h.
struct EhChoice {
    PacketId e = -1;
    PacketId h = -1;
    double w_e = 0.0;
    double w_h = 0.0;
    Step d_e = 0;
    Step d_h = 0;

    /// The literal-constant indicator tracked by the psi statistic.
    bool psi_indicator() const { return w_h > 1.618 * w_e; }
};

EhChoice select_eh(const Buffer& buf);

/// Send e if w_e >= w_h / divisor, else h.
PacketId select_mg(const Buffer& buf, double divisor);

/// Maximum weight; ties by earlier deadline, then lower id (identical to h).
PacketId select_greedy(const Buffer& buf);

/// Earliest deadline among packets with w >= max weight / alpha
/// (ties: heavier, then lower id).
PacketId select_edf_alpha(const Buffer& buf, double alpha);

/// Solve the buffer's slot assignment over [0, d_max - now] and send the
/// packet placed at slot 0.
PacketId select_mlp(const Buffer& buf, Step now);

/// Run the ratio rule when the running occupancy mean exceeds the threshold,
/// otherwise the per-step assignment.
PacketId select_mm(const Buffer& buf, Step now, double running_nbar, const PolicySpec& spec);

/// Ratio rule extended with the "second largest" escape: when the rule picks h,
/// send the earliest packet s at the next weight level below w_h instead, if
/// d_s < d_h and w_s >= max(w_e, p * w_h).
PacketId select_smmg(const Buffer& buf, const PolicySpec& spec);

/// f = ceil(max(0.1 * T, 30 / min(1, lambda))).
Step lmg_epoch_length(Step T, double lambda);

/// Hill-climb on the 0.05 divisor grid: walk left from phi_star while the
/// evaluation strictly increases, then right; return the better endpoint,
/// ties resolved to phi_star.
double lmg_better_divisor(double phi_star, const std::function<double(double)>& eval,
                          double lo = 1.0, double hi = 2.5, double grid_step = 0.05);

/// Epoch-learning controller around the ratio rule: every `lmg_epoch` steps,
/// replay the elapsed epoch (buffer snapshot at epoch start plus the epoch's
/// arrivals) under nearby divisors and smooth the current divisor toward the
/// best one. Requires spec.lmg_epoch >= 1.
RunResult lmg_run(const Instance& inst, Step t_end, Window window, const PolicySpec& spec);

/// Run any policy on an instance. Deterministic for fixed arguments; the seed
/// is reserved for randomized policies and ignored by all current kinds.
RunResult run(const PolicySpec& spec, const Instance& inst, Step t_end, Window window,
              std::uint64_t seed = 0);

}  // namespace psched
