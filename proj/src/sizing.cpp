#include <psched/sizing.hpp>

#include <psched/policies.hpp>

#include <algorithm>
#include <stdexcept>

namespace psched {

GenConfig sizing_defaults() {
    GenConfig gen;
    gen.w_max = 20;
    gen.d_max = 20;
    gen.model = ArrivalModel::Model1;
    gen.kappa = 0;
    return gen;
}

namespace {

// Bucketed single-node simulator for the ratio rule over Model-1 traffic.
// State is the multiset of (deadline, weight) counts: a ring of d_max + 1
// deadline buckets, each holding per-weight counts. Which same-class packet
// the rule removes never changes this state, so occupancy matches the
// generic engine exactly.
class BucketSim {
public:
    BucketSim(const GenConfig& config, double divisor)
        : stream_(config),
          divisor_(divisor),
          ring_(static_cast<std::size_t>(config.d_max) + 1),
          weight_total_(static_cast<std::size_t>(config.w_max) + 1, 0) {
        if (config.model != ArrivalModel::Model1)
            throw std::invalid_argument("sizing: the streaming simulator requires Model 1");
        for (auto& bucket : ring_)
            bucket.assign(static_cast<std::size_t>(config.w_max) + 1, 0);
        d_span_ = config.d_max + 1;
        w_max_ = config.w_max;
    }

    /// Advance one step; returns the occupancy sample.
    std::int64_t step() {
        const Step t = stream_.now() + 1;

        // everything with deadline t-1 expires now
        auto& stale = ring_[static_cast<std::size_t>(((t - 1) % d_span_ + d_span_) % d_span_)];
        for (Step w = 1; w <= w_max_; ++w) {
            const std::int64_t n = stale[static_cast<std::size_t>(w)];
            weight_total_[static_cast<std::size_t>(w)] -= n;
            occupancy_ -= n;
        }
        std::fill(stale.begin(), stale.end(), 0);

        for (const auto& arrival : stream_.step()) {
            auto& bucket = ring_[static_cast<std::size_t>(arrival.deadline % d_span_)];
            ++bucket[static_cast<std::size_t>(arrival.weight)];
            ++weight_total_[static_cast<std::size_t>(arrival.weight)];
            ++occupancy_;
        }

        const std::int64_t sample = occupancy_;
        if (occupancy_ > 0) send(t);
        return sample;
    }

private:
    void send(Step t) {
        // e: heaviest weight in the earliest nonempty deadline bucket
        Step d_e = -1, w_e = 0;
        for (Step off = 0; off <= d_span_ - 1 && d_e < 0; ++off) {
            const auto& bucket = ring_[static_cast<std::size_t>((t + off) % d_span_)];
            for (Step w = w_max_; w >= 1; --w) {
                if (bucket[static_cast<std::size_t>(w)] > 0) {
                    d_e = t + off;
                    w_e = w;
                    break;
                }
            }
        }
        // h: earliest deadline holding the overall heaviest weight
        Step w_h = 0;
        for (Step w = w_max_; w >= 1; --w)
            if (weight_total_[static_cast<std::size_t>(w)] > 0) {
                w_h = w;
                break;
            }
        Step d_h = -1;
        for (Step off = 0; off <= d_span_ - 1 && d_h < 0; ++off) {
            const auto& bucket = ring_[static_cast<std::size_t>((t + off) % d_span_)];
            if (bucket[static_cast<std::size_t>(w_h)] > 0) d_h = t + off;
        }

        const bool send_e = static_cast<double>(w_e) >= static_cast<double>(w_h) / divisor_;
        const Step d = send_e ? d_e : d_h;
        const Step w = send_e ? w_e : w_h;
        --ring_[static_cast<std::size_t>(d % d_span_)][static_cast<std::size_t>(w)];
        --weight_total_[static_cast<std::size_t>(w)];
        --occupancy_;
    }

    ArrivalStream stream_;
    double divisor_;
    std::vector<std::vector<std::int64_t>> ring_;
    std::vector<std::int64_t> weight_total_;
    std::int64_t occupancy_ = 0;
    Step d_span_ = 0;
    Step w_max_ = 0;
};

}  // namespace

SizingResult buffer_size_study(double lambda, double target, Step run_length, std::uint64_t seed,
                               GenConfig defaults) {
    if (!(lambda > 0.0)) throw std::invalid_argument("sizing: lambda must be > 0");
    if (!(target > 0.0) || target > 1.0)
        throw std::invalid_argument("sizing: target must be in (0, 1]");
    if (run_length < 1) throw std::invalid_argument("sizing: run_length must be >= 1");

    GenConfig gen = defaults;
    gen.lambda = lambda;
    gen.T = run_length;
    gen.kappa = 0;
    gen.seed = seed;
    gen.validate();

    BucketSim sim(gen, kGoldenRatio);
    std::vector<std::int64_t> histogram;
    for (Step t = 0; t < run_length; ++t) {
        const std::int64_t occ = sim.step();
        if (static_cast<std::size_t>(occ) >= histogram.size())
            histogram.resize(static_cast<std::size_t>(occ) + 1, 0);
        ++histogram[static_cast<std::size_t>(occ)];
    }

    SizingResult result;
    result.steps = run_length;
    result.max_occupancy = static_cast<std::int64_t>(histogram.size()) - 1;
    result.resolution_warning =
        static_cast<double>(run_length) < 10.0 / target;

    // exceed(b) = steps with occupancy > b; take the smallest b with
    // exceed(b) / steps <= target (so target = 1 always yields b = 0).
    std::int64_t exceed = 0;
    for (std::size_t v = histogram.size(); v-- > 1;) {
        exceed += histogram[v];
        if (static_cast<double>(exceed) / static_cast<double>(run_length) > target) {
            result.b = static_cast<std::int64_t>(v);
            break;
        }
    }
    result.ratio = static_cast<double>(result.b) / lambda;
    return result;
}

std::vector<std::int64_t> mg_occupancy_trace(const GenConfig& config, Step t_end, double divisor) {
    BucketSim sim(config, divisor);
    std::vector<std::int64_t> trace;
    trace.reserve(static_cast<std::size_t>(t_end));
    for (Step t = 0; t < t_end; ++t) trace.push_back(sim.step());
    return trace;
}

}  // namespace psched
