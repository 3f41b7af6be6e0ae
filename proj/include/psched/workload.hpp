#pragma once

#include <psched/packet.hpp>
#include <psched/rng.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace psched {

enum class ArrivalModel {
    Model1,  // w ~ U{1..w_max}, slack tau ~ U{0..d_max}
    Model2,  // w ~ U{1..w_max}, tau bimodal: N(2, 0.5^2) w.p. p, else N(8, 0.75^2)
};

/// Everything a generator needs: arrivals are Poisson(lambda) per step over
/// steps 1..T+kappa; the first kappa steps are warmup.
struct GenConfig {
    Step T = 200;
    double lambda = 5.0;
    std::int64_t w_max = 20;
    std::int64_t d_max = 20;
    ArrivalModel model = ArrivalModel::Model1;
    double bimodal_p = 0.85;  // Model 2 only
    Step kappa = 0;
    std::uint64_t seed = 1;

    Step total_steps() const { return T + kappa; }
    void validate() const;
    std::string describe() const;
};

/// Streams the arrivals of one instance step by step, so very long runs never
/// materialize the packet list. generate() consumes the same stream, draw for
/// draw, which keeps the two paths bit-identical for a given config.
class ArrivalStream {
public:
    struct Arrival {
        double weight;
        Step deadline;
    };

    explicit ArrivalStream(const GenConfig& config);

    /// Arrivals for the next step (valid until the next call).
    const std::vector<Arrival>& step();
    Step now() const { return now_; }

private:
    GenConfig config_;
    Rng rng_;
    PoissonSampler poisson_;
    Step now_ = 0;
    std::vector<Arrival> batch_;
};

/// Model 1 / Model 2 instance for steps 1..T+kappa. Pure function of config.
Instance generate(const GenConfig& config);

/// Multiply every packet's weight by its absolute deadline; everything else
/// is unchanged.
Instance scenario1(const Instance& inst);

/// Model-1 arrivals with the deadline multiset reassigned in sorted order so
/// deadlines are weakly increasing in release order (clamped to d >= r).
Instance generate_agreeable(const GenConfig& config);

/// The three-packet instance that separates the assignment-driven policy from
/// the ratio rule: {(1,1,w1), (1,2,w2), (2,2,w2)}.
Instance hard_instance(double w1, double w2);

}  // namespace psched
