#include <psched/workload.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace psched {

void GenConfig::validate() const {
    if (T < 1) throw std::invalid_argument("gen: T must be >= 1");
    if (!(lambda > 0.0) || lambda > 250.0)
        throw std::invalid_argument("gen: lambda must be in (0, 250]");
    if (w_max < 1) throw std::invalid_argument("gen: w_max must be >= 1");
    if (d_max < 0) throw std::invalid_argument("gen: d_max must be >= 0");
    if (bimodal_p < 0.0 || bimodal_p > 1.0)
        throw std::invalid_argument("gen: bimodal_p must be in [0, 1]");
    if (kappa < 0) throw std::invalid_argument("gen: kappa must be >= 0");
}

std::string GenConfig::describe() const {
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "model=%d T=%lld lambda=%.17g wmax=%lld dmax=%lld p=%.17g kappa=%lld seed=%llu",
                  model == ArrivalModel::Model1 ? 1 : 2, static_cast<long long>(T), lambda,
                  static_cast<long long>(w_max), static_cast<long long>(d_max), bimodal_p,
                  static_cast<long long>(kappa), static_cast<unsigned long long>(seed));
    return buf;
}

namespace {

// Round half away from zero, clamp below at zero; slacks must be integral.
Step bimodal_slack(Rng& rng, double p) {
    const bool near_peak = rng.next_double() < p;
    const double tau = near_peak ? rng.normal(2.0, 0.5) : rng.normal(8.0, 0.75);
    const double rounded = std::floor(tau + 0.5);
    return rounded < 0.0 ? 0 : static_cast<Step>(rounded);
}

}  // namespace

ArrivalStream::ArrivalStream(const GenConfig& config)
    : config_(config), rng_(config.seed), poisson_(config.lambda) {
    config_.validate();
}

const std::vector<ArrivalStream::Arrival>& ArrivalStream::step() {
    ++now_;
    batch_.clear();
    const std::int64_t count = poisson_.draw(rng_);
    batch_.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        Arrival a;
        a.weight = static_cast<double>(rng_.uniform_int(1, config_.w_max));
        const Step tau = config_.model == ArrivalModel::Model1
                             ? rng_.uniform_int(0, config_.d_max)
                             : bimodal_slack(rng_, config_.bimodal_p);
        a.deadline = now_ + tau;
        batch_.push_back(a);
    }
    return batch_;
}

Instance generate(const GenConfig& config) {
    config.validate();
    ArrivalStream stream(config);
    Instance inst;
    inst.horizon = config.total_steps();
    inst.meta = config.describe();
    PacketId next_id = 0;
    for (Step t = 1; t <= inst.horizon; ++t) {
        for (const auto& arrival : stream.step()) {
            Packet p;
            p.id = next_id++;
            p.release = t;
            p.deadline = arrival.deadline;
            p.weight = arrival.weight;
            inst.packets.push_back(p);
        }
    }
    return inst;
}

Instance scenario1(const Instance& inst) {
    Instance out = inst;
    for (Packet& p : out.packets) p.weight *= static_cast<double>(p.deadline);
    if (!out.meta.empty()) out.meta += " scenario1=1";
    return out;
}

Instance generate_agreeable(const GenConfig& config) {
    Instance inst = generate(config);
    std::vector<Step> deadlines;
    deadlines.reserve(inst.packets.size());
    for (const Packet& p : inst.packets) deadlines.push_back(p.deadline);
    std::sort(deadlines.begin(), deadlines.end());
    for (std::size_t i = 0; i < inst.packets.size(); ++i)
        inst.packets[i].deadline = std::max(deadlines[i], inst.packets[i].release);
    inst.meta += " agreeable=1";
    return inst;
}

Instance hard_instance(double w1, double w2) {
    if (!(w1 > 0.0) || !(w2 > 0.0))
        throw std::invalid_argument("hard_instance: weights must be positive");
    Instance inst;
    inst.horizon = 2;
    inst.meta = "hard-instance";
    inst.packets = {
        {0, 1, 1, w1},
        {1, 1, 2, w2},
        {2, 2, 2, w2},
    };
    return inst;
}

}  // namespace psched
