#include <psched/harness.hpp>

#include <psched/rng.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace psched {

namespace {

// Stream purposes for seed derivation; fixed so results never depend on code
// path ordering.
constexpr std::uint64_t kStreamCombo = 0x10;
constexpr std::uint64_t kStreamInstance = 0x20;
constexpr std::uint64_t kStreamRun = 0x30;

std::int64_t sample_int(Rng& rng, const ParamRange& range) {
    return rng.uniform_int(static_cast<std::int64_t>(std::llround(range.lo)),
                           static_cast<std::int64_t>(std::llround(range.hi)));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

Step kappa_for(Step T) {
    const Step ceil_04T = (2 * T + 4) / 5;  // ceil(0.4 T) without float dust
    return std::max<Step>(40, ceil_04T);
}

void BatchConfig::validate() const {
    auto check_range = [](const ParamRange& r, const char* name) {
        if (r.lo > r.hi) throw std::invalid_argument(std::string("batch: empty range for ") + name);
    };
    check_range(T_range, "T");
    check_range(lambda_range, "lambda");
    check_range(wmax_range, "wmax");
    check_range(dmax_range, "dmax");
    check_range(p_range, "p");
    if (combinations < 1) throw std::invalid_argument("batch: combinations must be >= 1");
    if (reps < 1) throw std::invalid_argument("batch: reps must be >= 1");
    if (policies.empty()) throw std::invalid_argument("batch: need at least one policy");
    if (jobs < 1) throw std::invalid_argument("batch: jobs must be >= 1");
    for (const PolicySpec& spec : policies) spec.validate();
}

namespace {

BatchRecord run_combination(const BatchConfig& config, int combo) {
    Rng combo_rng(derive_seed(config.master_seed, {kStreamCombo, static_cast<std::uint64_t>(combo)}));

    BatchRecord record;
    record.combo = combo;
    record.scenario = config.label;
    record.T = sample_int(combo_rng, config.T_range);
    record.lambda = combo_rng.uniform_real(config.lambda_range.lo, config.lambda_range.hi);
    record.w_max = sample_int(combo_rng, config.wmax_range);
    record.d_max = sample_int(combo_rng, config.dmax_range);
    record.bimodal_p = combo_rng.uniform_real(config.p_range.lo, config.p_range.hi);
    record.has_p = config.model == ArrivalModel::Model2;
    record.kappa = kappa_for(record.T);

    const Step t_end = record.kappa + record.T;
    const Window window{record.kappa + 1, t_end};

    // Locate the reference policies once.
    std::size_t mg_index = config.policies.size(), mlp_index = config.policies.size();
    for (std::size_t i = 0; i < config.policies.size(); ++i) {
        if (config.policies[i].kind == PolicyKind::Mg && mg_index == config.policies.size())
            mg_index = i;
        if (config.policies[i].kind == PolicyKind::Mlp && mlp_index == config.policies.size())
            mlp_index = i;
    }
    const std::size_t nbar_source = mg_index < config.policies.size() ? mg_index : 0;
    const double psi_divisor =
        mg_index < config.policies.size() ? config.policies[mg_index].divisor : kGoldenRatio;

    // Deterministic policies make literal repetitions identical, so the
    // literal protocol evaluates once and the mean equals the single run.
    const int reps = config.fresh_instance_reps ? config.reps : 1;

    std::vector<double> zeta_sum(config.policies.size(), 0.0);
    std::vector<double> rho_sum(config.policies.size(), 0.0);
    double zeta_off_sum = 0.0, nbar_sum = 0.0, psi_sum = 0.0;
    int psi_count = 0;

    for (int rep = 0; rep < reps; ++rep) {
        GenConfig gen;
        gen.T = record.T;
        gen.lambda = record.lambda;
        gen.w_max = record.w_max;
        gen.d_max = record.d_max;
        gen.model = config.model;
        gen.bimodal_p = record.bimodal_p;
        gen.kappa = record.kappa;
        gen.seed = derive_seed(config.master_seed, {kStreamInstance,
                                                    static_cast<std::uint64_t>(combo),
                                                    static_cast<std::uint64_t>(rep)});
        record.instance_seeds.push_back(gen.seed);

        Instance inst = generate(gen);
        if (config.weight_by_deadline) inst = scenario1(inst);

        const OfflineResult off = offline_optimum(inst, t_end, window, config.offline_mode);
        zeta_off_sum += off.zeta_off;

        for (std::size_t i = 0; i < config.policies.size(); ++i) {
            PolicySpec spec = config.policies[i];
            if (spec.kind == PolicyKind::Lmg && spec.lmg_epoch < 1)
                spec.lmg_epoch = lmg_epoch_length(record.T, record.lambda);
            const std::uint64_t run_seed =
                derive_seed(config.master_seed, {kStreamRun, static_cast<std::uint64_t>(combo),
                                                 static_cast<std::uint64_t>(rep), i});
            const RunResult rr = psched::run(spec, inst, t_end, window, run_seed);
            zeta_sum[i] += rr.zeta;
            if (off.zeta_off > 0.0)
                rho_sum[i] += rr.zeta / off.zeta_off;
            else
                rho_sum[i] += rr.zeta == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
            if (i == nbar_source) nbar_sum += window_mean_occupancy(rr);
        }

        if (const auto psi = psi_stat(inst, psi_divisor, t_end)) {
            psi_sum += psi->psi;
            ++psi_count;
        }
    }

    const double inv_reps = 1.0 / static_cast<double>(reps);
    record.zeta_off = zeta_off_sum * inv_reps;
    record.nbar = nbar_sum * inv_reps;
    if (psi_count > 0) record.psi = psi_sum / static_cast<double>(psi_count);
    for (std::size_t i = 0; i < config.policies.size(); ++i) {
        PolicyOutcome outcome;
        outcome.tag = config.policies[i].tag();
        outcome.zeta = zeta_sum[i] * inv_reps;
        outcome.rho = rho_sum[i] * inv_reps;
        if (outcome.rho < 0.0 || outcome.rho > 1.0 + 1e-9) {
            char msg[160];
            std::snprintf(msg, sizeof(msg),
                          "batch combo %d: rho_%s = %.12g violates offline dominance", combo,
                          outcome.tag.c_str(), outcome.rho);
            throw std::logic_error(msg);
        }
        record.policies.push_back(std::move(outcome));
    }
    if (mg_index < config.policies.size() && mlp_index < config.policies.size()) {
        const double zeta_mg = record.policies[mg_index].zeta;
        const double zeta_mlp = record.policies[mlp_index].zeta;
        if (zeta_mg > 0.0)
            record.rho_hat = zeta_mlp / zeta_mg;
        else if (zeta_mlp == 0.0)
            record.rho_hat = 1.0;
    }
    return record;
}

}  // namespace

std::vector<BatchRecord> run_protocol(const BatchConfig& config) {
    config.validate();
    const auto n = static_cast<std::size_t>(config.combinations);
    std::vector<BatchRecord> records(n);
    std::vector<std::exception_ptr> errors(n);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                records[i] = run_combination(config, static_cast<int>(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const int extra = std::min(config.jobs, static_cast<int>(n)) - 1;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(std::max(0, extra)));
    for (int j = 0; j < extra; ++j) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    for (std::size_t i = 0; i < n; ++i)
        if (errors[i]) std::rethrow_exception(errors[i]);
    return records;
}

std::optional<PsiStats> psi_stat(const Instance& inst, double divisor, Step t_end) {
    if (t_end == 0) t_end = inst.horizon;
    if (t_end < 1) return std::nullopt;

    PsiStats stats;
    Step indicator_true = 0, chose_h = 0;
    const Selector selector = [&](const Buffer& buf, const StepContext&) {
        const EhChoice eh = select_eh(buf);
        ++stats.nonempty_steps;
        if (eh.psi_indicator()) ++indicator_true;
        const PacketId pick = eh.w_e >= eh.w_h / divisor ? eh.e : eh.h;
        if (pick == eh.h && eh.h != eh.e) ++chose_h;
        return pick;
    };
    run_with_selector(inst, t_end, Window{1, t_end}, selector);

    if (stats.nonempty_steps == 0) return std::nullopt;
    stats.psi = static_cast<double>(indicator_true) / static_cast<double>(stats.nonempty_steps);
    stats.choice_freq_h = static_cast<double>(chose_h) / static_cast<double>(stats.nonempty_steps);
    return stats;
}

BatchConfig scenario_presets(const std::string& name) {
    BatchConfig config;
    if (name == "S1") {
        config.label = "S1";
        config.T_range = {200, 200};
        config.lambda_range = {0.7, 20};
        config.wmax_range = {1, 20};
        config.dmax_range = {1, 40};
        config.model = ArrivalModel::Model1;
        config.weight_by_deadline = true;
    } else if (name == "S2") {
        config.label = "S2";
        config.T_range = {50, 750};
        config.lambda_range = {0.5, 50};
        config.wmax_range = {2, 50};
        config.dmax_range = {1, 50};
        config.model = ArrivalModel::Model1;
    } else if (name == "S3") {
        config.label = "S3";
        config.T_range = {100, 300};
        config.lambda_range = {0.7, 6};
        config.wmax_range = {2, 7};
        config.dmax_range = {0, 0};  // unused under the bimodal model
        config.p_range = {0.75, 0.95};
        config.model = ArrivalModel::Model2;
    } else {
        throw std::invalid_argument("unknown scenario preset: " + name + " (expected S1|S2|S3)");
    }
    return config;
}

void emit_csv(const std::vector<BatchRecord>& records,
              const std::vector<std::string>& policy_tags, std::ostream& out) {
    out << "scenario,T,lambda,wmax,dmax,p,kappa,nbar,psi,zeta_off";
    for (const std::string& tag : policy_tags) out << ",zeta_" << tag;
    for (const std::string& tag : policy_tags) out << ",rho_" << tag;
    out << ",rho_hat,combo,seed\n";

    for (const BatchRecord& record : records) {
        if (record.policies.size() != policy_tags.size())
            throw std::invalid_argument("emit_csv: record does not match the policy tag list");
        out << record.scenario << ',' << record.T << ',' << format_double(record.lambda) << ','
            << record.w_max << ',' << record.d_max << ',';
        if (record.has_p) out << format_double(record.bimodal_p);
        out << ',' << record.kappa << ',' << format_double(record.nbar) << ',';
        if (record.psi) out << format_double(*record.psi);
        out << ',' << format_double(record.zeta_off);
        for (const PolicyOutcome& outcome : record.policies)
            out << ',' << format_double(outcome.zeta);
        for (const PolicyOutcome& outcome : record.policies)
            out << ',' << format_double(outcome.rho);
        out << ',';
        if (record.rho_hat) out << format_double(*record.rho_hat);
        out << ',' << record.combo << ','
            << (record.instance_seeds.empty() ? 0 : record.instance_seeds.front()) << '\n';
    }
}

void emit_runlog(const BatchConfig& config, const std::vector<BatchRecord>& records,
                 std::ostream& out) {
    out << "master_seed=" << config.master_seed << " combinations=" << config.combinations
        << " reps=" << config.reps << " fresh=" << (config.fresh_instance_reps ? 1 : 0) << '\n';
    for (const BatchRecord& record : records) {
        out << "combo=" << record.combo << " T=" << record.T
            << " lambda=" << format_double(record.lambda) << " wmax=" << record.w_max
            << " dmax=" << record.d_max;
        if (record.has_p) out << " p=" << format_double(record.bimodal_p);
        out << " kappa=" << record.kappa << " instance_seeds=";
        for (std::size_t i = 0; i < record.instance_seeds.size(); ++i) {
            if (i) out << ',';
            out << record.instance_seeds[i];
        }
        out << '\n';
    }
}

Aggregate aggregate(const std::vector<double>& values) {
    Aggregate agg;
    agg.count = static_cast<std::int64_t>(values.size());
    if (values.empty()) return agg;
    double sum = 0.0;
    for (double v : values) sum += v;
    agg.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
        agg.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return agg;
}

BatchSummary summarize(const std::vector<BatchRecord>& records) {
    BatchSummary summary;
    if (records.empty()) return summary;
    for (std::size_t i = 0; i < records.front().policies.size(); ++i) {
        std::vector<double> rhos;
        rhos.reserve(records.size());
        for (const BatchRecord& record : records) rhos.push_back(record.policies[i].rho);
        summary.rho.emplace_back(records.front().policies[i].tag, aggregate(rhos));
    }
    std::vector<double> hats;
    for (const BatchRecord& record : records)
        if (record.rho_hat) hats.push_back(*record.rho_hat);
    summary.rho_hat = aggregate(hats);
    return summary;
}

}  // namespace psched
