#pragma once

#include <psched/assignment.hpp>
#include <psched/policies.hpp>
#include <psched/workload.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace psched {

/// Warmup length: max(40, ceil(0.4 * T)), computed in exact integer arithmetic.
Step kappa_for(Step T);

struct ParamRange {
    double lo = 0.0;
    double hi = 0.0;
};

/// A batch: sampled parameter combinations, each run under every policy and
/// compared against the offline optimum over the post-warmup window.
struct BatchConfig {
    std::string label = "plain";  // CSV scenario column
    ParamRange T_range{200, 200};
    ParamRange lambda_range{0.7, 20};
    ParamRange wmax_range{1, 20};
    ParamRange dmax_range{1, 40};
    ParamRange p_range{0.75, 0.95};
    ArrivalModel model = ArrivalModel::Model1;
    bool weight_by_deadline = false;  // multiply weights by deadlines post-generation
    int combinations = 50;
    int reps = 20;
    // Literal protocol repeats the same instance (identical for deterministic
    // policies); fresh repetitions regenerate arrivals per repetition.
    bool fresh_instance_reps = false;
    std::vector<PolicySpec> policies{PolicySpec{PolicyKind::Mg}, PolicySpec{PolicyKind::Mlp}};
    std::uint64_t master_seed = 1;
    int jobs = 1;
    OfflineWindowMode offline_mode = OfflineWindowMode::CountOnly;

    void validate() const;
};

struct PolicyOutcome {
    std::string tag;
    double zeta = 0.0;  // mean over repetitions
    double rho = 0.0;   // mean over repetitions of zeta / zeta_off
};

struct BatchRecord {
    int combo = 0;
    std::string scenario;
    Step T = 0;
    double lambda = 0.0;
    std::int64_t w_max = 0;
    std::int64_t d_max = 0;
    bool has_p = false;
    double bimodal_p = 0.0;
    Step kappa = 0;
    double nbar = 0.0;
    std::optional<double> psi;
    double zeta_off = 0.0;  // mean over repetitions
    std::vector<PolicyOutcome> policies;
    std::optional<double> rho_hat;  // zeta_mlp / zeta_mg when both policies ran
    std::vector<std::uint64_t> instance_seeds;
};

/// Run the full batch protocol. Deterministic for a fixed master seed and
/// independent of the job count; records are ordered by combination index.
std::vector<BatchRecord> run_protocol(const BatchConfig& config);

struct PsiStats {
    double psi = 0.0;            // fraction of nonempty steps with w_h > 1.618 w_e
    double choice_freq_h = 0.0;  // fraction of nonempty steps where the rule sent h != e
    Step nonempty_steps = 0;
};

/// Runs the ratio rule over steps 1..t_end (instance horizon when t_end == 0);
/// absent when no step had a nonempty buffer.
std::optional<PsiStats> psi_stat(const Instance& inst, double divisor, Step t_end = 0);

/// Paper parameter spaces, desk-scale counts. Accepts "S1", "S2" or "S3".
BatchConfig scenario_presets(const std::string& name);

/// Fixed column order, floats with 6 significant digits, byte-identical for
/// identical inputs. `policy_tags` defines the per-policy columns (needed for
/// header-only output when `records` is empty).
void emit_csv(const std::vector<BatchRecord>& records,
              const std::vector<std::string>& policy_tags, std::ostream& out);

/// One line per combination with the seeds needed for exact replay.
void emit_runlog(const BatchConfig& config, const std::vector<BatchRecord>& records,
                 std::ostream& out);

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
    std::int64_t count = 0;
};

Aggregate aggregate(const std::vector<double>& values);

struct BatchSummary {
    std::vector<std::pair<std::string, Aggregate>> rho;  // per policy tag
    Aggregate rho_hat;
};

BatchSummary summarize(const std::vector<BatchRecord>& records);

}  // namespace psched
