// Command-line front end: generators, single runs, scenario batches, the psi
// study, the tandem and buffer-sizing experiments, and the hard-instance
// fixture. Every run is reproducible from the echoed effective config.

#include <psched/harness.hpp>
#include <psched/policies.hpp>
#include <psched/sizing.hpp>
#include <psched/svg.hpp>
#include <psched/tandem.hpp>
#include <psched/workload.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace psched;

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Double-valued options echo into the effective config at full precision so
// replaying the file reproduces the run bit for bit.
CLI::Option* add_double_option(CLI::App* cmd, const std::string& name, double& var,
                               const std::string& desc) {
    return cmd->add_option(name, var, desc)->default_str(fmt17(var));
}

std::string strip(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

// Flat key=value config support: `--config FILE` is resolved before CLI11
// parsing by splicing the file's entries in as `--key=value` tokens right
// after the subcommand, so explicit flags (which come later) override the
// file. This is also what makes the echoed effective config replayable.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> rest;
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config") {
            if (i + 1 >= argc) throw std::invalid_argument("--config needs a file path");
            config_path = argv[++i];
        } else if (arg.rfind("--config=", 0) == 0) {
            config_path = arg.substr(9);
        } else {
            rest.push_back(arg);
        }
    }
    if (config_path.empty()) return rest;

    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + config_path);
    std::vector<std::string> file_tokens;
    std::string line;
    while (std::getline(in, line)) {
        const std::string entry = strip(line);
        if (entry.empty() || entry[0] == '#' || entry[0] == '[') continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config file: expected key=value, got: " + entry);
        const std::string key = strip(entry.substr(0, eq));
        std::string value = strip(entry.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (value.empty()) continue;  // empty equals the default for every option
        file_tokens.push_back("--" + key + "=" + value);
    }

    std::vector<std::string> args;
    if (!rest.empty()) {
        args.push_back(rest.front());  // the subcommand
        args.insert(args.end(), file_tokens.begin(), file_tokens.end());
        args.insert(args.end(), rest.begin() + 1, rest.end());
    } else {
        args = std::move(file_tokens);
    }
    return args;
}

struct GenFlags {
    Step T = 200;
    double lambda = 5.0;
    std::int64_t w_max = 20;
    std::int64_t d_max = 20;
    int model = 1;
    double p = 0.85;
    Step kappa = -1;  // -1: derive kappa_for(T)
    std::uint64_t seed = 1;

    GenConfig to_config() const {
        GenConfig gen;
        gen.T = T;
        gen.lambda = lambda;
        gen.w_max = w_max;
        gen.d_max = d_max;
        gen.model = model == 2 ? ArrivalModel::Model2 : ArrivalModel::Model1;
        gen.bimodal_p = p;
        gen.kappa = kappa < 0 ? kappa_for(T) : kappa;
        gen.seed = seed;
        return gen;
    }
};

void add_gen_flags(CLI::App* cmd, GenFlags& flags) {
    cmd->add_option("--T", flags.T, "arrival steps (before warmup)");
    add_double_option(cmd, "--lambda", flags.lambda, "Poisson arrival rate per step");
    cmd->add_option("--wmax", flags.w_max, "weights are uniform integers in {1..wmax}");
    cmd->add_option("--dmax", flags.d_max, "Model-1 slack is uniform in {0..dmax}");
    cmd->add_option("--model", flags.model, "arrival model: 1 uniform slack, 2 bimodal")
        ->check(CLI::IsMember({1, 2}));
    add_double_option(cmd, "--p", flags.p, "Model-2 mixture weight of the early peak");
    cmd->add_option("--kappa", flags.kappa, "warmup steps (default max(40, ceil(0.4 T)))");
    cmd->add_option("--seed", flags.seed, "master seed");
}

struct PolicyFlags {
    std::string policy = "mg";
    double phi = kGoldenRatio;
    double alpha = kGoldenRatio;
    double nbar_threshold = 10.0;
    double mm_ewma = 0.0;
    double lmg_alpha = 0.5;
    Step lmg_f = 0;
    double smmg_p = 0.85;
    bool smmg_include_ties = false;
};

void add_policy_param_flags(CLI::App* cmd, PolicyFlags& flags) {
    add_double_option(cmd, "--phi", flags.phi, "ratio-rule divisor (default golden ratio)");
    add_double_option(cmd, "--alpha", flags.alpha, "edf admission factor (>= 1)");
    add_double_option(cmd, "--nbar-threshold", flags.nbar_threshold, "mm occupancy threshold");
    add_double_option(cmd, "--mm-ewma", flags.mm_ewma, "mm: use EWMA occupancy with this factor");
    add_double_option(cmd, "--lmg-alpha", flags.lmg_alpha, "lmg smoothing factor in [0,1]");
    cmd->add_option("--lmg-f", flags.lmg_f, "lmg epoch length (default from T and lambda)");
    add_double_option(cmd, "--smmg-p", flags.smmg_p, "smmg weight fraction in (0,1)");
    cmd->add_flag("--smmg-include-ties", flags.smmg_include_ties,
                  "smmg: let s share the top weight level");
}

PolicySpec make_spec(const PolicyFlags& flags, const std::string& kind_tag) {
    PolicySpec spec;
    spec.kind = policy_kind_from_string(kind_tag);
    spec.divisor = flags.phi;
    spec.edf_alpha = flags.alpha;
    spec.mm_threshold = flags.nbar_threshold;
    spec.mm_ewma = flags.mm_ewma;
    spec.lmg_smoothing = flags.lmg_alpha;
    spec.lmg_epoch = flags.lmg_f;
    spec.smmg_fraction = flags.smmg_p;
    spec.smmg_include_ties = flags.smmg_include_ties;
    spec.validate();
    return spec;
}

ParamRange parse_range(const std::string& text, const char* name) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            const double v = std::stod(text);
            return {v, v};
        }
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(name) + ": expected `lo:hi`, got " + text);
    }
}

void write_effective_config(CLI::App* cmd, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir + "/effective_config.txt");
    if (!out) throw std::runtime_error("cannot write " + out_dir + "/effective_config.txt");
    out << cmd->config_to_str(true, false);
}

// ---------------------------------------------------------------- gen ------

struct GenCmd {
    GenFlags gen;
    bool agreeable = false;
    bool apply_scenario1 = false;
    std::string out;

    int execute() const {
        GenConfig config = gen.to_config();
        Instance inst = agreeable ? generate_agreeable(config) : generate(config);
        if (apply_scenario1) inst = scenario1(inst);
        if (out.empty()) {
            save_instance(inst, std::cout);
        } else {
            save_instance_file(inst, out);
            std::cout << "packets=" << inst.packets.size() << " horizon=" << inst.horizon
                      << " file=" << out << "\n";
        }
        return kExitOk;
    }
};

// ---------------------------------------------------------------- run ------

struct RunCmd {
    GenFlags gen;
    PolicyFlags policy;
    std::string instance_path;
    Step t_end = 0;
    Step window_first = 0;
    Step window_last = 0;
    std::string out;
    std::string offline_schedule_path;
    bool offline_restrict = false;

    int execute(CLI::App* cmd) const {
        Instance inst;
        Step end = t_end;
        Window window{window_first, window_last};
        PolicySpec spec = make_spec(policy, policy.policy);

        if (!instance_path.empty()) {
            inst = load_instance_file(instance_path);
            if (end == 0) end = std::max<Step>({inst.horizon, inst.max_deadline(), 1});
            if (window.first == 0) window = {1, end};
            if (spec.kind == PolicyKind::Lmg && spec.lmg_epoch < 1)
                throw std::invalid_argument(
                    "run: lmg on an external instance needs --lmg-f (no T/lambda to derive from)");
        } else {
            const GenConfig config = gen.to_config();
            inst = generate(config);
            if (end == 0) end = config.total_steps();
            if (window.first == 0) window = {config.kappa + 1, config.total_steps()};
            if (spec.kind == PolicyKind::Lmg && spec.lmg_epoch < 1)
                spec.lmg_epoch = lmg_epoch_length(config.T, config.lambda);
        }

        const RunResult rr = run(spec, inst, end, window, gen.seed);
        std::string sends_path = "-";
        if (!out.empty()) {
            write_effective_config(cmd, out);
            sends_path = out + "/sends.txt";
            std::ofstream sends(sends_path);
            if (!sends) throw std::runtime_error("cannot write " + sends_path);
            for (const auto& [t, id] : rr.sent) sends << t << ' ' << id << '\n';
        }
        if (!offline_schedule_path.empty()) {
            const OfflineResult off = offline_optimum(
                inst, end, window,
                offline_restrict ? OfflineWindowMode::Restrict : OfflineWindowMode::CountOnly);
            std::ofstream sched(offline_schedule_path);
            if (!sched) throw std::runtime_error("cannot write " + offline_schedule_path);
            sched << "H=" << inst.horizon << '\n';
            char buf[64];
            for (const Packet& p : inst.packets) {
                std::snprintf(buf, sizeof(buf), "%.17g", p.weight);
                const auto it = off.schedule.assigned.find(p.id);
                sched << p.id << ' ' << p.release << ' ' << p.deadline << ' ' << buf << " @";
                if (it == off.schedule.assigned.end())
                    sched << '-';
                else
                    sched << it->second;
                sched << '\n';
            }
        }
        std::cout << "policy=" << spec.tag() << " zeta=" << fmt6(rr.zeta)
                  << " zeta_total=" << fmt6(rr.zeta_total)
                  << " nbar=" << fmt6(window_mean_occupancy(rr)) << " sends=" << sends_path
                  << "\n";
        return kExitOk;
    }
};

// ---------------------------------------------------------------- batch ----

struct BatchCmd {
    std::string scenario;
    std::string label;
    std::string T_range = "200:200", lambda_range = "0.7:20", wmax_range = "1:20",
                dmax_range = "1:40", p_range = "0.75:0.95";
    int model = 1;
    bool apply_scenario1 = false;
    int combos = 0;
    int reps = 0;
    bool fresh = false;
    std::string policies_csv;
    PolicyFlags policy_params;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string out;
    bool svg = false;
    bool offline_restrict = false;

    BatchConfig to_config() const {
        BatchConfig config;
        if (!scenario.empty()) config = scenario_presets(scenario);
        if (scenario.empty() || !label.empty()) config.label = label.empty() ? "plain" : label;
        if (scenario.empty()) {
            config.T_range = parse_range(T_range, "--T-range");
            config.lambda_range = parse_range(lambda_range, "--lambda-range");
            config.wmax_range = parse_range(wmax_range, "--wmax-range");
            config.dmax_range = parse_range(dmax_range, "--dmax-range");
            config.p_range = parse_range(p_range, "--p-range");
            config.model = model == 2 ? ArrivalModel::Model2 : ArrivalModel::Model1;
            config.weight_by_deadline = apply_scenario1;
        }
        if (combos > 0) config.combinations = combos;
        if (reps > 0) config.reps = reps;
        config.fresh_instance_reps = fresh;
        config.master_seed = seed;
        config.jobs = jobs;
        config.offline_mode =
            offline_restrict ? OfflineWindowMode::Restrict : OfflineWindowMode::CountOnly;
        if (!policies_csv.empty()) {
            config.policies.clear();
            std::stringstream ss(policies_csv);
            std::string tag;
            while (std::getline(ss, tag, ',')) {
                if (tag.empty()) continue;
                config.policies.push_back(make_spec(policy_params, tag));
            }
        }
        return config;
    }

    int execute(CLI::App* cmd) const {
        const BatchConfig config = to_config();
        config.validate();
        if (out.empty()) throw std::invalid_argument("batch: --out directory is required");
        write_effective_config(cmd, out);

        const std::vector<BatchRecord> records = run_protocol(config);

        std::vector<std::string> tags;
        for (const PolicySpec& spec : config.policies) tags.push_back(spec.tag());
        {
            std::ofstream csv(out + "/results.csv");
            if (!csv) throw std::runtime_error("cannot write " + out + "/results.csv");
            emit_csv(records, tags, csv);
        }
        {
            std::ofstream log(out + "/runlog.txt");
            if (!log) throw std::runtime_error("cannot write " + out + "/runlog.txt");
            emit_runlog(config, records, log);
        }
        if (svg) write_plots(records, tags);

        const BatchSummary summary = summarize(records);
        std::cout << "batch " << config.label << ": combos=" << records.size()
                  << " reps=" << config.reps << (config.fresh_instance_reps ? " fresh" : " literal")
                  << "\n";
        for (const auto& [tag, agg] : summary.rho)
            std::cout << "  rho_" << tag << ": mean=" << fmt6(agg.mean)
                      << " stddev=" << fmt6(agg.stddev) << "\n";
        if (summary.rho_hat.count > 0)
            std::cout << "  rho_hat: mean=" << fmt6(summary.rho_hat.mean)
                      << " stddev=" << fmt6(summary.rho_hat.stddev) << "\n";
        std::cout << "  csv=" << out << "/results.csv\n";
        return kExitOk;
    }

    void write_plots(const std::vector<BatchRecord>& records,
                     const std::vector<std::string>& tags) const {
        const std::vector<std::string> palette{"green", "red", "blue", "orange", "purple",
                                               "teal",  "brown"};
        std::vector<SvgSeries> rho_vs_nbar;
        for (std::size_t i = 0; i < tags.size(); ++i) {
            SvgSeries series;
            series.label = "rho_" + tags[i];
            series.color = palette[i % palette.size()];
            for (const BatchRecord& r : records) series.points.push_back({r.nbar, r.policies[i].rho});
            rho_vs_nbar.push_back(std::move(series));
        }
        std::ofstream f1(out + "/rho_vs_nbar.svg");
        write_svg_scatter("rho vs mean occupancy", "nbar", "rho", rho_vs_nbar, f1);

        SvgSeries hat;
        hat.label = "rho_hat";
        hat.color = "black";
        for (const BatchRecord& r : records)
            if (r.rho_hat) hat.points.push_back({r.lambda, *r.rho_hat});
        std::ofstream f2(out + "/rhohat_vs_lambda.svg");
        write_svg_scatter("zeta_mlp / zeta_mg vs lambda", "lambda", "rho_hat", {hat}, f2);
    }
};

// ---------------------------------------------------------------- psi ------

struct PsiCmd {
    GenFlags gen;
    std::string instance_path;
    double divisor = kGoldenRatio;
    bool grid = false;
    int combos = 100;
    std::string group_by = "wmax,dmax";
    std::string out;

    int execute(CLI::App* cmd) const {
        if (!grid) {
            const Instance inst =
                instance_path.empty() ? generate(gen.to_config()) : load_instance_file(instance_path);
            const auto stats = psi_stat(inst, divisor);
            if (!stats) {
                std::cout << "psi=absent (no nonempty steps)\n";
            } else {
                std::cout << "psi=" << fmt6(stats->psi)
                          << " choice_freq_h=" << fmt6(stats->choice_freq_h)
                          << " steps=" << stats->nonempty_steps << "\n";
            }
            return kExitOk;
        }

        // Grid mode: sample combinations over the psi-study ranges, group the
        // per-combination psi values into cells by the chosen keys.
        if (combos < 1) throw std::invalid_argument("psi: --combos must be >= 1");
        const bool key_wmax = group_by.find("wmax") != std::string::npos;
        const bool key_dmax = group_by.find("dmax") != std::string::npos;
        if (!key_wmax && !key_dmax)
            throw std::invalid_argument("psi: --group-by must name wmax, dmax or both");

        std::map<std::pair<std::int64_t, std::int64_t>, std::pair<double, int>> cells;
        for (int c = 0; c < combos; ++c) {
            Rng rng(derive_seed(gen.seed, {0x51, static_cast<std::uint64_t>(c)}));
            GenConfig config = gen.to_config();
            config.lambda = rng.uniform_real(0.7, 20.0);
            config.w_max = rng.uniform_int(1, gen.w_max);
            config.d_max = rng.uniform_int(1, std::max<std::int64_t>(gen.d_max, 1));
            config.seed = derive_seed(gen.seed, {0x52, static_cast<std::uint64_t>(c)});
            const auto stats = psi_stat(generate(config), divisor);
            if (!stats) continue;
            const std::pair<std::int64_t, std::int64_t> key{key_wmax ? config.w_max : 0,
                                                            key_dmax ? config.d_max : 0};
            cells[key].first += stats->psi;
            cells[key].second += 1;
        }

        std::ostream* os = &std::cout;
        std::ofstream file;
        if (!out.empty()) {
            write_effective_config(cmd, out);
            file.open(out + "/psi_cells.csv");
            if (!file) throw std::runtime_error("cannot write " + out + "/psi_cells.csv");
            os = &file;
        }
        *os << (key_wmax ? "wmax," : "") << (key_dmax ? "dmax," : "") << "psi,combos\n";
        for (const auto& [key, acc] : cells) {
            if (key_wmax) *os << key.first << ',';
            if (key_dmax) *os << key.second << ',';
            *os << fmt6(acc.first / acc.second) << ',' << acc.second << '\n';
        }
        return kExitOk;
    }
};

// ---------------------------------------------------------------- tandem ---

struct TandemCmd {
    GenFlags gen;
    PolicyFlags policy;
    int nodes = 3;
    bool no_adjust = false;
    int runs = 1;
    Step t_end = 0;
    std::string out;

    int execute(CLI::App* cmd) const {
        if (nodes < 2) throw std::invalid_argument("tandem: --nodes must be >= 2");
        if (runs < 1) throw std::invalid_argument("tandem: --runs must be >= 1");
        TandemConfig config;
        config.nodes = nodes;
        config.adjust_deadlines = !no_adjust;
        config.gen = gen.to_config();
        PolicySpec spec = make_spec(policy, policy.policy);
        if (spec.kind == PolicyKind::Lmg && spec.lmg_epoch < 1)
            spec.lmg_epoch = lmg_epoch_length(config.gen.T, config.gen.lambda);
        config.node_policies = {spec};

        const Step end = t_end > 0 ? t_end
                                   : config.gen.total_steps() + config.gen.d_max + nodes;
        const Window window{1, end};

        std::ofstream csv;
        if (!out.empty()) {
            write_effective_config(cmd, out);
            csv.open(out + "/tandem.csv");
            if (!csv) throw std::runtime_error("cannot write " + out + "/tandem.csv");
            csv << "run,node,zeta,dropped\n";
        }

        std::vector<double> mean_zeta(static_cast<std::size_t>(nodes), 0.0);
        for (int r = 0; r < runs; ++r) {
            config.gen.seed = derive_seed(gen.seed, {0x70, static_cast<std::uint64_t>(r)});
            const TandemResult result = run_tandem(config, end, window);
            for (int k = 0; k < nodes; ++k) {
                mean_zeta[static_cast<std::size_t>(k)] +=
                    result.zeta[static_cast<std::size_t>(k)] / runs;
                if (csv.is_open())
                    csv << r << ',' << (k + 1) << ','
                        << fmt6(result.zeta[static_cast<std::size_t>(k)]) << ','
                        << result.dropped[static_cast<std::size_t>(k)] << '\n';
            }
        }
        std::cout << "tandem nodes=" << nodes << " adjust=" << (config.adjust_deadlines ? 1 : 0)
                  << " runs=" << runs << "\n";
        for (int k = 0; k < nodes; ++k)
            std::cout << "  node" << (k + 1) << (k + 1 == nodes ? " (sink)" : "")
                      << " zeta=" << fmt6(mean_zeta[static_cast<std::size_t>(k)]) << "\n";
        return kExitOk;
    }
};

// ---------------------------------------------------------------- sizing ---

struct BufferSizeCmd {
    std::vector<double> lambdas{100.0};
    double target = 1e-6;
    Step run_length = 10'000'000;
    std::uint64_t seed = 1;
    std::string out;

    int execute(CLI::App* cmd) const {
        std::ofstream csv;
        if (!out.empty()) {
            write_effective_config(cmd, out);
            csv.open(out + "/buffersize.csv");
            if (!csv) throw std::runtime_error("cannot write " + out + "/buffersize.csv");
            csv << "lambda,b,ratio,warning\n";
        }
        for (double lambda : lambdas) {
            const SizingResult r = buffer_size_study(lambda, target, run_length, seed);
            std::cout << "lambda=" << fmt6(lambda) << " b=" << r.b << " ratio=" << fmt6(r.ratio)
                      << (r.resolution_warning ? " (run too short to resolve target)" : "")
                      << "\n";
            if (csv.is_open())
                csv << fmt6(lambda) << ',' << r.b << ',' << fmt6(r.ratio) << ','
                    << (r.resolution_warning ? 1 : 0) << '\n';
        }
        return kExitOk;
    }
};

// ---------------------------------------------------------------- fixture --

struct HardInstanceCmd {
    double w1 = 1.0;
    double w2 = 100.0;

    int execute() const {
        const Instance inst = hard_instance(w1, w2);
        const Window window{1, 2};
        const RunResult mlp = run(PolicySpec{PolicyKind::Mlp}, inst, 2, window);
        const RunResult mg = run(PolicySpec{PolicyKind::Mg}, inst, 2, window);
        const OfflineResult off = offline_optimum(inst, 2, window);
        std::printf("MLP=%s MG=%s OFF=%s\n", fmt6(mlp.zeta).c_str(), fmt6(mg.zeta).c_str(),
                    fmt6(off.zeta_off).c_str());
        if (w1 < w2 / kGoldenRatio) {
            const bool ok =
                mlp.zeta == w1 + w2 && mg.zeta == 2 * w2 && off.zeta_off == 2 * w2;
            if (!ok) {
                std::cerr << "hardinstance: expected MLP=w1+w2 and MG=OFF=2*w2\n";
                return kExitInvariant;
            }
        }
        return kExitOk;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"packet scheduling simulation lab"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default(true);
    // later occurrences win, so command-line flags override config-file entries
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string config_help;
    for (const char* name : {"gen", "run", "batch", "psi", "tandem", "buffersize"})
        (void)name;

    GenCmd gen_cmd;
    auto* gen_sub = app.add_subcommand("gen", "generate an instance file");
    gen_sub->add_option("--config", config_help, "flat key=value config file; flags override it")
        ->configurable(false);
    add_gen_flags(gen_sub, gen_cmd.gen);
    gen_sub->add_flag("--agreeable", gen_cmd.agreeable, "reassign deadlines agreeably");
    gen_sub->add_flag("--scenario1", gen_cmd.apply_scenario1, "multiply weights by deadlines");
    gen_sub->add_option("--out", gen_cmd.out, "output file (default stdout)");

    RunCmd run_cmd;
    auto* run_sub = app.add_subcommand("run", "run one policy on one instance");
    run_sub->add_option("--config", config_help, "flat key=value config file; flags override it")
        ->configurable(false);
    add_gen_flags(run_sub, run_cmd.gen);
    run_sub->add_option("--policy", run_cmd.policy.policy,
                        "mg|greedy|edf|mlp|mm|lmg|smmg");
    add_policy_param_flags(run_sub, run_cmd.policy);
    run_sub->add_option("--instance", run_cmd.instance_path, "load instance instead of generating");
    run_sub->add_option("--t-end", run_cmd.t_end, "last simulated step");
    run_sub->add_option("--window-first", run_cmd.window_first, "first counted step");
    run_sub->add_option("--window-last", run_cmd.window_last, "last counted step");
    run_sub->add_option("--out", run_cmd.out, "output directory for the send log");
    run_sub->add_option("--offline-schedule", run_cmd.offline_schedule_path,
                        "also dump the offline schedule (`id r d w @slot`)");
    run_sub->add_flag("--offline-restrict-window", run_cmd.offline_restrict,
                      "offline baseline optimizes window slots only");

    BatchCmd batch_cmd;
    auto* batch_sub = app.add_subcommand("batch", "run a scenario batch and emit CSV");
    batch_sub->add_option("--config", config_help, "flat key=value config file; flags override it")
        ->configurable(false);
    batch_sub->add_option("--scenario", batch_cmd.scenario, "preset: S1, S2 or S3");
    batch_sub->add_option("--label", batch_cmd.label, "scenario column for custom batches");
    batch_sub->add_option("--T-range", batch_cmd.T_range, "custom T range lo:hi");
    batch_sub->add_option("--lambda-range", batch_cmd.lambda_range, "custom lambda range lo:hi");
    batch_sub->add_option("--wmax-range", batch_cmd.wmax_range, "custom wmax range lo:hi");
    batch_sub->add_option("--dmax-range", batch_cmd.dmax_range, "custom dmax range lo:hi");
    batch_sub->add_option("--p-range", batch_cmd.p_range, "custom bimodal-p range lo:hi");
    batch_sub->add_option("--model", batch_cmd.model, "custom batches: arrival model 1|2")
        ->check(CLI::IsMember({1, 2}));
    batch_sub->add_flag("--scenario1-transform", batch_cmd.apply_scenario1,
                        "custom batches: multiply weights by deadlines");
    batch_sub->add_option("--combos", batch_cmd.combos, "sampled parameter combinations")
        ->check(CLI::Range(1, 1000000));
    batch_sub->add_option("--reps", batch_cmd.reps, "repetitions per combination")
        ->check(CLI::Range(1, 1000000));
    batch_sub->add_flag("--fresh-instance-reps", batch_cmd.fresh,
                        "regenerate arrivals for every repetition");
    batch_sub->add_option("--policies", batch_cmd.policies_csv,
                          "comma-separated policy list (default mg,mlp)");
    add_policy_param_flags(batch_sub, batch_cmd.policy_params);
    batch_sub->add_option("--seed", batch_cmd.seed, "master seed");
    batch_sub->add_option("--jobs", batch_cmd.jobs, "parallel combinations");
    batch_sub->add_option("--out", batch_cmd.out, "output directory")->required();
    batch_sub->add_flag("--svg", batch_cmd.svg, "also write scatter plots");
    batch_sub->add_flag("--offline-restrict-window", batch_cmd.offline_restrict,
                        "offline baseline optimizes window slots only");

    PsiCmd psi_cmd;
    auto* psi_sub = app.add_subcommand("psi", "h-vs-e preference statistic");
    psi_sub->add_option("--config", config_help, "flat key=value config file; flags override it")
        ->configurable(false);
    add_gen_flags(psi_sub, psi_cmd.gen);
    psi_sub->add_option("--instance", psi_cmd.instance_path, "load instance instead of generating");
    add_double_option(psi_sub, "--divisor", psi_cmd.divisor, "ratio-rule divisor");
    psi_sub->add_flag("--grid", psi_cmd.grid, "sample a parameter grid and group psi into cells");
    psi_sub->add_option("--combos", psi_cmd.combos, "grid mode: sampled combinations");
    psi_sub->add_option("--group-by", psi_cmd.group_by, "grid mode: wmax, dmax or wmax,dmax");
    psi_sub->add_option("--out", psi_cmd.out, "grid mode: output directory");

    TandemCmd tandem_cmd;
    auto* tandem_sub = app.add_subcommand("tandem", "multi-node chain experiment");
    tandem_sub->add_option("--config", config_help, "flat key=value config file; flags override it")
        ->configurable(false);
    add_gen_flags(tandem_sub, tandem_cmd.gen);
    tandem_sub->add_option("--policy", tandem_cmd.policy.policy, "per-node policy");
    add_policy_param_flags(tandem_sub, tandem_cmd.policy);
    tandem_sub->add_option("--nodes", tandem_cmd.nodes, "chain length including the sink");
    tandem_sub->add_flag("--no-adjust", tandem_cmd.no_adjust,
                         "disable the per-hop temporary deadline");
    tandem_sub->add_option("--runs", tandem_cmd.runs, "seeded runs to average");
    tandem_sub->add_option("--t-end", tandem_cmd.t_end, "last simulated step");
    tandem_sub->add_option("--out", tandem_cmd.out, "output directory");

    BufferSizeCmd sizing_cmd;
    auto* sizing_sub = app.add_subcommand("buffersize", "occupancy tail sizing study");
    sizing_sub->add_option("--config", config_help, "flat key=value config file; flags override it")
        ->configurable(false);
    sizing_sub->add_option("--lambda", sizing_cmd.lambdas, "arrival rates (repeatable)")
        ->take_all();
    add_double_option(sizing_sub, "--target", sizing_cmd.target, "exceedance probability target");
    sizing_sub->add_option("--run-length", sizing_cmd.run_length, "steps to simulate");
    sizing_sub->add_option("--seed", sizing_cmd.seed, "master seed");
    sizing_sub->add_option("--out", sizing_cmd.out, "output directory");

    HardInstanceCmd hard_cmd;
    auto* hard_sub = app.add_subcommand("hardinstance", "three-packet fixture throughputs");
    add_double_option(hard_sub, "--w1", hard_cmd.w1, "weight of the early-deadline packet");
    add_double_option(hard_sub, "--w2", hard_cmd.w2, "weight of the two heavy packets");

    int rc = kExitOk;
    gen_sub->callback([&] { rc = gen_cmd.execute(); });
    run_sub->callback([&] { rc = run_cmd.execute(run_sub); });
    batch_sub->callback([&] { rc = batch_cmd.execute(batch_sub); });
    psi_sub->callback([&] { rc = psi_cmd.execute(psi_sub); });
    tandem_sub->callback([&] { rc = tandem_cmd.execute(tandem_sub); });
    sizing_sub->callback([&] { rc = sizing_cmd.execute(sizing_sub); });
    hard_sub->callback([&] { rc = hard_cmd.execute(); });

    try {
        std::vector<std::string> args = expand_config_args(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::logic_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return rc;
}
