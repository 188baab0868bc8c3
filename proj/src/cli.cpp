#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qranging/sweep.hpp"

namespace qranging {

namespace {

struct CliOptions {
    std::string config_path;
    std::optional<double> mu, kappa, mu_b, eps;
    std::optional<long long> m, copies, r;
    std::optional<std::uint64_t> trials, seed;
    std::string probe, rule, out, format;
};

void add_common_options(CLI::App* sub, CliOptions& opt, bool wants_mc) {
    sub->add_option("--config", opt.config_path, "JSON sweep config; flags below override it");
    sub->add_option("--mu", opt.mu, "mean signal photons per probe");
    sub->add_option("--kappa", opt.kappa, "round-trip transmissivity");
    sub->add_option("--mu-b", opt.mu_b, "mean background photons per slot");
    sub->add_option("--m", opt.m, "number of range slots");
    sub->add_option("--copies", opt.copies, "probe copies L");
    sub->add_option("--R", opt.r, "signal/idler mode pairs per probe");
    sub->add_option("--eps", opt.eps, "truncation / convergence tolerance");
    sub->add_option("--out", opt.out, "output path (default: stdout)");
    sub->add_option("--format", opt.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    if (wants_mc) {
        sub->add_option("--trials", opt.trials, "Monte Carlo trials per point");
        sub->add_option("--seed", opt.seed, "base RNG seed");
        sub->add_option("--probe", opt.probe, "coherent | tmsv")
            ->check(CLI::IsMember({"coherent", "tmsv"}));
        sub->add_option("--rule", opt.rule, "max-count | idler-correlation")
            ->check(CLI::IsMember({"max-count", "idler-correlation"}));
    }
}

void apply_override(SweepConfig& cfg, const std::string& name, const char* flag,
                    std::optional<double> value) {
    if (!value) return;
    if (cfg.axes.count(name))
        throw std::invalid_argument(std::string(flag) + " conflicts with axis '" + name +
                                    "' from the config");
    cfg.fixed[name] = *value;
}

void require_param(const SweepConfig& cfg, const std::string& name, const char* flag) {
    if (!cfg.fixed.count(name) && !cfg.axes.count(name))
        throw std::invalid_argument(std::string("missing required ") + flag + " for " +
                                    task_name(cfg.task) + " task");
}

SweepConfig assemble_config(Task task, const CliOptions& opt) {
    SweepConfig cfg;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) throw std::invalid_argument("cannot open config file " + opt.config_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        cfg = parse_config(ss.str());
        if (cfg.task != task)
            throw std::invalid_argument("config task '" + task_name(cfg.task) +
                                        "' does not match subcommand '" + task_name(task) + "'");
    } else {
        cfg.task = task;
    }

    apply_override(cfg, "mu", "--mu", opt.mu);
    apply_override(cfg, "kappa", "--kappa", opt.kappa);
    apply_override(cfg, "mu_B", "--mu-b", opt.mu_b);
    apply_override(cfg, "m", "--m", opt.m ? std::optional<double>(*opt.m) : std::nullopt);
    apply_override(cfg, "L", "--copies",
                   opt.copies ? std::optional<double>(*opt.copies) : std::nullopt);
    apply_override(cfg, "R", "--R", opt.r ? std::optional<double>(*opt.r) : std::nullopt);
    if (opt.trials) cfg.trials = *opt.trials;
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.eps) cfg.eps = *opt.eps;
    if (!opt.probe.empty()) cfg.probe = opt.probe;
    if (!opt.rule.empty()) cfg.rule = opt.rule;
    if (!opt.out.empty()) cfg.output_path = opt.out;
    if (!opt.format.empty()) cfg.format = opt.format;

    require_param(cfg, "mu", "--mu");
    require_param(cfg, "kappa", "--kappa");
    require_param(cfg, "mu_B", "--mu-b");
    if (task == Task::SingleShot || task == Task::MonteCarlo || task == Task::Slope)
        require_param(cfg, "m", "--m");
    if (task == Task::Slope) require_param(cfg, "L", "--copies");
    return cfg;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"quantum-vs-coherent target ranging calculations"};
    app.set_version_flag("--version", std::string("qranging ") + kVersion);
    app.require_subcommand(1);

    CliOptions opt;
    struct SubDef {
        Task task;
        const char* name;
        const char* help;
        bool mc;
    };
    const SubDef defs[] = {
        {Task::Exponent, "exponent", "closed-form coherent error exponent", false},
        {Task::Advantage, "advantage", "quantum vs coherent exponent ratio", false},
        {Task::SingleShot, "single-shot", "exact coherent error probability", false},
        {Task::MonteCarlo, "montecarlo", "simulated error probability", true},
        {Task::Slope, "slope", "normalized -ln(p)/L against the exponent", true},
    };
    for (const auto& d : defs) add_common_options(app.add_subcommand(d.name, d.help), opt, d.mc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    SweepConfig cfg;
    try {
        Task task{};
        for (const auto& d : defs)
            if (app.get_subcommand(d.name)->parsed()) task = d.task;
        cfg = assemble_config(task, opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    RunRecord rec;
    try {
        rec = run_sweep(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    // Point errors become error rows during a sweep; for a single point they
    // are the whole result, so surface them as a failure.
    bool any_error = false;
    for (const auto& row : rec.rows)
        if (!row.empty() && !row.back().empty()) {
            std::cerr << "error: " << row.back() << "\n";
            any_error = true;
        }
    if (any_error && rec.rows.size() == 1) return 2;

    const std::string text = cfg.format == "json" ? rec.to_json() : rec.to_csv();
    if (cfg.output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(cfg.output_path);
        if (!out) {
            std::cerr << "error: cannot write " << cfg.output_path << "\n";
            return 2;
        }
        out << text;
        std::cerr << "wrote " << rec.rows.size() << " rows to " << cfg.output_path << " in "
                  << format_value(rec.wall_time_ms) << " ms\n";
    }
    return 0;
}

}  // namespace qranging
