#include "qranging/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "qranging/coherent_exact.hpp"
#include "qranging/info_measures.hpp"
#include "qranging/ranging_sim.hpp"

namespace qranging {

namespace {

using nlohmann::json;

// Canonical parameter order; also the column order of axis columns.
const std::vector<std::string> kParamOrder = {"mu", "kappa", "mu_B", "m", "L", "R"};
const std::vector<std::string> kIntParams = {"m", "L", "R"};

bool is_param(const std::string& name) {
    for (const auto& p : kParamOrder)
        if (p == name) return true;
    return false;
}

bool is_int_param(const std::string& name) {
    for (const auto& p : kIntParams)
        if (p == name) return true;
    return false;
}

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

int resolve_grid_workers() {
    if (const char* env = std::getenv("QRANGING_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string canonical_dump(const SweepConfig& cfg) {
    json j;
    j["task"] = task_name(cfg.task);
    j["axes"] = json::object();
    for (const auto& [k, v] : cfg.axes) j["axes"][k] = v;
    if (!cfg.probe_axis.empty()) j["axes"]["probe"] = cfg.probe_axis;
    j["fixed"] = json::object();
    for (const auto& [k, v] : cfg.fixed) j["fixed"][k] = v;
    j["probe"] = cfg.probe;
    j["rule"] = cfg.rule;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["eps"] = cfg.eps;
    j["format"] = cfg.format;
    return j.dump();
}

// One grid point: every parameter resolved to a scalar.
struct GridPoint {
    std::map<std::string, double> params;
    std::string probe;

    double get(const std::string& name, const char* flag) const {
        auto it = params.find(name);
        if (it == params.end())
            throw ConfigError(std::string("missing required parameter ") + flag);
        return it->second;
    }
    int get_int(const std::string& name, const char* flag) const {
        const double v = get(name, flag);
        if (v != std::floor(v)) throw ConfigError(name + " must be an integer");
        return static_cast<int>(v);
    }
    bool has(const std::string& name) const { return params.count(name) > 0; }
};

DecisionRule rule_from_name(const std::string& name) {
    if (name == "max-count") return DecisionRule::MaxTotalCount;
    if (name == "idler-correlation") return DecisionRule::IdlerCorrelation;
    throw ConfigError("unknown rule '" + name + "' (max-count | idler-correlation)");
}

Probe probe_from_point(const GridPoint& pt, double mu) {
    if (pt.probe == "coherent") return Probe::coherent(mu);
    if (pt.probe == "tmsv") {
        const int r = pt.has("R") ? pt.get_int("R", "--R")
                                  : std::max(1, static_cast<int>(std::ceil(100.0 * mu)));
        return Probe::tmsv(mu, r);
    }
    throw ConfigError("unknown probe '" + pt.probe + "' (coherent | tmsv)");
}

std::vector<std::string> result_columns(Task task) {
    switch (task) {
        case Task::Exponent:
            return {"xi_coh_nats"};
        case Task::Advantage:
            return {"xi_coh_nats", "xi_q_nats", "advantage_q", "q_emp", "r_used"};
        case Task::SingleShot:
            return {"p_err"};
        case Task::MonteCarlo:
            return {"p_hat", "std_err", "ci95_low", "ci95_high", "trials", "seed"};
        case Task::Slope:
            return {"p_hat", "std_err", "norm_log_err", "xi_ref_nats", "trials", "seed"};
    }
    throw std::logic_error("unreachable");
}

std::vector<std::string> evaluate_point(const SweepConfig& cfg, const GridPoint& pt,
                                        std::uint64_t row_seed) {
    switch (cfg.task) {
        case Task::Exponent: {
            const ChannelParams ch(pt.get("kappa", "--kappa"), pt.get("mu_B", "--mu-b"));
            return {format_value(xi_coherent_closed(ch, pt.get("mu", "--mu")))};
        }
        case Task::Advantage: {
            const ChannelParams ch(pt.get("kappa", "--kappa"), pt.get("mu_B", "--mu-b"));
            const ExponentReport rep = quantum_advantage(ch, pt.get("mu", "--mu"), cfg.eps);
            return {format_value(rep.xi_coh), format_value(rep.xi_q), format_value(rep.advantage_q),
                    format_value(rep.q_emp), std::to_string(rep.r_used)};
        }
        case Task::SingleShot: {
            const ExactErrorQuery q(pt.get_int("m", "--m"), pt.get("kappa", "--kappa"),
                                    pt.get("mu", "--mu"), pt.get("mu_B", "--mu-b"));
            return {format_value(p_err_single_shot(q))};
        }
        case Task::MonteCarlo: {
            const double mu = pt.get("mu", "--mu");
            const Scenario s(pt.get_int("m", "--m"), pt.has("L") ? pt.get_int("L", "--copies") : 1,
                             probe_from_point(pt, mu),
                             ChannelParams(pt.get("kappa", "--kappa"), pt.get("mu_B", "--mu-b")));
            const McEstimate est =
                mc_error_probability(s, rule_from_name(cfg.rule), cfg.trials, row_seed);
            return {format_value(est.p_hat), format_value(est.std_err), format_value(est.ci95_low),
                    format_value(est.ci95_high), std::to_string(est.trials), std::to_string(est.seed)};
        }
        case Task::Slope: {
            const double mu = pt.get("mu", "--mu");
            const ChannelParams ch(pt.get("kappa", "--kappa"), pt.get("mu_B", "--mu-b"));
            const Probe probe = probe_from_point(pt, mu);
            const Scenario base(pt.get_int("m", "--m"), 1, probe, ch);
            const SlopeReport rep = slope_report(base, rule_from_name(cfg.rule),
                                                 {pt.get_int("L", "--copies")}, cfg.trials, row_seed);
            const SlopeRow& row = rep.rows.front();
            return {format_value(row.p_hat), format_value(row.std_err),
                    row.needs_more_trials ? "inf" : format_value(row.norm_log_err),
                    format_value(rep.xi_ref), std::to_string(cfg.trials), std::to_string(row_seed)};
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

Task task_from_name(const std::string& name) {
    if (name == "exponent") return Task::Exponent;
    if (name == "advantage") return Task::Advantage;
    if (name == "single-shot") return Task::SingleShot;
    if (name == "montecarlo") return Task::MonteCarlo;
    if (name == "slope") return Task::Slope;
    throw ConfigError("unknown task '" + name + "'");
}

std::string task_name(Task t) {
    switch (t) {
        case Task::Exponent: return "exponent";
        case Task::Advantage: return "advantage";
        case Task::SingleShot: return "single-shot";
        case Task::MonteCarlo: return "montecarlo";
        case Task::Slope: return "slope";
    }
    return "?";
}

std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    if (v != 0.0 && std::abs(v) < 1e-4) {
        std::snprintf(buf, sizeof(buf), "%.10e", v);
    } else {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
    }
    return buf;
}

SweepConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");

    SweepConfig cfg;
    bool saw_task = false;
    for (const auto& [key, value] : j.items()) {
        if (key == "task") {
            cfg.task = task_from_name(value.get<std::string>());
            saw_task = true;
        } else if (key == "axes") {
            if (!value.is_object()) throw ConfigError("axes must be an object");
            for (const auto& [axis, vals] : value.items()) {
                if (axis == "probe") {
                    cfg.probe_axis = vals.get<std::vector<std::string>>();
                    if (cfg.probe_axis.empty()) throw ConfigError("axis 'probe' must not be empty");
                    continue;
                }
                if (!is_param(axis)) throw ConfigError("unknown axis key '" + axis + "'");
                if (!vals.is_array() || vals.empty())
                    throw ConfigError("axis '" + axis + "' must be a non-empty array");
                cfg.axes[axis] = vals.get<std::vector<double>>();
            }
        } else if (key == "fixed") {
            if (!value.is_object()) throw ConfigError("fixed must be an object");
            for (const auto& [name, val] : value.items()) {
                if (!is_param(name)) throw ConfigError("unknown fixed key '" + name + "'");
                cfg.fixed[name] = val.get<double>();
            }
        } else if (key == "probe") {
            cfg.probe = value.get<std::string>();
        } else if (key == "rule") {
            cfg.rule = value.get<std::string>();
        } else if (key == "trials") {
            cfg.trials = value.get<std::uint64_t>();
        } else if (key == "seed") {
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "eps") {
            cfg.eps = value.get<double>();
        } else if (key == "output_path") {
            cfg.output_path = value.get<std::string>();
        } else if (key == "format") {
            cfg.format = value.get<std::string>();
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    if (!saw_task) throw ConfigError("config is missing 'task'");
    for (const auto& [name, _] : cfg.fixed)
        if (cfg.axes.count(name))
            throw ConfigError("parameter '" + name + "' given both as an axis and as fixed");
    if (cfg.format != "csv" && cfg.format != "json")
        throw ConfigError("unknown format '" + cfg.format + "' (csv | json)");
    if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) throw ConfigError("eps must lie in (0, 1)");
    return cfg;
}

RunRecord run_sweep(const SweepConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();

    // Axis names in canonical order give the lexicographic grid order.
    std::vector<std::string> axis_names;
    for (const auto& p : kParamOrder)
        if (cfg.axes.count(p)) axis_names.push_back(p);
    const bool has_probe_axis = !cfg.probe_axis.empty();

    std::size_t n_points = 1;
    for (const auto& name : axis_names) n_points *= cfg.axes.at(name).size();
    if (has_probe_axis) n_points *= cfg.probe_axis.size();

    std::vector<GridPoint> points(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        GridPoint pt;
        pt.params = cfg.fixed;
        std::size_t rest = i;
        if (has_probe_axis) {
            pt.probe = cfg.probe_axis[rest % cfg.probe_axis.size()];
            rest /= cfg.probe_axis.size();
        } else {
            pt.probe = cfg.probe;
        }
        for (auto it = axis_names.rbegin(); it != axis_names.rend(); ++it) {
            const auto& vals = cfg.axes.at(*it);
            pt.params[*it] = vals[rest % vals.size()];
            rest /= vals.size();
        }
        points[i] = std::move(pt);
    }

    RunRecord rec;
    rec.config = cfg;
    rec.version = kVersion;
    rec.seed = cfg.seed;
    char hash_buf[20];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical_dump(cfg))));
    rec.config_hash = hash_buf;

    rec.columns = axis_names;
    if (has_probe_axis) rec.columns.push_back("probe");
    for (const auto& c : result_columns(cfg.task)) rec.columns.push_back(c);
    rec.columns.push_back("error");

    const std::size_t n_result_cols = result_columns(cfg.task).size();
    rec.rows.assign(n_points, {});

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_points) break;
            const GridPoint& pt = points[i];
            std::vector<std::string> row;
            for (const auto& name : axis_names) {
                const double v = pt.params.at(name);
                row.push_back(is_int_param(name) ? std::to_string(static_cast<long long>(v))
                                                 : format_value(v));
            }
            if (has_probe_axis) row.push_back(pt.probe);
            try {
                auto results = evaluate_point(cfg, pt, cfg.seed + i);
                row.insert(row.end(), results.begin(), results.end());
                row.emplace_back();
            } catch (const std::exception& e) {
                row.insert(row.end(), n_result_cols, "");
                row.emplace_back(e.what());
            }
            rec.rows[i] = std::move(row);
        }
    };
    const int n_workers = std::min<std::size_t>(resolve_grid_workers(), n_points);
    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    rec.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

std::string RunRecord::to_csv() const {
    std::string out;
    out += "# qranging " + version + " task=" + task_name(config.task) +
           " seed=" + std::to_string(seed) + " config_hash=" + config_hash + "\n";
    out += "# walltime_ms=" + format_value(wall_time_ms) + "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += csv_escape(columns[c]);
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += csv_escape(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string RunRecord::to_json() const {
    json j;
    j["version"] = version;
    j["task"] = task_name(config.task);
    j["seed"] = seed;
    j["config_hash"] = config_hash;
    j["walltime_ms"] = wall_time_ms;
    j["columns"] = columns;
    j["rows"] = json::array();
    for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < columns.size(); ++c) obj[columns[c]] = row[c];
        j["rows"].push_back(std::move(obj));
    }
    return j.dump(1) + "\n";
}

}  // namespace qranging
