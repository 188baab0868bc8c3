#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qranging {

inline constexpr const char* kVersion = "0.1.0";

enum class Task { Exponent, Advantage, SingleShot, MonteCarlo, Slope };

Task task_from_name(const std::string& name);
std::string task_name(Task t);

/// One parameter sweep: named value axes crossed into a Cartesian grid,
/// scalar overrides for everything else.
struct SweepConfig {
    Task task = Task::Exponent;
    // numeric axes keyed by parameter name (mu, kappa, mu_B, m, L, R)
    std::map<std::string, std::vector<double>> axes;
    std::vector<std::string> probe_axis;  // optional axis over probe kinds
    std::map<std::string, double> fixed;
    std::string probe = "coherent";  // coherent | tmsv
    std::string rule = "max-count";  // max-count | idler-correlation
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 1;
    double eps = 1e-12;
    std::string output_path;  // empty: stdout
    std::string format = "csv";
};

struct RunRecord {
    SweepConfig config;
    std::string version;
    std::uint64_t seed;
    std::string config_hash;
    double wall_time_ms = 0.0;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;  // formatted, grid order

    std::string to_csv() const;
    std::string to_json() const;
};

/// Parse the documented JSON config schema.  Unknown keys, malformed values
/// and parameters given both as an axis and as fixed are rejected.
SweepConfig parse_config(const std::string& text);

/// Evaluate the task over the whole grid.  Grid points run concurrently
/// (QRANGING_WORKERS caps the pool) but rows come out in deterministic
/// lexicographic grid order; per-point failures become error rows.
RunRecord run_sweep(const SweepConfig& cfg);

/// Deterministic numeric formatting used in CSV output: '.' decimal
/// separator, scientific notation below 1e-4 in magnitude.
std::string format_value(double v);

int cli_main(int argc, char** argv);

}  // namespace qranging
