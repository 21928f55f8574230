#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mimosec/csvio.hpp"
#include "mimosec/montecarlo.hpp"

namespace mimosec {

inline constexpr const char* kToolName = "mimosec";
inline constexpr const char* kToolVersion = "0.1.0";

struct UnknownFigure : std::invalid_argument {
    explicit UnknownFigure(const std::string& what) : std::invalid_argument(what) {}
};

/// Built-in defaults for every config key; user files / --set overrides
/// are merged on top.
nlohmann::json default_config();

/// Reads a JSON config file; throws ParameterError on I/O or parse errors.
nlohmann::json load_config_file(const std::string& path);

/// Applies one "dotted.key=value" override in place. Values parse as JSON
/// when possible, otherwise as strings.
void apply_override(nlohmann::json& config, const std::string& assignment);

/// Everything a run needs, decoded and validated from the config tree.
struct RunSetup {
    SystemConfig cfg;
    AttackSpec attack;
    BeamformerKind beamformer = BeamformerKind::Conjugate;
    double delta = 0.0;
    bool randomize_assignment = false;
    long long trials = 0;
    std::uint64_t seed = 0;
};
RunSetup parse_config(const nlohmann::json& config);

/// Analytic figure sweeps (ids 2..6); overrides are "key=value" strings
/// applied to the figure's default config. Throws UnknownFigure.
ResultTable run_figure(int id, const std::vector<std::string>& overrides,
                       std::uint64_t seed, int workers = 1);

struct CheckRow {
    std::string name;
    double statistic = 0.0;  ///< max |z| or max residual, per check
    double threshold = 0.0;
    bool pass = false;
};
struct VerifyReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CheckRow> rows;
    bool all_pass = true;
};

/// suite in {formulas, statistics, all}. Deterministic in (suite, seed);
/// workers changes scheduling only, never the numbers.
VerifyReport run_verify(const std::string& suite, std::uint64_t seed, int workers = 1);

/// Fixed-format text rendering of a verify report (byte-reproducible).
std::string render_report(const VerifyReport& report);

/// Per-block + aggregate table for the end-to-end chain in the config.
ResultTable run_simulate(const RunSetup& setup, long long blocks,
                         const nlohmann::json& config);

/// One-row table with every antenna threshold for the config.
ResultTable run_thresholds(const RunSetup& setup, const nlohmann::json& config);

/// Named Monte-Carlo experiment; rows documented in the provenance header.
ResultTable run_mc(const RunSetup& setup, const std::string& experiment,
                   long long trials, const nlohmann::json& config);

}  // namespace mimosec
