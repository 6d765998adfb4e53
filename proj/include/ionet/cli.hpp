#pragma once

#include "ionet/diffusion.hpp"
#include "ionet/netstats.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ionet::cli {

/// Process exit status.
enum ExitCode : int {
    success = 0,
    internal_error = 1,
    config_error = 2,
    data_error = 3,
    numerical_error = 4,
};

enum class OutputFormat { csv, json, both };

struct RunConfig {
    std::vector<std::filesystem::path> inputs;
    std::vector<int> models;
    /// Paired by position: grid point k is (f[k], c[k]).
    std::vector<double> f;
    std::vector<double> c;
    double shock_size = 1.0;
    std::filesystem::path out_dir = "out";
    OutputFormat format = OutputFormat::both;
    PathMode path_mode = PathMode::directed;
    /// Sector labels or 0-based indices; empty runs every sector.
    std::vector<std::string> seed_filter;
    std::optional<std::filesystem::path> metadata;
    bool timestamp = false;
    unsigned threads = 0;
};

/// Checks every (f, c) and the model list; throws ConfigError.
std::vector<ShockParams> parameter_grid(const RunConfig& config);

int cmd_validate(const std::vector<std::filesystem::path>& inputs, std::ostream& out,
                 std::ostream& err);
int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Collects every report.json under config.inputs (directories) into a summary.
int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line front end (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ionet::cli
