#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "crowdtex/eval.hpp"
#include "crowdtex/pipeline.hpp"

namespace crowdtex {

/// Everything a CLI run needs. Defaults follow the reference setup:
/// Ng = 32, (theta, d) = (0, 1), 4x4 grid, n = fps, 50 trees, 10 repeats.
struct RunConfig {
    PipelineConfig pipeline{};
    int trees = 50;
    int folds = 5;
    int repeats = 10;
    std::uint64_t seed = 0;
    double threshold = 0.5;

    EvalParams eval_params() const;
};

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Applies one `key=value` setting. Throws ConfigError on unknown keys or
/// unparsable values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Plain-text config: one `key = value` per line, '#' starts a comment.
Settings parse_settings(std::istream& in);
Settings read_settings_file(const std::filesystem::path& path);

/// Fully resolved configuration as ordered key/value pairs; feeding these
/// back through apply_setting reproduces the config.
Settings describe(const RunConfig& config);

/// Orientation list as text: a preset name or comma-separated degrees.
std::string format_orientations(const PairSpec& pairs);
std::vector<double> parse_orientations(const std::string& text);

}  // namespace crowdtex
