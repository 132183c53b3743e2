#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crowdtex/config.hpp"
#include "crowdtex/manifest.hpp"
#include "crowdtex/synth.hpp"

namespace crowdtex::cli {

enum ExitCode : int {
    kOk = 0,
    kUnexpected = 1,
    kConfigError = 2,
    kIoError = 3,
    kPartialFailure = 4,
};

/// Config file plus `key=value` overrides; overrides win.
struct ConfigSources {
    std::optional<std::filesystem::path> file;
    Settings overrides;

    RunConfig resolve() const;
};

struct ExtractOptions {
    ConfigSources config;
    std::filesystem::path manifest;
    std::filesystem::path out;
    std::string format = "csv";  ///< csv | binary
};

struct TrainOptions {
    ConfigSources config;
    std::optional<std::filesystem::path> descriptors;
    std::optional<std::filesystem::path> manifest;
    std::filesystem::path model_out;
};

struct ScoreOptions {
    ConfigSources config;
    std::filesystem::path model;
    std::filesystem::path manifest;
    std::optional<std::filesystem::path> out;  ///< stdout when empty
};

struct EvaluateOptions {
    ConfigSources config;
    std::optional<std::filesystem::path> descriptors;
    std::optional<std::filesystem::path> manifest;
    std::filesystem::path results_out;
    std::optional<std::filesystem::path> roc_out;
    std::optional<std::uint64_t> shuffle_labels_seed;
};

struct SweepOptions {
    ConfigSources config;
    std::filesystem::path manifest;
    std::string axis = "pair";  ///< pair | grid | window | all
    std::filesystem::path results_out;
    std::optional<std::filesystem::path> roc_out;
};

struct IfuReportOptions {
    ConfigSources config;
    std::filesystem::path manifest;
    std::optional<std::filesystem::path> out;
};

struct BenchOptions {
    ConfigSources config;
    int width = 640;
    int height = 480;
    int frames = 240;
    double fps = 24.0;
    std::optional<std::filesystem::path> out;
};

struct SynthOptions {
    std::string spec;  ///< single stream to materialize as PGM files
    std::filesystem::path out;
    int per_class = 0;  ///< >0: write a labelled dataset and its manifest instead
    std::uint64_t seed = 1;
    bool manifest_only = false;  ///< dataset manifest referencing generators, no files
};

struct BenchReport {
    std::string policy;
    int width = 0;
    int height = 0;
    int window = 0;
    std::int64_t frames = 0;
    double wall_seconds = 0.0;
    double fps = 0.0;
    double mean_seconds_per_frame = 0.0;
    double median_seconds_per_frame = 0.0;
};

// Each command reports progress and errors on `log` and returns an ExitCode.
int cmd_extract(const ExtractOptions& opts, std::ostream& log);
int cmd_train(const TrainOptions& opts, std::ostream& log);
int cmd_score(const ScoreOptions& opts, std::ostream& out, std::ostream& log);
int cmd_evaluate(const EvaluateOptions& opts, std::ostream& log);
int cmd_sweep(const SweepOptions& opts, std::ostream& log);
int cmd_ifu_report(const IfuReportOptions& opts, std::ostream& out, std::ostream& log);
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& log);
int cmd_synth(const SynthOptions& opts, std::ostream& log);

/// Times the full per-frame pipeline (quantize + descriptor) on synthetic
/// smooth-drift frames. Frames are rendered before timing starts.
BenchReport run_bench(const RunConfig& config, int width, int height, int frames, double fps,
                      ExecutionPolicy policy);

/// The balanced synthetic dataset used for end-to-end checks: `per_class`
/// smooth-drift (normal) and bursty-flicker (abnormal) videos.
std::vector<VideoEntry> synthetic_dataset(int per_class, std::uint64_t seed,
                                          const synth::SynthSpec& base = {});

}  // namespace crowdtex::cli
