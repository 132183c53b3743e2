#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "crowdtex/frame.hpp"
#include "crowdtex/frame_source.hpp"
#include "crowdtex/histogram.hpp"
#include "crowdtex/kernels.hpp"

namespace crowdtex {

/// Descriptor extraction parameters. Defaults: Ng = 32, (theta, d) = (0, 1),
/// 4x4 grid, window = source frame rate, 16 log bins with growth 2.
struct PipelineConfig {
    int ng = 32;
    PairSpec pairs{};
    GridSpec grid{};
    int window = 0;  ///< frames per descriptor; 0 means "use the source fps"
    HistogramSpec histogram{};
    bool background_diff = true;
    bool flip_ifu = false;
    DegenerateDefaults degenerate{};

    /// Window length for a source running at `fps`.
    int resolve_window(double fps) const;
    /// Minimum window accepted: 4 with background differencing, 3 without.
    int min_window() const noexcept { return background_diff ? 4 : 3; }
    void validate() const;
    std::size_t descriptor_length() const noexcept {
        return static_cast<std::size_t>(kCellSummarySize) * static_cast<std::size_t>(histogram.bins);
    }
};

/// One classifier input: 20 histograms of B bins, labelling frame `frame_index`
/// (0-based) using frames [frame_index - n + 1, frame_index].
struct Descriptor {
    std::int64_t frame_index = 0;
    std::vector<double> values;
};

/// Per-frame stage: one texture sample per grid cell.
class CellSampler {
public:
    CellSampler(const PipelineConfig& config, ExecutionPolicy policy = ExecutionPolicy::Parallel);

    /// Samples for `frame`, or nullopt while no predecessor exists. Throws
    /// FormatError if the frame size changes mid-stream.
    std::optional<std::span<const TextureSample>> push(const QuantizedFrame& frame);

    int cell_count() const noexcept { return config_.grid.cell_count(); }
    void reset();

private:
    PipelineConfig config_;
    ExecutionPolicy policy_;
    std::vector<Offset> offsets_;
    std::vector<Region> regions_;
    std::vector<CellState> states_;
    std::vector<TextureSample> samples_;
    int width_ = 0;
    int height_ = 0;
};

/// Windowed stage: keeps the last `length` per-cell samples and turns them
/// into cell summaries and a descriptor.
class WindowSummarizer {
public:
    WindowSummarizer(const PipelineConfig& config, int cells, int length,
                     ExecutionPolicy policy = ExecutionPolicy::Parallel);

    /// Adds one time step; returns the descriptor values once the window is full.
    std::optional<std::vector<double>> push(std::span<const TextureSample> samples);

    std::span<const CellSummary> summaries() const noexcept { return summaries_; }
    int length() const noexcept { return length_; }
    void reset();

private:
    bool flip_ifu_;
    ExecutionPolicy policy_;
    DescriptorAssembler assembler_;
    int cells_;
    int length_;
    std::vector<TextureSample> ring_;
    int head_ = 0;
    int filled_ = 0;
    std::vector<CellSummary> summaries_;
};

/// Streaming descriptor extraction for one video.
class DescriptorPipeline {
public:
    DescriptorPipeline(const PipelineConfig& config, double fps,
                       ExecutionPolicy policy = ExecutionPolicy::Parallel);

    /// Emits the descriptor for this frame once `window()` frames have been seen.
    std::optional<Descriptor> push_frame(const QuantizedFrame& frame);
    std::optional<Descriptor> push_frame(const RawFrame& frame);

    /// Cell summaries behind the most recent descriptor.
    std::span<const CellSummary> last_summaries() const noexcept { return summarizer_.summaries(); }
    int window() const noexcept { return window_; }
    std::int64_t frames_seen() const noexcept { return frames_seen_; }
    const PipelineConfig& config() const noexcept { return config_; }
    void reset();

private:
    PipelineConfig config_;
    int window_;
    CellSampler sampler_;
    WindowSummarizer summarizer_;
    std::int64_t frames_seen_ = 0;
};

/// Runs a whole source through a fresh pipeline.
std::vector<Descriptor> extract_descriptors(FrameSource& source, const PipelineConfig& config,
                                            ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// Per-frame cell samples of a whole source, for reuse across window lengths.
struct SampleTrack {
    std::int64_t first_frame = 0;  ///< frame index of samples[0]
    int cells = 0;
    std::vector<std::vector<TextureSample>> samples;  ///< [step][cell]
};

SampleTrack extract_samples(FrameSource& source, const PipelineConfig& config,
                            ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// Descriptors for `config.window` (already resolved, > 0) built from a
/// cached sample track. Matches extract_descriptors on the same source.
std::vector<Descriptor> descriptors_from_samples(const SampleTrack& track, const PipelineConfig& config,
                                                 ExecutionPolicy policy = ExecutionPolicy::Parallel);

}  // namespace crowdtex
