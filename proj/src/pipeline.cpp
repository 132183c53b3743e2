#include "crowdtex/pipeline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "crowdtex/error.hpp"

namespace crowdtex {

int PipelineConfig::resolve_window(double fps) const {
    const int n = window > 0 ? window : static_cast<int>(std::lround(fps));
    if (n < min_window())
        throw ConfigError("window of " + std::to_string(n) + " frames is shorter than the minimum " +
                          std::to_string(min_window()));
    return n;
}

void PipelineConfig::validate() const {
    if (ng < 2 || ng > 256) throw ConfigError("ng must lie in [2, 256]");
    if (pairs.distance < 1) throw ConfigError("pair distance must be >= 1");
    try {
        (void)pairs.offsets();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (grid.rows < 1 || grid.cols < 1) throw ConfigError("grid rows and cols must be >= 1");
    if (window != 0 && window < min_window())
        throw ConfigError("window must be >= " + std::to_string(min_window()));
    histogram.validate();
}

CellSampler::CellSampler(const PipelineConfig& config, ExecutionPolicy policy)
    : config_(config), policy_(policy) {
    config_.validate();
    offsets_ = config_.pairs.offsets();
}

void CellSampler::reset() {
    regions_.clear();
    states_.clear();
    samples_.clear();
    width_ = height_ = 0;
}

std::optional<std::span<const TextureSample>> CellSampler::push(const QuantizedFrame& frame) {
    if (frame.ng() != config_.ng)
        throw std::invalid_argument("frame quantized to " + std::to_string(frame.ng()) +
                                    " levels, pipeline expects " + std::to_string(config_.ng));
    if (regions_.empty()) {
        regions_ = cell_regions(config_.grid, frame.width(), frame.height(), config_.pairs.distance + 1);
        width_ = frame.width();
        height_ = frame.height();
        states_.assign(regions_.size(), CellState{});
        samples_.assign(regions_.size(), TextureSample{});
    } else if (frame.width() != width_ || frame.height() != height_) {
        throw FormatError("frame size changed mid-stream: " + std::to_string(frame.width()) + "x" +
                          std::to_string(frame.height()) + " after " + std::to_string(width_) + "x" +
                          std::to_string(height_));
    }
    FrameStepParams params{regions_, offsets_, config_.background_diff, config_.degenerate};
    if (!kernels::frame_step(policy_, frame, params, states_, samples_)) return std::nullopt;
    return std::span<const TextureSample>(samples_);
}

WindowSummarizer::WindowSummarizer(const PipelineConfig& config, int cells, int length,
                                   ExecutionPolicy policy)
    : flip_ifu_(config.flip_ifu),
      policy_(policy),
      assembler_(config.histogram),
      cells_(cells),
      length_(length) {
    if (cells < 1) throw std::invalid_argument("summarizer needs at least one cell");
    if (length < 3) throw ConfigError("temporal window must hold at least 3 samples");
    ring_.resize(static_cast<std::size_t>(cells) * static_cast<std::size_t>(length));
    summaries_.resize(static_cast<std::size_t>(cells));
}

void WindowSummarizer::reset() {
    head_ = 0;
    filled_ = 0;
}

std::optional<std::vector<double>> WindowSummarizer::push(std::span<const TextureSample> samples) {
    if (samples.size() != static_cast<std::size_t>(cells_))
        throw std::invalid_argument("summarizer: sample count does not match cell count");
    std::copy(samples.begin(), samples.end(),
              ring_.begin() + static_cast<std::ptrdiff_t>(head_) * cells_);
    head_ = (head_ + 1) % length_;
    if (filled_ < length_) ++filled_;
    if (filled_ < length_) return std::nullopt;

    // head_ now points at the oldest slot.
    SampleWindow window{ring_, length_, head_, length_, cells_};
    kernels::summarize(policy_, window, flip_ifu_, summaries_);
    return assembler_.assemble(summaries_);
}

namespace {

int samples_per_window(const PipelineConfig& config, int window) {
    return config.background_diff ? window - 1 : window;
}

}  // namespace

DescriptorPipeline::DescriptorPipeline(const PipelineConfig& config, double fps, ExecutionPolicy policy)
    : config_(config),
      window_(config.resolve_window(fps)),
      sampler_(config, policy),
      summarizer_(config, config.grid.cell_count(), samples_per_window(config, window_), policy) {}

void DescriptorPipeline::reset() {
    sampler_.reset();
    summarizer_.reset();
    frames_seen_ = 0;
}

std::optional<Descriptor> DescriptorPipeline::push_frame(const QuantizedFrame& frame) {
    const std::int64_t index = frames_seen_;
    const auto samples = sampler_.push(frame);
    ++frames_seen_;
    if (!samples) return std::nullopt;
    auto values = summarizer_.push(*samples);
    if (!values) return std::nullopt;
    return Descriptor{index, std::move(*values)};
}

std::optional<Descriptor> DescriptorPipeline::push_frame(const RawFrame& frame) {
    return push_frame(quantize(frame, config_.ng));
}

std::vector<Descriptor> extract_descriptors(FrameSource& source, const PipelineConfig& config,
                                            ExecutionPolicy policy) {
    DescriptorPipeline pipeline(config, source.frame_rate(), policy);
    std::vector<Descriptor> out;
    while (auto frame = source.next()) {
        if (auto d = pipeline.push_frame(*frame)) out.push_back(std::move(*d));
    }
    return out;
}

SampleTrack extract_samples(FrameSource& source, const PipelineConfig& config, ExecutionPolicy policy) {
    CellSampler sampler(config, policy);
    SampleTrack track;
    track.cells = sampler.cell_count();
    track.first_frame = config.background_diff ? 1 : 0;
    while (auto frame = source.next()) {
        if (auto samples = sampler.push(quantize(*frame, config.ng)))
            track.samples.emplace_back(samples->begin(), samples->end());
    }
    return track;
}

std::vector<Descriptor> descriptors_from_samples(const SampleTrack& track, const PipelineConfig& config,
                                                 ExecutionPolicy policy) {
    if (config.window < config.min_window())
        throw ConfigError("descriptors_from_samples needs an explicit window >= " +
                          std::to_string(config.min_window()));
    WindowSummarizer summarizer(config, track.cells, samples_per_window(config, config.window), policy);
    std::vector<Descriptor> out;
    for (std::size_t step = 0; step < track.samples.size(); ++step) {
        if (auto values = summarizer.push(track.samples[step]))
            out.push_back({track.first_frame + static_cast<std::int64_t>(step), std::move(*values)});
    }
    return out;
}

}  // namespace crowdtex
