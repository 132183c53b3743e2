#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crowdtex/frame.hpp"

namespace crowdtex {

enum class SourceKind { PgmSequenceDir, RawPlanarFile, Synthetic };

const char* to_string(SourceKind kind) noexcept;
SourceKind parse_source_kind(const std::string& text);

/// Everything needed to open a frame stream. `width`/`height` are required
/// for raw planar input; `location` is a directory, a file, or a synthetic
/// spec string depending on `kind`.
struct SourceSpec {
    SourceKind kind = SourceKind::PgmSequenceDir;
    std::string location;
    int width = 0;
    int height = 0;
    double fps = 25.0;
};

/// Single-consumer stream of frames in time order.
class FrameSource {
public:
    virtual ~FrameSource() = default;

    /// Next frame, or nullopt once the stream is exhausted.
    virtual std::optional<RawFrame> next() = 0;
    virtual double frame_rate() const noexcept = 0;
    virtual std::int64_t frame_count() const noexcept = 0;
    virtual SourceKind kind() const noexcept = 0;
};

/// Binary PGM (P5, maxval 255).
RawFrame read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const RawFrame& frame);

/// Directory of P5 files played back in lexicographic filename order.
class PgmSequenceSource final : public FrameSource {
public:
    PgmSequenceSource(const std::filesystem::path& dir, double fps);

    std::optional<RawFrame> next() override;
    double frame_rate() const noexcept override { return fps_; }
    std::int64_t frame_count() const noexcept override {
        return static_cast<std::int64_t>(files_.size());
    }
    SourceKind kind() const noexcept override { return SourceKind::PgmSequenceDir; }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

private:
    std::vector<std::filesystem::path> files_;
    std::size_t cursor_ = 0;
    double fps_;
    int width_ = 0;
    int height_ = 0;
};

/// Headerless concatenation of width*height byte frames.
class RawPlanarSource final : public FrameSource {
public:
    RawPlanarSource(const std::filesystem::path& file, int width, int height, double fps);

    std::optional<RawFrame> next() override;
    double frame_rate() const noexcept override { return fps_; }
    std::int64_t frame_count() const noexcept override { return count_; }
    SourceKind kind() const noexcept override { return SourceKind::RawPlanarFile; }

private:
    std::filesystem::path file_;
    std::ifstream in_;
    int width_;
    int height_;
    double fps_;
    std::int64_t count_ = 0;
    std::int64_t cursor_ = 0;
};

std::unique_ptr<FrameSource> open_source(const SourceSpec& spec);

}  // namespace crowdtex
