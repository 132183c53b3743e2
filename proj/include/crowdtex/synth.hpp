#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "crowdtex/frame_source.hpp"

namespace crowdtex::synth {

/// Generator families. Each maps to a fixed class label: bursty flicker is
/// abnormal (1), everything else normal (0).
enum class Kind { SmoothDrift, BurstyFlicker, Static, MovingSprite };

const char* to_string(Kind kind) noexcept;
Kind parse_kind(const std::string& text);
int class_label(Kind kind) noexcept;

/// Texture is built from 4x4 blocks; change happens block-wise.
///  - smooth drift: every frame each block is independently re-drawn with
///    probability `drift_rate`, so change is spread evenly over time.
///  - bursty flicker: the whole texture is re-drawn on one frame every
///    `burst_period` frames and held still in between.
///  - static: one texture, identical frames.
///  - moving sprite: fixed background with a textured square translating
///    `sprite_speed` pixels per frame to the right (wrapping).
struct SynthSpec {
    Kind kind = Kind::SmoothDrift;
    int width = 96;
    int height = 96;
    int frames = 48;
    double fps = 12.0;
    std::uint64_t seed = 1;
    int burst_period = 0;  ///< 0 means fps - 1, so every window sees one burst
    double drift_rate = 0.3;
    int sprite_size = 16;
    int sprite_speed = 1;

    int resolved_burst_period() const noexcept;
    void validate() const;
};

inline constexpr int kBlockSize = 4;

/// Frame `index` of the stream; a pure function of (spec, index).
RawFrame render(const SynthSpec& spec, std::int64_t index);

/// Top-left corner (row, col) of the sprite at frame `index`.
std::pair<int, int> sprite_origin(const SynthSpec& spec, std::int64_t index);

/// "key=value;key=value" form used on the command line and in manifests.
SynthSpec parse_spec(const std::string& text);
std::string format_spec(const SynthSpec& spec);

class SyntheticSource final : public FrameSource {
public:
    explicit SyntheticSource(SynthSpec spec);

    std::optional<RawFrame> next() override;
    double frame_rate() const noexcept override { return spec_.fps; }
    std::int64_t frame_count() const noexcept override { return spec_.frames; }
    SourceKind kind() const noexcept override { return SourceKind::Synthetic; }
    const SynthSpec& spec() const noexcept { return spec_; }

private:
    SynthSpec spec_;
    std::int64_t cursor_ = 0;
};

/// Writes frames as frame_00000.pgm, frame_00001.pgm, ... into `dir`.
void write_pgm_sequence(const SynthSpec& spec, const std::filesystem::path& dir);

}  // namespace crowdtex::synth
