#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace crowdtex {

/// Row-major 8-bit grayscale frame, at least 2x2.
class RawFrame {
public:
    RawFrame(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
    std::uint8_t at(int row, int col) const noexcept {
        return pixels_[static_cast<std::size_t>(row) * width_ + col];
    }

    friend bool operator==(const RawFrame&, const RawFrame&) = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

/// Frame whose pixels are grey levels in [0, ng).
class QuantizedFrame {
public:
    QuantizedFrame(int width, int height, int ng, std::vector<std::uint8_t> levels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int ng() const noexcept { return ng_; }
    std::span<const std::uint8_t> levels() const noexcept { return levels_; }
    int at(int row, int col) const noexcept {
        return levels_[static_cast<std::size_t>(row) * width_ + col];
    }

    friend bool operator==(const QuantizedFrame&, const QuantizedFrame&) = default;

private:
    int width_;
    int height_;
    int ng_;
    std::vector<std::uint8_t> levels_;
};

/// Level of one intensity under equal-width binning: floor(v * ng / 256).
constexpr int quantize_level(std::uint8_t intensity, int ng) noexcept {
    return (static_cast<int>(intensity) * ng) >> 8;
}

/// Requires ng in [2, 256].
QuantizedFrame quantize(const RawFrame& frame, int ng);

}  // namespace crowdtex
