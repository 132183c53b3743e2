#include "crowdtex/frame.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace crowdtex {

RawFrame::RawFrame(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 2 || height < 2)
        throw std::invalid_argument("frame must be at least 2x2, got " + std::to_string(width) +
                                    "x" + std::to_string(height));
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw std::invalid_argument("pixel buffer size does not match frame dimensions");
}

QuantizedFrame::QuantizedFrame(int width, int height, int ng, std::vector<std::uint8_t> levels)
    : width_(width), height_(height), ng_(ng), levels_(std::move(levels)) {
    if (ng < 2 || ng > 256) throw std::invalid_argument("ng must lie in [2, 256]");
    if (width < 2 || height < 2) throw std::invalid_argument("frame must be at least 2x2");
    if (levels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw std::invalid_argument("level buffer size does not match frame dimensions");
    if (ng < 256 && std::any_of(levels_.begin(), levels_.end(),
                                [ng](std::uint8_t v) { return v >= ng; }))
        throw std::invalid_argument("grey level outside [0, ng)");
}

QuantizedFrame quantize(const RawFrame& frame, int ng) {
    if (ng < 2 || ng > 256) throw std::invalid_argument("ng must lie in [2, 256]");
    std::array<std::uint8_t, 256> lut{};
    for (int v = 0; v < 256; ++v)
        lut[static_cast<std::size_t>(v)] =
            static_cast<std::uint8_t>(quantize_level(static_cast<std::uint8_t>(v), ng));

    const auto src = frame.pixels();
    std::vector<std::uint8_t> levels(src.size());
    std::transform(src.begin(), src.end(), levels.begin(), [&lut](std::uint8_t v) { return lut[v]; });
    return QuantizedFrame(frame.width(), frame.height(), ng, std::move(levels));
}

}  // namespace crowdtex
