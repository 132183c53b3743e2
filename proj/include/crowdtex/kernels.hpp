#pragma once

#include <span>
#include <vector>

#include "crowdtex/glcm.hpp"
#include "crowdtex/haralick.hpp"
#include "crowdtex/temporal.hpp"

namespace crowdtex {

/// M x N split of a frame into non-overlapping cells.
struct GridSpec {
    int rows = 4;
    int cols = 4;
    int cell_count() const noexcept { return rows * cols; }
    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Cell rectangles in row-major order. Remainder pixels go to the last row
/// and column of cells. Throws ConfigError when a cell would be narrower or
/// shorter than `min_extent` pixels.
std::vector<Region> cell_regions(const GridSpec& grid, int width, int height, int min_extent = 1);

enum class ExecutionPolicy { Serial, Parallel };

const char* to_string(ExecutionPolicy policy) noexcept;

/// Per-cell GLCM history carried between frames.
struct CellState {
    GlcmCounts previous;
    GlcmCounts current;
    GlcmCounts diff;
    NormalizedGlcm normalized;
    bool has_previous = false;
};

/// Inputs shared by every cell for one frame step.
struct FrameStepParams {
    std::span<const Region> regions;
    std::span<const Offset> offsets;
    bool background_diff = true;
    DegenerateDefaults defaults{};
};

/// Ring buffer view of per-cell samples, laid out [slot][cell]. Time step k
/// of the window lives in slot (start + k) % capacity.
struct SampleWindow {
    std::span<const TextureSample> ring;
    int capacity = 0;
    int start = 0;
    int length = 0;
    int cells = 0;

    const TextureSample& at(int step, int cell) const noexcept {
        const int slot = (start + step) % capacity;
        return ring[static_cast<std::size_t>(slot) * static_cast<std::size_t>(cells) +
                    static_cast<std::size_t>(cell)];
    }
};

namespace kernels {

// Each frame-step kernel writes one sample per cell into `out` and advances
// the cell state. It returns false when no sample exists yet (first frame
// with background differencing on); `out` is left untouched then.

/// Straightforward reference built from the public single-cell operations.
bool frame_step_serial(const QuantizedFrame& frame, const FrameStepParams& params,
                       std::span<CellState> cells, std::span<TextureSample> out);

/// OpenMP over cells, reusing per-cell buffers. Bit-identical to the serial
/// reference.
bool frame_step_parallel(const QuantizedFrame& frame, const FrameStepParams& params,
                         std::span<CellState> cells, std::span<TextureSample> out);

void summarize_serial(const SampleWindow& window, bool flip_ifu, std::span<CellSummary> out);
void summarize_parallel(const SampleWindow& window, bool flip_ifu, std::span<CellSummary> out);

inline bool frame_step(ExecutionPolicy policy, const QuantizedFrame& frame,
                       const FrameStepParams& params, std::span<CellState> cells,
                       std::span<TextureSample> out) {
    return policy == ExecutionPolicy::Parallel ? frame_step_parallel(frame, params, cells, out)
                                               : frame_step_serial(frame, params, cells, out);
}

inline void summarize(ExecutionPolicy policy, const SampleWindow& window, bool flip_ifu,
                      std::span<CellSummary> out) {
    if (policy == ExecutionPolicy::Parallel)
        summarize_parallel(window, flip_ifu, out);
    else
        summarize_serial(window, flip_ifu, out);
}

}  // namespace kernels
}  // namespace crowdtex
