#include "crowdtex/kernels.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "crowdtex/error.hpp"

namespace crowdtex {

std::vector<Region> cell_regions(const GridSpec& grid, int width, int height, int min_extent) {
    if (grid.rows < 1 || grid.cols < 1) throw ConfigError("grid rows and cols must be >= 1");
    const int cell_h = height / grid.rows;
    const int cell_w = width / grid.cols;
    if (cell_h < min_extent || cell_w < min_extent)
        throw ConfigError("grid " + std::to_string(grid.rows) + "x" + std::to_string(grid.cols) +
                          " on a " + std::to_string(width) + "x" + std::to_string(height) +
                          " frame gives cells smaller than " + std::to_string(min_extent) + " px");
    std::vector<Region> regions;
    regions.reserve(static_cast<std::size_t>(grid.cell_count()));
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            Region region;
            region.row0 = r * cell_h;
            region.col0 = c * cell_w;
            region.rows = (r == grid.rows - 1) ? height - region.row0 : cell_h;
            region.cols = (c == grid.cols - 1) ? width - region.col0 : cell_w;
            regions.push_back(region);
        }
    }
    return regions;
}

const char* to_string(ExecutionPolicy policy) noexcept {
    return policy == ExecutionPolicy::Parallel ? "parallel" : "serial";
}

namespace kernels {

namespace {

void check_step_inputs(const QuantizedFrame& frame, const FrameStepParams& params,
                       std::span<CellState> cells, std::span<TextureSample> out) {
    if (cells.size() != params.regions.size() || out.size() != params.regions.size())
        throw std::invalid_argument("frame step: cell state and output sizes must match regions");
    for (const auto& region : params.regions) {
        if (region.row0 < 0 || region.col0 < 0 || region.row0 + region.rows > frame.height() ||
            region.col0 + region.cols > frame.width())
            throw std::invalid_argument("frame step: region outside frame");
    }
    for (const auto& cell : cells) {
        if (cell.has_previous && cell.previous.ng() != frame.ng())
            throw std::invalid_argument("frame step: grey-level count changed mid-stream");
    }
}

bool all_have_previous(std::span<const CellState> cells) {
    for (const auto& cell : cells)
        if (!cell.has_previous) return false;
    return true;
}

}  // namespace

bool frame_step_serial(const QuantizedFrame& frame, const FrameStepParams& params,
                       std::span<CellState> cells, std::span<TextureSample> out) {
    check_step_inputs(frame, params, cells, out);
    const bool emit = !params.background_diff || all_have_previous(cells);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        GlcmCounts counts(frame.ng());
        accumulate_region(frame, params.regions[c], params.offsets, counts);
        if (params.background_diff) {
            if (emit)
                out[c] = texture_features(normalize(temporal_diff(counts, cells[c].previous)),
                                          params.defaults);
            cells[c].previous = std::move(counts);
            cells[c].has_previous = true;
        } else {
            out[c] = texture_features(normalize(counts), params.defaults);
        }
    }
    return emit;
}

bool frame_step_parallel(const QuantizedFrame& frame, const FrameStepParams& params,
                         std::span<CellState> cells, std::span<TextureSample> out) {
    check_step_inputs(frame, params, cells, out);
    const bool emit = !params.background_diff || all_have_previous(cells);
    const int ng = frame.ng();
    const auto count = static_cast<long>(cells.size());

#pragma omp parallel for schedule(static)
    for (long c = 0; c < count; ++c) {
        CellState& st = cells[static_cast<std::size_t>(c)];
        if (st.current.ng() != ng)
            st.current = GlcmCounts(ng);
        else
            st.current.clear();
        accumulate_region(frame, params.regions[static_cast<std::size_t>(c)], params.offsets,
                          st.current);
        if (params.background_diff) {
            if (emit) {
                temporal_diff_into(st.current, st.previous, st.diff);
                normalize_into(st.diff, st.normalized);
                out[static_cast<std::size_t>(c)] = texture_features(st.normalized, params.defaults);
            }
            std::swap(st.previous, st.current);
            st.has_previous = true;
        } else {
            normalize_into(st.current, st.normalized);
            out[static_cast<std::size_t>(c)] = texture_features(st.normalized, params.defaults);
        }
    }
    return emit;
}

namespace {

void check_window(const SampleWindow& window, std::span<CellSummary> out) {
    if (window.capacity < window.length || window.length < 3 || window.cells < 1)
        throw std::invalid_argument("summarize: window needs at least 3 samples");
    if (window.ring.size() <
        static_cast<std::size_t>(window.capacity) * static_cast<std::size_t>(window.cells))
        throw std::invalid_argument("summarize: ring smaller than capacity x cells");
    if (out.size() != static_cast<std::size_t>(window.cells))
        throw std::invalid_argument("summarize: output size must equal cell count");
}

using Sequences = std::array<std::vector<double>, kTextureFeatureCount>;

CellSummary summarize_cell(const SampleWindow& window, int cell, bool flip_ifu, Sequences& seqs) {
    for (auto& seq : seqs) seq.resize(static_cast<std::size_t>(window.length));
    for (int t = 0; t < window.length; ++t) {
        const auto values = window.at(t, cell).values();
        for (std::size_t f = 0; f < values.size(); ++f) seqs[f][static_cast<std::size_t>(t)] = values[f];
    }
    std::array<std::span<const double>, kTextureFeatureCount> views;
    for (std::size_t f = 0; f < views.size(); ++f) views[f] = seqs[f];
    return crowdtex::summarize(views, flip_ifu);
}

}  // namespace

void summarize_serial(const SampleWindow& window, bool flip_ifu, std::span<CellSummary> out) {
    check_window(window, out);
    Sequences seqs;
    for (int c = 0; c < window.cells; ++c)
        out[static_cast<std::size_t>(c)] = summarize_cell(window, c, flip_ifu, seqs);
}

void summarize_parallel(const SampleWindow& window, bool flip_ifu, std::span<CellSummary> out) {
    check_window(window, out);
#pragma omp parallel
    {
        Sequences seqs;
#pragma omp for schedule(static)
        for (int c = 0; c < window.cells; ++c)
            out[static_cast<std::size_t>(c)] = summarize_cell(window, c, flip_ifu, seqs);
    }
}

}  // namespace kernels
}  // namespace crowdtex
