#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crowdtex/frame.hpp"

namespace crowdtex {

/// Pixel displacement from a reference pixel to its neighbour.
struct Offset {
    int drow = 0;
    int dcol = 0;
    friend bool operator==(const Offset&, const Offset&) = default;
};

/// Offset for orientation `theta` (radians, a multiple of pi/4) at `distance`
/// pixels. Row deltas grow downward, so theta = pi/2 points up: (-d, 0).
/// Throws std::invalid_argument for other angles or distance < 1.
Offset offset_of(double theta, int distance);

/// The three orientation configurations used in practice.
enum class OrientationSet { Zero, Four, Eight };

const char* to_string(OrientationSet set) noexcept;
OrientationSet parse_orientation_set(const std::string& text);

/// Set of (theta, d) pixel-pair relationships sharing one distance.
struct PairSpec {
    std::vector<double> orientations{0.0};
    int distance = 1;

    static PairSpec of(OrientationSet set, int distance);

    /// Resolved offsets in orientation order; validates every angle.
    std::vector<Offset> offsets() const;

    friend bool operator==(const PairSpec&, const PairSpec&) = default;
};

/// Ng x Ng co-occurrence counts; entry (i, j) counts ordered pairs whose
/// reference pixel has level i and neighbour has level j.
class GlcmCounts {
public:
    GlcmCounts() = default;
    explicit GlcmCounts(int ng);

    int ng() const noexcept { return ng_; }
    std::uint32_t at(int i, int j) const noexcept { return counts_[index(i, j)]; }
    std::uint32_t& at(int i, int j) noexcept { return counts_[index(i, j)]; }
    std::span<const std::uint32_t> data() const noexcept { return counts_; }
    std::span<std::uint32_t> data() noexcept { return counts_; }
    std::uint64_t total() const noexcept;
    void clear() noexcept;

    friend bool operator==(const GlcmCounts&, const GlcmCounts&) = default;

private:
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(ng_) +
               static_cast<std::size_t>(j);
    }

    int ng_ = 0;
    std::vector<std::uint32_t> counts_;
};

/// Axis-aligned pixel rectangle. Pairs are counted only when both pixels
/// fall inside it.
struct Region {
    int row0 = 0;
    int col0 = 0;
    int rows = 0;
    int cols = 0;
    friend bool operator==(const Region&, const Region&) = default;
};

/// Adds the pairs of `region` for each offset into `out` (no reset).
void accumulate_region(const QuantizedFrame& frame, const Region& region,
                       std::span<const Offset> offsets, GlcmCounts& out);

/// Counts over the whole frame, summed across every orientation in `spec`.
/// A frame smaller than every offset yields all-zero counts.
GlcmCounts accumulate(const QuantizedFrame& frame, const PairSpec& spec);

/// Entrywise max(current - previous, 0). Throws std::invalid_argument when
/// the two matrices have different ng.
GlcmCounts temporal_diff(const GlcmCounts& current, const GlcmCounts& previous);
void temporal_diff_into(const GlcmCounts& current, const GlcmCounts& previous, GlcmCounts& out);

/// Probability-normalized GLCM with the marginal statistics the Haralick
/// features need. `degenerate` marks an all-zero input; p is then all zero.
struct NormalizedGlcm {
    int ng = 0;
    std::vector<double> p;
    double mean_i = 0.0;
    double mean_j = 0.0;
    double var_i = 0.0;
    double var_j = 0.0;
    bool degenerate = true;

    double at(int i, int j) const noexcept {
        return p[static_cast<std::size_t>(i) * static_cast<std::size_t>(ng) +
                 static_cast<std::size_t>(j)];
    }
};

NormalizedGlcm normalize(const GlcmCounts& counts);
/// Same as normalize(), reusing the storage of `out`.
void normalize_into(const GlcmCounts& counts, NormalizedGlcm& out);

/// Builds a NormalizedGlcm from an already-normalized probability table
/// (row-major ng*ng, non-negative). An all-zero table is degenerate.
NormalizedGlcm from_probabilities(int ng, std::vector<double> p);

}  // namespace crowdtex
