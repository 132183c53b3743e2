#include "crowdtex/glcm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "crowdtex/error.hpp"

namespace crowdtex {

Offset offset_of(double theta, int distance) {
    if (distance < 1) throw std::invalid_argument("pair distance must be >= 1");
    if (!std::isfinite(theta)) throw std::invalid_argument("orientation must be finite");
    const double steps = theta / (std::numbers::pi / 4.0);
    const double nearest = std::round(steps);
    if (std::abs(steps - nearest) > 1e-9)
        throw std::invalid_argument("orientation must be a multiple of pi/4");
    static constexpr std::array<Offset, 8> kUnit{{
        {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1},
    }};
    const auto k = static_cast<long long>(nearest);
    const auto slot = static_cast<std::size_t>(((k % 8) + 8) % 8);
    return {kUnit[slot].drow * distance, kUnit[slot].dcol * distance};
}

const char* to_string(OrientationSet set) noexcept {
    switch (set) {
        case OrientationSet::Zero: return "zero";
        case OrientationSet::Four: return "four";
        case OrientationSet::Eight: return "eight";
    }
    return "unknown";
}

OrientationSet parse_orientation_set(const std::string& text) {
    if (text == "zero" || text == "0" || text == "1") return OrientationSet::Zero;
    if (text == "four" || text == "4") return OrientationSet::Four;
    if (text == "eight" || text == "8") return OrientationSet::Eight;
    throw ConfigError("unknown orientation set '" + text + "' (expected zero, four or eight)");
}

PairSpec PairSpec::of(OrientationSet set, int distance) {
    constexpr double quarter = std::numbers::pi / 4.0;
    PairSpec spec;
    spec.distance = distance;
    switch (set) {
        case OrientationSet::Zero: spec.orientations = {0.0}; break;
        case OrientationSet::Four:
            spec.orientations = {0.0, 2 * quarter, 4 * quarter, 6 * quarter};
            break;
        case OrientationSet::Eight:
            spec.orientations.clear();
            for (int k = 0; k < 8; ++k) spec.orientations.push_back(k * quarter);
            break;
    }
    return spec;
}

std::vector<Offset> PairSpec::offsets() const {
    if (orientations.empty()) throw std::invalid_argument("pair spec has no orientations");
    std::vector<Offset> out;
    out.reserve(orientations.size());
    for (double theta : orientations) out.push_back(offset_of(theta, distance));
    return out;
}

GlcmCounts::GlcmCounts(int ng) : ng_(ng) {
    if (ng < 2 || ng > 256) throw std::invalid_argument("ng must lie in [2, 256]");
    counts_.assign(static_cast<std::size_t>(ng) * static_cast<std::size_t>(ng), 0u);
}

std::uint64_t GlcmCounts::total() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

void GlcmCounts::clear() noexcept { std::fill(counts_.begin(), counts_.end(), 0u); }

void accumulate_region(const QuantizedFrame& frame, const Region& region,
                       std::span<const Offset> offsets, GlcmCounts& out) {
    if (out.ng() != frame.ng()) throw std::invalid_argument("GLCM and frame ng differ");
    if (region.row0 < 0 || region.col0 < 0 || region.rows < 0 || region.cols < 0 ||
        region.row0 + region.rows > frame.height() || region.col0 + region.cols > frame.width())
        throw std::invalid_argument("region lies outside the frame");

    const auto levels = frame.levels();
    const auto stride = static_cast<std::ptrdiff_t>(frame.width());
    const auto ng = static_cast<std::size_t>(frame.ng());
    auto counts = out.data();

    for (const Offset& off : offsets) {
        const int r_begin = region.row0 + std::max(0, -off.drow);
        const int r_end = region.row0 + region.rows - std::max(0, off.drow);
        const int c_begin = region.col0 + std::max(0, -off.dcol);
        const int c_end = region.col0 + region.cols - std::max(0, off.dcol);
        if (r_begin >= r_end || c_begin >= c_end) continue;
        const std::ptrdiff_t shift = off.drow * stride + off.dcol;
        for (int r = r_begin; r < r_end; ++r) {
            const std::uint8_t* ref = levels.data() + r * stride;
            const std::uint8_t* nbr = ref + shift;
            for (int c = c_begin; c < c_end; ++c) ++counts[ref[c] * ng + nbr[c]];
        }
    }
}

GlcmCounts accumulate(const QuantizedFrame& frame, const PairSpec& spec) {
    GlcmCounts counts(frame.ng());
    const auto offsets = spec.offsets();
    accumulate_region(frame, Region{0, 0, frame.height(), frame.width()}, offsets, counts);
    return counts;
}

void temporal_diff_into(const GlcmCounts& current, const GlcmCounts& previous, GlcmCounts& out) {
    if (current.ng() != previous.ng())
        throw std::invalid_argument("temporal_diff: ng mismatch (" + std::to_string(current.ng()) +
                                    " vs " + std::to_string(previous.ng()) + ")");
    if (out.ng() != current.ng()) out = GlcmCounts(current.ng());
    const auto cur = current.data();
    const auto prev = previous.data();
    auto dst = out.data();
    for (std::size_t k = 0; k < cur.size(); ++k) dst[k] = cur[k] > prev[k] ? cur[k] - prev[k] : 0u;
}

GlcmCounts temporal_diff(const GlcmCounts& current, const GlcmCounts& previous) {
    GlcmCounts out;
    temporal_diff_into(current, previous, out);
    return out;
}

namespace {

void fill_marginals(NormalizedGlcm& g) {
    const auto ng = static_cast<std::size_t>(g.ng);
    std::vector<double> row(ng, 0.0), col(ng, 0.0);
    for (std::size_t i = 0; i < ng; ++i) {
        for (std::size_t j = 0; j < ng; ++j) {
            const double v = g.p[i * ng + j];
            row[i] += v;
            col[j] += v;
        }
    }
    g.mean_i = g.mean_j = 0.0;
    for (std::size_t k = 0; k < ng; ++k) {
        g.mean_i += static_cast<double>(k) * row[k];
        g.mean_j += static_cast<double>(k) * col[k];
    }
    g.var_i = g.var_j = 0.0;
    for (std::size_t k = 0; k < ng; ++k) {
        const double di = static_cast<double>(k) - g.mean_i;
        const double dj = static_cast<double>(k) - g.mean_j;
        g.var_i += di * di * row[k];
        g.var_j += dj * dj * col[k];
    }
}

}  // namespace

void normalize_into(const GlcmCounts& counts, NormalizedGlcm& g) {
    g.ng = counts.ng();
    const auto src = counts.data();
    g.p.assign(src.size(), 0.0);
    g.mean_i = g.mean_j = g.var_i = g.var_j = 0.0;
    g.degenerate = true;
    const std::uint64_t total = counts.total();
    if (total == 0) return;
    const double denom = static_cast<double>(total);
    for (std::size_t k = 0; k < src.size(); ++k) g.p[k] = static_cast<double>(src[k]) / denom;
    g.degenerate = false;
    fill_marginals(g);
}

NormalizedGlcm normalize(const GlcmCounts& counts) {
    NormalizedGlcm g;
    normalize_into(counts, g);
    return g;
}

NormalizedGlcm from_probabilities(int ng, std::vector<double> p) {
    if (ng < 2 || ng > 256) throw std::invalid_argument("ng must lie in [2, 256]");
    if (p.size() != static_cast<std::size_t>(ng) * static_cast<std::size_t>(ng))
        throw std::invalid_argument("probability table must have ng*ng entries");
    if (std::any_of(p.begin(), p.end(), [](double v) { return !(v >= 0.0) || !std::isfinite(v); }))
        throw std::invalid_argument("probabilities must be finite and non-negative");
    NormalizedGlcm g;
    g.ng = ng;
    g.p = std::move(p);
    g.degenerate = std::all_of(g.p.begin(), g.p.end(), [](double v) { return v == 0.0; });
    if (!g.degenerate) fill_marginals(g);
    return g;
}

}  // namespace crowdtex
