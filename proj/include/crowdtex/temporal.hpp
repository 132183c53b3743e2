#pragma once

#include <array>
#include <span>

#include "crowdtex/haralick.hpp"

namespace crowdtex {

enum class SummaryStat { Mean, Std, Skewness, Ifu };

inline constexpr int kSummaryStatCount = 4;
inline constexpr int kCellSummarySize = kTextureFeatureCount * kSummaryStatCount;

const char* to_string(SummaryStat stat) noexcept;

/// Twenty values, feature-major: asm.{mean,std,skew,ifu}, contrast.{...}, ...
/// This order is part of the descriptor and file formats.
using CellSummary = std::array<double, kCellSummarySize>;

constexpr int summary_slot(TextureFeature feature, SummaryStat stat) noexcept {
    return static_cast<int>(feature) * kSummaryStatCount + static_cast<int>(stat);
}

// Population moments. mean/stddev need T >= 1; skewness and ifu need T >= 3
// and throw std::invalid_argument otherwise.
double mean(std::span<const double> x);
double stddev(std::span<const double> x);

/// Third standardized moment E[(x-mu)^3] / sigma^3; 0 when sigma vanishes
/// relative to the data magnitude.
double skewness(std::span<const double> x);

/// Inter-frame uniformity of the adjacent absolute differences
/// y_t = |x_t - x_{t+1}| normalized to sum 1:
///   (|y|_2 sqrt(T-1) - 1) / (sqrt(T-1) - 1).
/// Evenly spread change gives 0, change concentrated in one step gives 1,
/// and a constant sequence gives 0.
double ifu(std::span<const double> x);

/// Summaries of the five per-feature sequences (all the same length T >= 3).
/// With `flip_ifu` the IFU slots hold 1 - IFU.
CellSummary summarize(const std::array<std::span<const double>, kTextureFeatureCount>& sequences,
                      bool flip_ifu = false);

}  // namespace crowdtex
