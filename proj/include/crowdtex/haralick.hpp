#pragma once

#include <array>

#include "crowdtex/glcm.hpp"

namespace crowdtex {

inline constexpr int kTextureFeatureCount = 5;

enum class TextureFeature { AngularSecondMoment, Contrast, Homogeneity, Correlation, Dissimilarity };

const char* to_string(TextureFeature feature) noexcept;

/// The five range-normalized Haralick features of one GLCM, each in [0, 1].
struct TextureSample {
    double angular_second_moment = 0.0;
    double contrast = 0.0;
    double homogeneity = 0.0;
    double correlation = 0.5;
    double dissimilarity = 0.0;

    double operator[](TextureFeature f) const noexcept;
    std::array<double, kTextureFeatureCount> values() const noexcept;

    friend bool operator==(const TextureSample&, const TextureSample&) = default;
};

/// Feature values used for an all-zero (degenerate) GLCM, i.e. a cell with
/// no change after background differencing.
struct DegenerateDefaults {
    TextureSample sample{0.0, 0.0, 0.0, 0.5, 0.0};
};

/// Marginal variances at or below this are treated as zero, which sends the
/// correlation to its neutral value 0.5. Any GLCM built from integer counts
/// with non-zero spread has variance far above it.
inline constexpr double kZeroVarianceTolerance = 1e-14;

TextureSample texture_features(const NormalizedGlcm& g, const DegenerateDefaults& defaults = {});

}  // namespace crowdtex
