#include "crowdtex/haralick.hpp"

#include <algorithm>
#include <cmath>

namespace crowdtex {

const char* to_string(TextureFeature feature) noexcept {
    switch (feature) {
        case TextureFeature::AngularSecondMoment: return "asm";
        case TextureFeature::Contrast: return "contrast";
        case TextureFeature::Homogeneity: return "homogeneity";
        case TextureFeature::Correlation: return "correlation";
        case TextureFeature::Dissimilarity: return "dissimilarity";
    }
    return "unknown";
}

double TextureSample::operator[](TextureFeature f) const noexcept {
    switch (f) {
        case TextureFeature::AngularSecondMoment: return angular_second_moment;
        case TextureFeature::Contrast: return contrast;
        case TextureFeature::Homogeneity: return homogeneity;
        case TextureFeature::Correlation: return correlation;
        case TextureFeature::Dissimilarity: return dissimilarity;
    }
    return 0.0;
}

std::array<double, kTextureFeatureCount> TextureSample::values() const noexcept {
    return {angular_second_moment, contrast, homogeneity, correlation, dissimilarity};
}

TextureSample texture_features(const NormalizedGlcm& g, const DegenerateDefaults& defaults) {
    if (g.degenerate) return defaults.sample;

    const int ng = g.ng;
    double asm_sum = 0.0, contrast_sum = 0.0, homogeneity_sum = 0.0, dissimilarity_sum = 0.0;
    double covariance = 0.0;
    for (int i = 0; i < ng; ++i) {
        const double di = i - g.mean_i;
        const double* row = g.p.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(ng);
        for (int j = 0; j < ng; ++j) {
            const double p = row[j];
            if (p == 0.0) continue;
            const double diff = static_cast<double>(i - j);
            const double sq = diff * diff;
            asm_sum += p * p;
            contrast_sum += p * sq;
            homogeneity_sum += p / (1.0 + sq);
            dissimilarity_sum += p * std::abs(diff);
            covariance += p * di * (j - g.mean_j);
        }
    }

    const double span = static_cast<double>(ng - 1);
    TextureSample s;
    s.angular_second_moment = std::clamp(asm_sum, 0.0, 1.0);
    s.contrast = std::clamp(contrast_sum / (span * span), 0.0, 1.0);
    s.homogeneity = std::clamp(homogeneity_sum, 0.0, 1.0);
    s.dissimilarity = std::clamp(dissimilarity_sum / span, 0.0, 1.0);
    if (g.var_i <= kZeroVarianceTolerance || g.var_j <= kZeroVarianceTolerance) {
        s.correlation = 0.5;
    } else {
        const double pearson = covariance / std::sqrt(g.var_i * g.var_j);
        s.correlation = std::clamp((pearson + 1.0) / 2.0, 0.0, 1.0);
    }
    return s;
}

}  // namespace crowdtex
