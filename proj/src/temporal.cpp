#include "crowdtex/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace crowdtex {

const char* to_string(SummaryStat stat) noexcept {
    switch (stat) {
        case SummaryStat::Mean: return "mean";
        case SummaryStat::Std: return "std";
        case SummaryStat::Skewness: return "skew";
        case SummaryStat::Ifu: return "ifu";
    }
    return "unknown";
}

namespace {

void require_length(std::span<const double> x, std::size_t minimum, const char* what) {
    if (x.size() < minimum)
        throw std::invalid_argument(std::string(what) + " needs at least " +
                                    std::to_string(minimum) + " samples, got " +
                                    std::to_string(x.size()));
}

}  // namespace

double mean(std::span<const double> x) {
    require_length(x, 1, "mean");
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
    const double mu = mean(x);
    double m2 = 0.0;
    for (double v : x) m2 += (v - mu) * (v - mu);
    return std::sqrt(m2 / static_cast<double>(x.size()));
}

double skewness(std::span<const double> x) {
    require_length(x, 3, "skewness");
    const double mu = mean(x);
    double m2 = 0.0, m3 = 0.0, scale = 0.0;
    for (double v : x) {
        const double d = v - mu;
        m2 += d * d;
        m3 += d * d * d;
        scale = std::max(scale, std::abs(v));
    }
    const double n = static_cast<double>(x.size());
    m2 /= n;
    m3 /= n;
    const double sigma = std::sqrt(m2);
    // Rounding in mu leaves ~1e-17 residue on constant input.
    if (sigma <= 1e-12 * scale || sigma == 0.0) return 0.0;
    return m3 / (sigma * sigma * sigma);
}

double ifu(std::span<const double> x) {
    require_length(x, 3, "ifu");
    const std::size_t steps = x.size() - 1;
    double total = 0.0;
    for (std::size_t t = 0; t < steps; ++t) total += std::abs(x[t] - x[t + 1]);
    if (total == 0.0) return 0.0;

    double norm_sq = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        const double y = std::abs(x[t] - x[t + 1]) / total;
        norm_sq += y * y;
    }
    const double root = std::sqrt(static_cast<double>(steps));
    const double value = (std::sqrt(norm_sq) * root - 1.0) / (root - 1.0);
    return std::clamp(value, 0.0, 1.0);
}

CellSummary summarize(const std::array<std::span<const double>, kTextureFeatureCount>& sequences,
                      bool flip_ifu) {
    const std::size_t length = sequences[0].size();
    for (const auto& seq : sequences) {
        if (seq.size() != length)
            throw std::invalid_argument("summarize: feature sequences differ in length");
    }
    if (length < 3) throw std::invalid_argument("summarize: sequences need at least 3 samples");

    CellSummary out{};
    for (int f = 0; f < kTextureFeatureCount; ++f) {
        const auto seq = sequences[static_cast<std::size_t>(f)];
        const auto feature = static_cast<TextureFeature>(f);
        const double u = ifu(seq);
        out[summary_slot(feature, SummaryStat::Mean)] = mean(seq);
        out[summary_slot(feature, SummaryStat::Std)] = stddev(seq);
        out[summary_slot(feature, SummaryStat::Skewness)] = skewness(seq);
        out[summary_slot(feature, SummaryStat::Ifu)] = flip_ifu ? 1.0 - u : u;
    }
    return out;
}

}  // namespace crowdtex
