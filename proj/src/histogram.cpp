#include "crowdtex/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crowdtex/error.hpp"

namespace crowdtex {

void HistogramSpec::validate() const {
    if (bins < 2 || bins % 2 != 0) throw ConfigError("histogram bins must be even and >= 2");
    if (!(growth > 1.0) || !std::isfinite(growth)) throw ConfigError("histogram growth must be > 1");
    if (!(skew_bound > 0.0)) throw ConfigError("skew bound must be positive");
}

namespace {

std::vector<double> log_edges(int bins, double growth) {
    std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
    const double denom = std::pow(growth, bins) - 1.0;
    for (int k = 0; k <= bins; ++k) edges[static_cast<std::size_t>(k)] = (std::pow(growth, k) - 1.0) / denom;
    edges.front() = 0.0;
    edges.back() = 1.0;
    return edges;
}

}  // namespace

std::vector<double> bin_edges(const HistogramSpec& spec, HistogramDomain domain) {
    spec.validate();
    if (domain == HistogramDomain::Unit) {
        auto edges = log_edges(spec.bins, spec.growth);
        for (std::size_t k = 1; k < edges.size(); ++k) {
            if (!(edges[k] > edges[k - 1]))
                throw ConfigError("histogram edges collapse; reduce bins or growth");
        }
        return edges;
    }

    const int half = spec.bins / 2;
    const auto positive = log_edges(half, spec.growth);
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(spec.bins) + 1);
    for (int k = half; k >= 1; --k) edges.push_back(-spec.skew_bound * positive[static_cast<std::size_t>(k)]);
    edges.push_back(0.0);
    for (int k = 1; k <= half; ++k) edges.push_back(spec.skew_bound * positive[static_cast<std::size_t>(k)]);
    for (std::size_t k = 1; k < edges.size(); ++k) {
        if (!(edges[k] > edges[k - 1]))
            throw ConfigError("histogram edges collapse; reduce bins or growth");
    }
    return edges;
}

int bin_index(std::span<const double> edges, double value) {
    if (std::isnan(value)) throw std::invalid_argument("cannot bin NaN");
    const int bins = static_cast<int>(edges.size()) - 1;
    const double v = std::clamp(value, edges.front(), edges.back());
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    const int idx = static_cast<int>(it - edges.begin()) - 1;
    return std::clamp(idx, 0, bins - 1);
}

HistogramDomain domain_of_slot(int slot) noexcept {
    return slot % kSummaryStatCount == static_cast<int>(SummaryStat::Skewness) ? HistogramDomain::Skew
                                                                               : HistogramDomain::Unit;
}

DescriptorAssembler::DescriptorAssembler(const HistogramSpec& spec)
    : spec_(spec),
      unit_edges_(bin_edges(spec, HistogramDomain::Unit)),
      skew_edges_(bin_edges(spec, HistogramDomain::Skew)) {}

std::vector<double> DescriptorAssembler::assemble(std::span<const CellSummary> cells) const {
    std::vector<double> out(length(), 0.0);
    assemble_into(cells, out);
    return out;
}

void DescriptorAssembler::assemble_into(std::span<const CellSummary> cells, std::span<double> out) const {
    if (cells.empty()) throw std::invalid_argument("assemble needs at least one cell");
    if (out.size() != length()) throw std::invalid_argument("descriptor buffer has the wrong length");
    std::fill(out.begin(), out.end(), 0.0);
    const auto bins = static_cast<std::size_t>(spec_.bins);
    for (int slot = 0; slot < kCellSummarySize; ++slot) {
        const auto edges = this->edges(domain_of_slot(slot));
        double* hist = out.data() + static_cast<std::size_t>(slot) * bins;
        for (const auto& cell : cells) hist[bin_index(edges, cell[static_cast<std::size_t>(slot)])] += 1.0;
    }
    if (spec_.normalize) {
        const double n = static_cast<double>(cells.size());
        for (double& v : out) v /= n;
    }
}

}  // namespace crowdtex
