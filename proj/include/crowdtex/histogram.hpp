#pragma once

#include <span>
#include <vector>

#include "crowdtex/temporal.hpp"

namespace crowdtex {

/// Log-spaced histogram layout. Bin widths grow by `growth` moving away from
/// zero; skewness histograms use bins/2 bins per side of zero, scaled to
/// [-skew_bound, skew_bound].
struct HistogramSpec {
    int bins = 16;
    double growth = 2.0;
    double skew_bound = 1.4;
    bool normalize = true;  ///< false keeps raw cell counts

    /// Throws ConfigError unless bins >= 2 and even, growth > 1, skew_bound > 0.
    void validate() const;

    friend bool operator==(const HistogramSpec&, const HistogramSpec&) = default;
};

enum class HistogramDomain { Unit, Skew };

/// bins + 1 strictly increasing edges. Unit domain: e_k = (g^k - 1)/(g^B - 1).
std::vector<double> bin_edges(const HistogramSpec& spec, HistogramDomain domain);

/// Bin holding `value`: values are clamped to the edge range, ties go to the
/// upper bin and the top edge lands in the last bin.
int bin_index(std::span<const double> edges, double value);

HistogramDomain domain_of_slot(int slot) noexcept;

/// Turns per-cell summaries into the 20*B descriptor vector: one histogram
/// per summary slot, taken across cells, in slot order.
class DescriptorAssembler {
public:
    explicit DescriptorAssembler(const HistogramSpec& spec);

    const HistogramSpec& spec() const noexcept { return spec_; }
    std::size_t length() const noexcept {
        return static_cast<std::size_t>(kCellSummarySize) * static_cast<std::size_t>(spec_.bins);
    }
    std::span<const double> edges(HistogramDomain domain) const noexcept {
        return domain == HistogramDomain::Unit ? unit_edges_ : skew_edges_;
    }

    /// Requires at least one cell.
    std::vector<double> assemble(std::span<const CellSummary> cells) const;
    void assemble_into(std::span<const CellSummary> cells, std::span<double> out) const;

private:
    HistogramSpec spec_;
    std::vector<double> unit_edges_;
    std::vector<double> skew_edges_;
};

inline std::vector<double> assemble(std::span<const CellSummary> cells, const HistogramSpec& spec) {
    return DescriptorAssembler(spec).assemble(cells);
}

}  // namespace crowdtex
