#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alignkit/types.hpp"

namespace alignkit {

/// Offset statistics: delta_i = pred_i - gt_i, arithmetic means, and for
/// each window length t the percentage of |delta| <= t. windows must be
/// sorted ascending.
OffsetStats compute_offset_stats(std::span<const double> pred, std::span<const double> gt,
                                 std::span<const double> windows);

struct OffsetReport {
    std::string table;                                    // aligned text table
    std::vector<std::pair<double, std::size_t>> histogram;  // (bin_start, count)
    std::string histogram_csv() const;
};

/// Renders the statistics table (avg delta, avg |delta|, then one window
/// row per configured window) plus histogram counts of delta. Bins are
/// half-open [k*bin, (k+1)*bin) anchored at zero and cover the delta range
/// contiguously.
OffsetReport render_report(const OffsetStats& stats, double histogram_bin_s);

}  // namespace alignkit
