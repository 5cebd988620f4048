#include "alignkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace alignkit {

OffsetStats compute_offset_stats(std::span<const double> pred, std::span<const double> gt,
                                 std::span<const double> windows) {
    if (pred.empty()) throw std::invalid_argument("compute_offset_stats: empty input");
    if (pred.size() != gt.size())
        throw std::invalid_argument("compute_offset_stats: pred length " +
                                    std::to_string(pred.size()) + " != gt length " +
                                    std::to_string(gt.size()));
    for (std::size_t i = 1; i < windows.size(); ++i)
        if (windows[i] < windows[i - 1])
            throw std::invalid_argument("compute_offset_stats: windows not sorted ascending");

    OffsetStats stats;
    stats.deltas.resize(pred.size());
    double sum = 0.0, abs_sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - gt[i];
        stats.deltas[i] = d;
        sum += d;
        abs_sum += std::abs(d);
    }
    const double k = static_cast<double>(pred.size());
    stats.avg_delta = sum / k;
    stats.avg_abs_delta = abs_sum / k;

    for (double w : windows) {
        std::size_t count = 0;
        for (double d : stats.deltas)
            if (std::abs(d) <= w) ++count;
        stats.window_coverage[w] = 100.0 * static_cast<double>(count) / k;
    }
    return stats;
}

namespace {

std::string fmt(double v, const char* spec = "%.2f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string fmt_window(double w) {
    if (w == std::floor(w)) return std::to_string(static_cast<long long>(w));
    return fmt(w, "%g");
}

}  // namespace

OffsetReport render_report(const OffsetStats& stats, double histogram_bin_s) {
    if (!(histogram_bin_s > 0))
        throw std::invalid_argument("render_report: histogram bin must be positive");

    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("avg(Δ) (s)", fmt(stats.avg_delta));
    rows.emplace_back("avg(|Δ|) (s)", fmt(stats.avg_abs_delta));
    for (const auto& [w, pct] : stats.window_coverage)
        rows.emplace_back("window_" + fmt_window(w) + " (%)", fmt(pct));

    std::size_t label_width = 0, value_width = 0;
    for (const auto& [label, value] : rows) {
        label_width = std::max(label_width, label.size());
        value_width = std::max(value_width, value.size());
    }

    std::ostringstream table;
    for (const auto& [label, value] : rows) {
        table << label << std::string(label_width - label.size(), ' ') << "  "
              << std::string(value_width - value.size(), ' ') << value << "\n";
    }

    OffsetReport report;
    report.table = table.str();

    std::vector<long long> bin_of(stats.deltas.size());
    for (std::size_t i = 0; i < stats.deltas.size(); ++i)
        bin_of[i] = static_cast<long long>(std::floor(stats.deltas[i] / histogram_bin_s));
    if (!bin_of.empty()) {
        const auto [lo_it, hi_it] = std::minmax_element(bin_of.begin(), bin_of.end());
        const long long lo = *lo_it, hi = *hi_it;
        report.histogram.resize(static_cast<std::size_t>(hi - lo + 1));
        for (long long b = lo; b <= hi; ++b)
            report.histogram[static_cast<std::size_t>(b - lo)] = {
                static_cast<double>(b) * histogram_bin_s, 0};
        for (long long b : bin_of) ++report.histogram[static_cast<std::size_t>(b - lo)].second;
    }
    return report;
}

std::string OffsetReport::histogram_csv() const {
    std::ostringstream out;
    out << "bin_start,count\n";
    for (const auto& [start, count] : histogram) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%g", start);
        out << buf << "," << count << "\n";
    }
    return out.str();
}

}  // namespace alignkit
