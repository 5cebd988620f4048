#include "alignkit/realign.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "alignkit/contrastive.hpp"
#include "alignkit/metrics.hpp"

namespace alignkit {

namespace {

void check_heads(const MatchRecord& match, const ProjectionHeads& heads) {
    if (heads.text.d_in() != match.frames.dim())
        throw DataError("match " + match.match_id + ": frame dimension " +
                        std::to_string(match.frames.dim()) + " does not match checkpoint d_in " +
                        std::to_string(heads.text.d_in()));
    for (std::size_t i = 0; i < match.commentaries.size(); ++i)
        if (match.commentaries[i].embedding.size() != match.frames.dim())
            throw DataError("match " + match.match_id + ": commentaries[" + std::to_string(i) +
                            "]: missing text embedding (text_features file required)");
}

/// Normalizes rows in place; returns false on an all-zero row.
bool normalize_row(float* row, std::size_t d) {
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) sq += static_cast<double>(row[j]) * row[j];
    if (sq == 0.0) return false;
    const float inv = static_cast<float>(1.0 / std::sqrt(sq));
    for (std::size_t j = 0; j < d; ++j) row[j] *= inv;
    return true;
}

}  // namespace

AlignmentReport realign_match(MatchRecord& match, const ProjectionHeads& heads,
                              const RealignConfig& cfg, std::span<const double> centers) {
    if (cfg.before_s < 0 || cfg.after_s < 0)
        throw DataError("realign: window extents must be non-negative");
    check_heads(match, heads);
    if (!centers.empty() && centers.size() != match.commentaries.size())
        throw DataError("realign: centers size does not match commentary count");

    // project all frames once per match
    Mat<float> projected = head_forward(heads.visual, match.frames.features);
    for (std::size_t j = 0; j < projected.rows; ++j)
        if (!normalize_row(projected.row(j), projected.cols))
            throw DataError("match " + match.match_id + ": projected frame " + std::to_string(j) +
                            " has zero norm");

    const auto& ts = match.frames.timestamps;
    const std::size_t d = match.frames.dim();
    AlignmentReport report;
    report.entries.reserve(match.commentaries.size());

    Mat<float> c_emb(1, d);
    for (std::size_t ci = 0; ci < match.commentaries.size(); ++ci) {
        auto& item = match.commentaries[ci];
        const double center = centers.empty() ? item.t : centers[ci];
        const double lo = std::max(0.0, center - cfg.before_s);
        const double hi = std::min(match.duration_s, center + cfg.after_s);

        const auto begin =
            static_cast<std::size_t>(std::lower_bound(ts.begin(), ts.end(), lo) - ts.begin());
        std::size_t end = begin;
        while (end < ts.size() && ts[end] <= hi) ++end;
        if (begin >= end)
            throw DataError("match " + match.match_id + ": commentaries[" + std::to_string(ci) +
                            "]: empty candidate window [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");

        std::copy(item.embedding.begin(), item.embedding.end(), c_emb.data.begin());
        Mat<float> cp = head_forward(heads.text, c_emb);
        if (!normalize_row(cp.row(0), cp.cols))
            throw DataError("match " + match.match_id + ": commentaries[" + std::to_string(ci) +
                            "]: projected embedding has zero norm");

        // ascending scan with a strict comparison keeps the earliest frame
        // on exact ties (replays duplicate embeddings bit for bit)
        std::size_t best = begin;
        double best_score = -2.0;
        for (std::size_t j = begin; j < end; ++j) {
            const float* a = cp.row(0);
            const float* b = projected.row(j);
            double dot = 0.0;
            for (std::size_t p = 0; p < projected.cols; ++p)
                dot += static_cast<double>(a[p]) * static_cast<double>(b[p]);
            if (dot > best_score) {
                best_score = dot;
                best = j;
            }
        }

        item.t_aligned = ts[best];
        report.entries.push_back(AlignmentEntry{ci, best, best_score, item.t, center, ts[best]});
    }

    const bool all_gt =
        std::all_of(match.commentaries.begin(), match.commentaries.end(),
                    [](const CommentaryItem& item) { return item.t_gt.has_value(); });
    if (all_gt) {
        std::vector<double> pred, gt;
        for (const auto& item : match.commentaries) {
            pred.push_back(*item.t_aligned);
            gt.push_back(*item.t_gt);
        }
        report.stats = compute_offset_stats(pred, gt, kDefaultEvalWindows);
    }
    return report;
}

std::vector<std::size_t> brute_force_align(const MatchRecord& match,
                                           const ProjectionHeads& heads) {
    check_heads(match, heads);
    const std::size_t d = match.frames.dim();
    const std::size_t n = match.frames.size();

    Mat<float> projected = head_forward(heads.visual, match.frames.features);
    for (std::size_t j = 0; j < n; ++j)
        if (!normalize_row(projected.row(j), projected.cols))
            throw DataError("brute_force_align: zero-norm projected frame " + std::to_string(j));

    std::vector<std::size_t> chosen;
    chosen.reserve(match.commentaries.size());
    Mat<float> c_emb(1, d);
    for (const auto& item : match.commentaries) {
        std::copy(item.embedding.begin(), item.embedding.end(), c_emb.data.begin());
        Mat<float> cp = head_forward(heads.text, c_emb);
        if (!normalize_row(cp.row(0), cp.cols))
            throw DataError("brute_force_align: zero-norm projected commentary");

        std::size_t best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            const float* a = cp.row(0);
            const float* b = projected.row(j);
            double dot = 0.0;
            for (std::size_t p = 0; p < projected.cols; ++p)
                dot += static_cast<double>(a[p]) * static_cast<double>(b[p]);
            if (dot > best_score) {
                best_score = dot;
                best = j;
            }
        }
        chosen.push_back(best);
    }
    return chosen;
}

}  // namespace alignkit
