#include "alignkit/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "alignkit/rng.hpp"

namespace alignkit {

namespace {

/// Index of the frame nearest t; exact midpoints take the earlier frame.
std::size_t nearest_frame(const std::vector<double>& timestamps, double t) {
    const auto it = std::lower_bound(timestamps.begin(), timestamps.end(), t);
    if (it == timestamps.begin()) return 0;
    if (it == timestamps.end()) return timestamps.size() - 1;
    const std::size_t right = static_cast<std::size_t>(it - timestamps.begin());
    const std::size_t left = right - 1;
    return (t - timestamps[left] <= timestamps[right] - t) ? left : right;
}

}  // namespace

std::vector<TrainBatch> sample_batches(const MatchRecord& match, const SamplerConfig& cfg,
                                       std::uint64_t seed) {
    const auto& ts = match.frames.timestamps;
    const std::size_t d = match.frames.dim();
    std::vector<TrainBatch> batches;
    batches.reserve(match.commentaries.size());

    for (std::size_t ci = 0; ci < match.commentaries.size(); ++ci) {
        const auto& item = match.commentaries[ci];
        const std::string prefix =
            "match " + match.match_id + ": commentaries[" + std::to_string(ci) + "]";
        if (!item.t_gt) throw DataError(prefix + ": missing t_gt required for training");
        if (item.embedding.size() != d)
            throw DataError(prefix + ": missing or mismatched text embedding");
        const double gt = *item.t_gt;

        const std::size_t pos = nearest_frame(ts, gt);
        const double lo = std::max(0.0, gt - cfg.window_before_s);
        const double hi = std::min(match.duration_s, gt + cfg.window_after_s);

        std::vector<std::size_t> chosen;
        const auto first =
            static_cast<std::size_t>(std::lower_bound(ts.begin(), ts.end(), lo) - ts.begin());
        for (std::size_t j = first; j < ts.size() && ts[j] <= hi; ++j) {
            if (j == pos) {
                chosen.push_back(j);
                continue;
            }
            const double dist = std::abs(ts[j] - gt);
            if (dist >= cfg.negative_gap_s) chosen.push_back(j);
        }
        // a degenerate window can exclude the positive itself; keep it
        if (!std::binary_search(chosen.begin(), chosen.end(), pos))
            chosen.insert(std::upper_bound(chosen.begin(), chosen.end(), pos), pos);
        if (chosen.size() < 2)
            throw DataError(prefix + ": no frames in window around t_gt=" + std::to_string(gt));

        TrainBatch batch;
        batch.commentary_embedding = item.embedding;
        batch.commentary_index = ci;
        batch.match_id = match.match_id;
        batch.candidate_frames.resize(chosen.size(), d);
        batch.candidate_timestamps.resize(chosen.size());
        for (std::size_t r = 0; r < chosen.size(); ++r) {
            const std::size_t j = chosen[r];
            std::memcpy(batch.candidate_frames.row(r), match.frames.features.row(j),
                        d * sizeof(float));
            batch.candidate_timestamps[r] = ts[j];
            if (j == pos) batch.positive_index = r;
        }
        batches.push_back(std::move(batch));
    }

    Rng rng(seed);
    rng.shuffle(batches);
    return batches;
}

}  // namespace alignkit
