#include "alignkit/types.hpp"

#include <cmath>
#include <cstdio>

namespace alignkit {

std::string format_display_time(int half, double t_seconds) {
    const long total = std::lround(std::max(0.0, t_seconds));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%d - %02ld:%02ld", half, total / 60, total % 60);
    return buf;
}

namespace {

[[noreturn]] void fail(const MatchRecord& match, const std::string& what) {
    throw DataError("match " + (match.match_id.empty() ? "<unnamed>" : match.match_id) + ": " +
                    what);
}

}  // namespace

void validate_match(const MatchRecord& match) {
    if (match.match_id.empty()) fail(match, "match_id: empty");
    if (match.half != 1 && match.half != 2)
        fail(match, "half: must be 1 or 2, got " + std::to_string(match.half));
    if (!(match.duration_s > 0)) fail(match, "duration_s: must be positive");
    if (match.commentaries.empty()) fail(match, "commentaries: empty (k >= 1 required)");

    const double limit = match.duration_s + kStoppageToleranceS;
    for (std::size_t i = 0; i < match.commentaries.size(); ++i) {
        const auto& item = match.commentaries[i];
        const std::string prefix = "commentaries[" + std::to_string(i) + "]";
        if (item.text.empty()) fail(match, prefix + ".text: empty");
        if (!(item.t >= 0)) fail(match, prefix + ".t: negative timestamp");
        if (item.t > limit) fail(match, prefix + ".t: beyond duration plus stoppage tolerance");
        if (item.t_gt) {
            if (!(*item.t_gt >= 0)) fail(match, prefix + ".t_gt: negative timestamp");
            if (*item.t_gt > limit)
                fail(match, prefix + ".t_gt: beyond duration plus stoppage tolerance");
        }
        if (item.t_aligned && !(*item.t_aligned >= 0))
            fail(match, prefix + ".t_aligned: negative timestamp");
        if (!item.embedding.empty() && item.embedding.size() != match.frames.dim())
            fail(match, prefix + ".embedding: dimension " + std::to_string(item.embedding.size()) +
                            " does not match frame dimension " +
                            std::to_string(match.frames.dim()));
        for (float v : item.embedding)
            if (!std::isfinite(v)) fail(match, prefix + ".embedding: non-finite value");
    }

    const auto& frames = match.frames;
    if (frames.size() == 0) fail(match, "frames: empty");
    if (frames.features.rows != frames.timestamps.size())
        fail(match, "frames: feature row count " + std::to_string(frames.features.rows) +
                        " does not match timestamp count " +
                        std::to_string(frames.timestamps.size()));
    if (!(frames.fps > 0)) fail(match, "frames.fps: must be positive");
    for (std::size_t i = 1; i < frames.timestamps.size(); ++i)
        if (!(frames.timestamps[i] > frames.timestamps[i - 1]))
            fail(match, "frames: timestamps not strictly increasing at index " +
                            std::to_string(i));
    if (!frames.timestamps.empty() && frames.timestamps.front() < 0)
        fail(match, "frames: negative timestamp at index 0");
}

}  // namespace alignkit
