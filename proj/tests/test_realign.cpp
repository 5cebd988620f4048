#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <alignkit/realign.hpp>

#include "test_helpers.hpp"

#include <cmath>
#include <cstring>

using namespace alignkit;

namespace {

ProjectionHeads random_heads(std::size_t d, std::size_t d_h, std::uint64_t seed) {
    Rng rng(seed);
    ProjectionHeads heads;
    heads.text = init_head<float>(d, d_h, d, rng);
    heads.visual = init_head<float>(d, d_h, d, rng);
    heads.train_seed = seed;
    return heads;
}

/// Restricts a match to the frames inside [lo, hi]; returns the sub-match
/// and the index of the first kept frame.
std::pair<MatchRecord, std::size_t> window_submatch(const MatchRecord& match, std::size_t ci,
                                                    double lo, double hi) {
    MatchRecord sub;
    sub.match_id = match.match_id + "_w";
    sub.half = match.half;
    sub.duration_s = match.duration_s;
    sub.commentaries.push_back(match.commentaries[ci]);
    sub.frames.fps = match.frames.fps;
    std::size_t first = match.frames.size();
    for (std::size_t j = 0; j < match.frames.size(); ++j) {
        const double t = match.frames.timestamps[j];
        if (t < lo || t > hi) continue;
        if (first == match.frames.size()) first = j;
        sub.frames.timestamps.push_back(t);
    }
    sub.frames.features.resize(sub.frames.timestamps.size(), match.frames.dim());
    for (std::size_t r = 0; r < sub.frames.timestamps.size(); ++r)
        std::memcpy(sub.frames.features.row(r), match.frames.features.row(first + r),
                    match.frames.dim() * sizeof(float));
    return {std::move(sub), first};
}

}  // namespace

TEST_CASE("a single-candidate window returns that frame regardless of heads") {
    auto match = testutil::make_planted_match(300, 6, {100.0}, 1);
    match.commentaries[0].t = 150.0;  // away from the planted frame
    RealignConfig cfg;
    cfg.before_s = 0.0;
    cfg.after_s = 0.0;
    auto heads = random_heads(6, 6, 99);
    auto report = realign_match(match, heads, cfg);
    REQUIRE(report.entries.size() == 1);
    CHECK(*match.commentaries[0].t_aligned == 150.0);
    CHECK(report.entries[0].frame_index == 150);
}

TEST_CASE("bit-identical replay embeddings resolve to the earlier timestamp") {
    auto match = testutil::make_planted_match(300, 6, {100.0}, 2);
    // plant an exact copy of frame 100 at 120
    std::memcpy(match.frames.features.row(120), match.frames.features.row(100),
                6 * sizeof(float));
    match.commentaries[0].t = 110.0;  // both copies inside the -45/+30 window

    // identity-free heads would do; use trained-free random heads and check
    // the tie on the two equal rows specifically by making the commentary
    // embedding equal to the planted frame content
    auto heads = random_heads(6, 8, 3);
    auto report = realign_match(match, heads, RealignConfig{});
    // scores of frames 100 and 120 are bitwise equal, so the argmax must
    // report the earlier one whenever either wins
    if (report.entries[0].frame_index == 120) CHECK(false);
    if (report.entries[0].frame_index == 100)
        CHECK(*match.commentaries[0].t_aligned == 100.0);
}

TEST_CASE("every corrected timestamp stays inside the clipped window") {
    Rng rng(4);
    for (int iter = 0; iter < 25; ++iter) {
        const std::size_t d = 4 + rng.below(5);
        const std::size_t duration = 200 + rng.below(200);
        std::vector<double> gts;
        const std::size_t k = 1 + rng.below(5);
        for (std::size_t i = 0; i < k; ++i)
            gts.push_back(70.0 + rng.uniform(0, static_cast<double>(duration) - 140.0));
        auto match = testutil::make_planted_match(duration, d, gts, 1000 + iter);
        for (auto& item : match.commentaries)
            item.t = std::clamp(*item.t_gt + rng.uniform(-30, 30), 0.0, match.duration_s);

        RealignConfig cfg;
        cfg.before_s = rng.uniform(5, 50);
        cfg.after_s = rng.uniform(5, 40);
        auto heads = random_heads(d, d, 2000 + iter);
        auto report = realign_match(match, heads, cfg);
        for (const auto& entry : report.entries) {
            const auto& item = match.commentaries[entry.commentary_index];
            CHECK(*item.t_aligned >= item.t - cfg.before_s - 1e-9);
            CHECK(*item.t_aligned <= item.t + cfg.after_s + 1e-9);
            CHECK(*item.t_aligned >= 0.0);
            CHECK(*item.t_aligned <= match.duration_s);
        }
    }
}

TEST_CASE("windowed argmax equals the exhaustive oracle on the same window") {
    Rng rng(5);
    for (int iter = 0; iter < 30; ++iter) {
        const std::size_t d = 3 + rng.below(6);
        const std::size_t duration = 120 + rng.below(120);
        const std::size_t k = 1 + rng.below(4);
        std::vector<double> gts;
        for (std::size_t i = 0; i < k; ++i)
            gts.push_back(65.0 + rng.uniform(0, static_cast<double>(duration) - 130.0));
        auto match = testutil::make_planted_match(duration, d, gts, 3000 + iter);
        for (auto& item : match.commentaries)
            item.t = std::clamp(*item.t_gt + rng.uniform(-20, 20), 0.0, match.duration_s);

        RealignConfig cfg;
        auto heads = random_heads(d, d + 2, 4000 + iter);
        auto report = realign_match(match, heads, cfg);

        for (std::size_t ci = 0; ci < match.commentaries.size(); ++ci) {
            const double center = match.commentaries[ci].t;
            const double lo = std::max(0.0, center - cfg.before_s);
            const double hi = std::min(match.duration_s, center + cfg.after_s);
            auto [sub, first] = window_submatch(match, ci, lo, hi);
            auto brute = brute_force_align(sub, heads);
            CHECK(first + brute[0] == report.entries[ci].frame_index);
        }
    }
}

TEST_CASE("brute force on a single frame returns it") {
    auto match = testutil::make_planted_match(300, 4, {50.0}, 6);
    auto [sub, first] = window_submatch(match, 0, 120.0, 120.0);
    REQUIRE(sub.frames.size() == 1);
    auto heads = random_heads(4, 4, 7);
    auto brute = brute_force_align(sub, heads);
    CHECK(brute[0] == 0);
}

TEST_CASE("scaling a commentary embedding does not change the chosen frame") {
    // cosine scale invariance holds through the head when its affine parts
    // vanish; biases would re-anchor the pre-activations
    auto match = testutil::make_planted_match(240, 5, {80.0, 120.0}, 8);
    auto heads = random_heads(5, 6, 9);
    std::fill(heads.text.b1.begin(), heads.text.b1.end(), 0.0f);
    std::fill(heads.text.b2.begin(), heads.text.b2.end(), 0.0f);
    auto base = brute_force_align(match, heads);
    for (auto& v : match.commentaries[0].embedding) v *= 3.0f;
    auto scaled = brute_force_align(match, heads);
    CHECK(base == scaled);
}

TEST_CASE("reports are deterministic and ordered by commentary") {
    auto match = testutil::make_planted_match(240, 5, {80.0, 120.0, 160.0}, 10);
    auto heads = random_heads(5, 5, 11);
    auto a = realign_match(match, heads, RealignConfig{});
    auto b = realign_match(match, heads, RealignConfig{});
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].commentary_index == i);
        CHECK(a.entries[i].frame_index == b.entries[i].frame_index);
        CHECK(a.entries[i].score == b.entries[i].score);
    }
    // ground truth present on every item, so the report carries stats
    CHECK(a.stats.has_value());
}

TEST_CASE("an empty candidate window is a data error naming the commentary") {
    auto match = testutil::make_planted_match(300, 4, {100.0}, 12);
    match.commentaries[0].t = 200.0;
    RealignConfig cfg;
    // centers override pushes the window beyond the frame grid
    std::vector<double> centers = {1000.0};
    auto heads = random_heads(4, 4, 13);
    CHECK_THROWS_WITH_AS(realign_match(match, heads, cfg, centers),
                         doctest::Contains("commentaries[0]"), DataError);
}

TEST_CASE("dimension mismatch against the checkpoint is rejected") {
    auto match = testutil::make_planted_match(300, 4, {100.0}, 14);
    auto heads = random_heads(6, 6, 15);
    CHECK_THROWS_AS(realign_match(match, heads, RealignConfig{}), DataError);
}
