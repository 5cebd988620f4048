#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <alignkit/sampler.hpp>

#include "test_helpers.hpp"

#include <algorithm>
#include <cmath>

using namespace alignkit;

namespace {

// brute-force count of the expected candidate set
std::size_t expected_candidates(const MatchRecord& match, double gt, const SamplerConfig& cfg) {
    std::size_t count = 0;
    // nearest frame (positive)
    std::size_t pos = 0;
    double best = 1e18;
    for (std::size_t j = 0; j < match.frames.size(); ++j) {
        const double dist = std::abs(match.frames.timestamps[j] - gt);
        if (dist < best) {
            best = dist;
            pos = j;
        }
    }
    for (std::size_t j = 0; j < match.frames.size(); ++j) {
        const double t = match.frames.timestamps[j];
        if (t < gt - cfg.window_before_s || t > gt + cfg.window_after_s) continue;
        if (j == pos || std::abs(t - gt) >= cfg.negative_gap_s) ++count;
    }
    return count;
}

const TrainBatch& batch_for(const std::vector<TrainBatch>& batches, std::size_t ci) {
    for (const auto& b : batches)
        if (b.commentary_index == ci) return b;
    REQUIRE(false);
    return batches.front();
}

}  // namespace

TEST_CASE("full-coverage window yields 113 candidates at one FPS") {
    auto match = testutil::make_planted_match(1200, 4, {600.0}, 1);
    SamplerConfig cfg;
    auto batches = sample_batches(match, cfg, 0);
    REQUIRE(batches.size() == 1);
    const auto& b = batches[0];
    CHECK(b.candidate_timestamps.size() == 113);
    CHECK(b.candidate_timestamps.size() == expected_candidates(match, 600.0, cfg));
    // positive sits between the 56 left and 56 right negatives
    CHECK(b.positive_index == 56);
    CHECK(b.candidate_timestamps[b.positive_index] == 600.0);
    // negatives respect the 5..60 second band
    for (std::size_t r = 0; r < b.candidate_timestamps.size(); ++r) {
        if (r == b.positive_index) continue;
        const double dist = std::abs(b.candidate_timestamps[r] - 600.0);
        CHECK(dist >= 5.0);
        CHECK(dist <= 60.0);
    }
    CHECK(std::is_sorted(b.candidate_timestamps.begin(), b.candidate_timestamps.end()));
}

TEST_CASE("near the start the left side clips away") {
    auto match = testutil::make_planted_match(400, 4, {2.0}, 2);
    SamplerConfig cfg;
    auto batches = sample_batches(match, cfg, 0);
    const auto& b = batches[0];
    // positive at 2, negatives only on the right: 7..62
    CHECK(b.candidate_timestamps.front() == 2.0);
    CHECK(b.positive_index == 0);
    CHECK(b.candidate_timestamps.size() == 57);
    for (double t : b.candidate_timestamps) CHECK(t >= 0.0);
}

TEST_CASE("near the end the right side clips to the duration") {
    auto match = testutil::make_planted_match(600, 4, {597.0}, 3);
    SamplerConfig cfg;
    auto batches = sample_batches(match, cfg, 0);
    const auto& b = batches[0];
    for (double t : b.candidate_timestamps) CHECK(t <= 600.0);
    CHECK(b.candidate_timestamps.size() == expected_candidates(match, 597.0, cfg));
}

TEST_CASE("a ground truth timestamp on a half-frame midpoint takes the earlier frame") {
    auto match = testutil::make_planted_match(400, 4, {100.0}, 4);
    match.commentaries[0].t_gt = 100.5;  // exactly between frames 100 and 101
    SamplerConfig cfg;
    auto batches = sample_batches(match, cfg, 0);
    const auto& b = batches[0];
    CHECK(b.candidate_timestamps[b.positive_index] == 100.0);
}

TEST_CASE("same seed reproduces order and contents, different seeds reorder") {
    std::vector<double> gts;
    for (int i = 0; i < 12; ++i) gts.push_back(80.0 + 20.0 * i);
    auto match = testutil::make_planted_match(500, 4, gts, 5);
    SamplerConfig cfg;
    auto a = sample_batches(match, cfg, 42);
    auto b = sample_batches(match, cfg, 42);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].commentary_index == b[i].commentary_index);
        CHECK(a[i].positive_index == b[i].positive_index);
        CHECK(a[i].candidate_frames.data == b[i].candidate_frames.data);
        CHECK(a[i].commentary_embedding == b[i].commentary_embedding);
    }
    auto c = sample_batches(match, cfg, 43);
    bool any_different = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].commentary_index != c[i].commentary_index) any_different = true;
    CHECK(any_different);
}

TEST_CASE("batch contents are seed-independent") {
    auto match = testutil::make_planted_match(500, 4, {200.0, 300.0}, 6);
    SamplerConfig cfg;
    auto a = sample_batches(match, cfg, 1);
    auto b = sample_batches(match, cfg, 99);
    CHECK(batch_for(a, 0).candidate_frames.data == batch_for(b, 0).candidate_frames.data);
    CHECK(batch_for(a, 1).positive_index == batch_for(b, 1).positive_index);
}

TEST_CASE("missing ground truth or embedding is an error naming the commentary") {
    auto match = testutil::make_planted_match(400, 4, {100.0, 200.0}, 7);
    SUBCASE("no t_gt") {
        match.commentaries[1].t_gt.reset();
        CHECK_THROWS_WITH_AS(sample_batches(match, {}, 0), doctest::Contains("commentaries[1]"),
                             DataError);
    }
    SUBCASE("no embedding") {
        match.commentaries[0].embedding.clear();
        CHECK_THROWS_WITH_AS(sample_batches(match, {}, 0), doctest::Contains("commentaries[0]"),
                             DataError);
    }
}

TEST_CASE("a window without negatives is an error") {
    auto match = testutil::make_planted_match(400, 4, {100.0}, 8);
    SamplerConfig cfg;
    cfg.window_before_s = 3.0;  // narrower than the negative gap
    cfg.window_after_s = 3.0;
    CHECK_THROWS_WITH_AS(sample_batches(match, cfg, 0), doctest::Contains("no frames in window"),
                         DataError);
}
