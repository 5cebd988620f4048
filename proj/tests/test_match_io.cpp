#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <alignkit/feature_file.hpp>
#include <alignkit/match_io.hpp>
#include <alignkit/rng.hpp>

#include <filesystem>
#include <fstream>

using namespace alignkit;
namespace fs = std::filesystem;

namespace {

struct TmpDir {
    fs::path path;
    explicit TmpDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TmpDir() { fs::remove_all(path); }
};

Mat<float> make_features(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    Mat<float> m(n, d);
    for (auto& v : m.data) v = static_cast<float>(rng.uniform(-1, 1));
    return m;
}

std::vector<double> grid_timestamps(std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i);
    return t;
}

// writes a minimal well-formed match with n frames and the given commentary
// entries; returns the match file path
fs::path write_fixture(const fs::path& dir, std::size_t n, std::size_t d,
                       const std::string& commentary_json, bool with_text_features = false,
                       const std::string& extra = "") {
    write_feature_file(dir / "m.frames.alnf", make_features(n, d, 1), grid_timestamps(n));
    std::string text_block;
    if (with_text_features) {
        // fixture uses commentary timestamps 10.0 / 20.5
        write_feature_file(dir / "m.text.alnf", make_features(2, d, 2), {10.0, 20.5});
        text_block = R"(,"text_features": {"feature_file": "m.text.alnf"})";
    }
    std::ofstream out(dir / "m.match.json");
    out << R"({"match_id": "m0001", "half": 1, "duration_s": )" << n <<
        R"(, "commentaries": [)" << commentary_json << R"(],
        "frames": {"feature_file": "m.frames.alnf", "fps": 1.0})" << text_block << extra << "}";
    out.close();
    return dir / "m.match.json";
}

}  // namespace

TEST_CASE("feature file round trip is exact") {
    TmpDir tmp("alignkit_ff_test");
    auto features = make_features(7, 5, 3);
    std::vector<double> ts = {0.0, 1.5, 2.25, 7.0, 9.125, 100.001, 2700.0};
    write_feature_file(tmp.path / "x.alnf", features, ts);
    auto data = read_feature_file(tmp.path / "x.alnf", true);
    CHECK(data.features.data == features.data);
    for (std::size_t i = 0; i < ts.size(); ++i)
        CHECK(data.timestamps[i] == doctest::Approx(ts[i]).epsilon(1e-9));
}

TEST_CASE("feature file rejects bad magic and truncation") {
    TmpDir tmp("alignkit_ff_bad");
    {
        std::ofstream out(tmp.path / "bad.alnf", std::ios::binary);
        out << "NOPE12345";
    }
    CHECK_THROWS_WITH_AS(read_feature_file(tmp.path / "bad.alnf", true),
                         doctest::Contains("bad magic"), DataError);
    {
        auto features = make_features(4, 3, 4);
        write_feature_file(tmp.path / "ok.alnf", features, grid_timestamps(4));
        auto size = fs::file_size(tmp.path / "ok.alnf");
        fs::resize_file(tmp.path / "ok.alnf", size - 9);
    }
    CHECK_THROWS_AS(read_feature_file(tmp.path / "ok.alnf", true), DataError);
    CHECK_THROWS_AS(read_feature_file(tmp.path / "missing.alnf", true), DataError);
}

TEST_CASE("well-formed match loads with expected counts") {
    TmpDir tmp("alignkit_load_ok");
    auto path = write_fixture(tmp.path, 120, 4,
                              R"({"text": "corner kick", "t": 10.0, "t_gt": 9.0},
                                 {"text": "yellow card", "t": 20.5},
                                 {"text": "free kick", "t": 55.0, "t_gt": 52.0})");
    auto match = load_match(path);
    CHECK(match.match_id == "m0001");
    CHECK(match.commentaries.size() == 3);
    CHECK(match.frames.size() == 120);
    CHECK(match.frames.dim() == 4);
    CHECK(match.commentaries[0].t_gt.has_value());
    CHECK_FALSE(match.commentaries[1].t_gt.has_value());
    CHECK(match.commentaries[1].embedding.empty());
}

TEST_CASE("match with all t_gt omitted is still valid") {
    TmpDir tmp("alignkit_load_nogt");
    auto path = write_fixture(tmp.path, 30, 3, R"({"text": "goal", "t": 12.0})");
    auto match = load_match(path);
    CHECK_FALSE(match.commentaries[0].t_gt.has_value());
}

TEST_CASE("decreasing frame timestamps are rejected") {
    TmpDir tmp("alignkit_load_dec");
    auto features = make_features(3, 2, 5);
    write_feature_file(tmp.path / "m.frames.alnf", features, {0.0, 2.0, 1.0});
    std::ofstream(tmp.path / "m.match.json")
        << R"({"match_id": "m1", "half": 1, "duration_s": 10,
               "commentaries": [{"text": "x", "t": 1.0}],
               "frames": {"feature_file": "m.frames.alnf", "fps": 1.0}})";
    CHECK_THROWS_WITH_AS(load_match(tmp.path / "m.match.json"),
                         doctest::Contains("timestamps not strictly increasing"), DataError);
}

TEST_CASE("invariant violations are reported with a field path") {
    TmpDir tmp("alignkit_load_inv");
    SUBCASE("negative commentary timestamp") {
        auto path = write_fixture(tmp.path, 10, 2, R"({"text": "x", "t": -3.0})");
        CHECK_THROWS_WITH_AS(load_match(path), doctest::Contains("commentaries[0].t"), DataError);
    }
    SUBCASE("empty commentary text") {
        auto path = write_fixture(tmp.path, 10, 2, R"({"text": "", "t": 3.0})");
        CHECK_THROWS_WITH_AS(load_match(path), doctest::Contains("text"), DataError);
    }
    SUBCASE("timestamp beyond stoppage tolerance") {
        auto path = write_fixture(tmp.path, 10, 2, R"({"text": "x", "t": 400.0})");
        CHECK_THROWS_WITH_AS(load_match(path), doctest::Contains("stoppage"), DataError);
    }
    SUBCASE("bad half") {
        write_feature_file(tmp.path / "m.frames.alnf", make_features(5, 2, 6),
                           grid_timestamps(5));
        std::ofstream(tmp.path / "m.match.json")
            << R"({"match_id": "m1", "half": 3, "duration_s": 10,
                   "commentaries": [{"text": "x", "t": 1.0}],
                   "frames": {"feature_file": "m.frames.alnf", "fps": 1.0}})";
        CHECK_THROWS_WITH_AS(load_match(tmp.path / "m.match.json"), doctest::Contains("half"),
                             DataError);
    }
}

TEST_CASE("missing feature file is reported with the path") {
    TmpDir tmp("alignkit_load_missing");
    std::ofstream(tmp.path / "m.match.json")
        << R"({"match_id": "m1", "half": 1, "duration_s": 10,
               "commentaries": [{"text": "x", "t": 1.0}],
               "frames": {"feature_file": "nowhere.alnf", "fps": 1.0}})";
    CHECK_THROWS_WITH_AS(load_match(tmp.path / "m.match.json"), doctest::Contains("nowhere.alnf"),
                         DataError);
}

TEST_CASE("parse failures carry the file name") {
    TmpDir tmp("alignkit_load_parse");
    std::ofstream(tmp.path / "broken.json") << "{not json";
    CHECK_THROWS_WITH_AS(load_match(tmp.path / "broken.json"), doctest::Contains("parse failure"),
                         DataError);
}

TEST_CASE("text features attach embeddings to commentaries") {
    TmpDir tmp("alignkit_load_text");
    auto path = write_fixture(tmp.path, 25, 3,
                              R"({"text": "corner", "t": 10.0}, {"text": "goal", "t": 20.5})",
                              true);
    auto match = load_match(path);
    REQUIRE(match.commentaries.size() == 2);
    CHECK(match.commentaries[0].embedding.size() == 3);
    CHECK(match.commentaries[1].embedding.size() == 3);
}

TEST_CASE("text feature row count must match commentary count") {
    TmpDir tmp("alignkit_load_text_mismatch");
    write_feature_file(tmp.path / "m.frames.alnf", make_features(10, 3, 7), grid_timestamps(10));
    write_feature_file(tmp.path / "m.text.alnf", make_features(3, 3, 8), {1.0, 2.0, 3.0});
    std::ofstream(tmp.path / "m.match.json")
        << R"({"match_id": "m1", "half": 1, "duration_s": 10,
               "commentaries": [{"text": "x", "t": 1.0}],
               "frames": {"feature_file": "m.frames.alnf", "fps": 1.0},
               "text_features": {"feature_file": "m.text.alnf"}})";
    CHECK_THROWS_WITH_AS(load_match(tmp.path / "m.match.json"),
                         doctest::Contains("1 commentaries"), DataError);
}

TEST_CASE("save and reload round-trips the record") {
    TmpDir tmp("alignkit_save_rt");
    auto path = write_fixture(tmp.path, 40, 3,
                              R"({"text": "corner kick", "t": 10.0, "t_gt": 9.0},
                                 {"text": "goal", "t": 20.5, "t_gt": 21.0})",
                              true);
    auto match = load_match(path);
    match.commentaries[0].t_aligned = 8.0;
    match.commentaries[1].t_aligned = 21.0;

    AlignProvenance prov;
    prov.checkpoint_id = "abc123";
    prov.coarse_mode = "lexical";
    prov.coarse_stage = true;
    fs::create_directories(tmp.path / "out");
    save_match(tmp.path / "out" / "aligned.match.json", match, &prov);

    auto reloaded = load_match(tmp.path / "out" / "aligned.match.json");
    CHECK(reloaded.match_id == match.match_id);
    REQUIRE(reloaded.commentaries.size() == 2);
    CHECK(reloaded.commentaries[0].t_aligned == 8.0);
    CHECK(reloaded.commentaries[0].t_gt == 9.0);
    CHECK(reloaded.commentaries[0].t == 10.0);
    CHECK(reloaded.commentaries[0].embedding.size() == 3);
    CHECK(reloaded.frames.size() == 40);

    // provenance block present in the written file
    std::ifstream in(tmp.path / "out" / "aligned.match.json");
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(body.find("\"checkpoint\": \"abc123\"") != std::string::npos);
    CHECK(body.find("\"coarse\": true") != std::string::npos);
}

TEST_CASE("display strings are derived, never parsed") {
    CHECK(format_display_time(1, 612.4) == "1 - 10:12");
    CHECK(format_display_time(2, 0.0) == "2 - 00:00");
}
