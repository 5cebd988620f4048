#include "alignkit/match_io.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "alignkit/feature_file.hpp"

namespace alignkit {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& id, const std::string& what) {
    throw DataError("match " + id + ": " + what);
}

double require_number(const ordered_json& j, const std::string& id, const std::string& path) {
    if (!j.is_number()) fail(id, path + ": expected a number");
    return j.get<double>();
}

std::string relative_to(const std::filesystem::path& target, const std::filesystem::path& base) {
    std::error_code ec;
    auto rel = std::filesystem::relative(target, base, ec);
    if (ec || rel.empty()) return target.string();
    return rel.generic_string();
}

}  // namespace

MatchRecord load_match(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("match file " + path.string() + ": missing or unreadable");

    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw DataError("match file " + path.string() + ": parse failure: " + e.what());
    }

    MatchRecord match;
    match.base_dir = path.parent_path();
    const std::string id = doc.contains("match_id") && doc["match_id"].is_string()
                               ? doc["match_id"].get<std::string>()
                               : path.filename().string();
    match.match_id = id;

    if (!doc.contains("match_id") || !doc["match_id"].is_string())
        fail(id, "match_id: missing or not a string");
    if (!doc.contains("half") || !doc["half"].is_number_integer())
        fail(id, "half: missing or not an integer");
    match.half = doc["half"].get<int>();
    if (!doc.contains("duration_s")) fail(id, "duration_s: missing");
    match.duration_s = require_number(doc["duration_s"], id, "duration_s");

    if (!doc.contains("commentaries") || !doc["commentaries"].is_array())
        fail(id, "commentaries: missing or not an array");
    std::size_t idx = 0;
    for (const auto& c : doc["commentaries"]) {
        const std::string prefix = "commentaries[" + std::to_string(idx) + "]";
        CommentaryItem item;
        if (!c.contains("text") || !c["text"].is_string())
            fail(id, prefix + ".text: missing or not a string");
        item.text = c["text"].get<std::string>();
        if (!c.contains("t")) fail(id, prefix + ".t: missing");
        item.t = require_number(c["t"], id, prefix + ".t");
        if (c.contains("t_gt") && !c["t_gt"].is_null())
            item.t_gt = require_number(c["t_gt"], id, prefix + ".t_gt");
        if (c.contains("t_aligned") && !c["t_aligned"].is_null())
            item.t_aligned = require_number(c["t_aligned"], id, prefix + ".t_aligned");
        match.commentaries.push_back(std::move(item));
        ++idx;
    }

    if (!doc.contains("frames") || !doc["frames"].is_object())
        fail(id, "frames: missing or not an object");
    const auto& frames = doc["frames"];
    if (!frames.contains("feature_file") || !frames["feature_file"].is_string())
        fail(id, "frames.feature_file: missing or not a string");
    match.frames_file = frames["feature_file"].get<std::string>();
    match.frames.fps =
        frames.contains("fps") ? require_number(frames["fps"], id, "frames.fps") : 1.0;

    auto frame_data = read_feature_file(match.base_dir / match.frames_file, true);
    match.frames.features = std::move(frame_data.features);
    match.frames.timestamps = std::move(frame_data.timestamps);

    if (doc.contains("text_features") && !doc["text_features"].is_null()) {
        const auto& tf = doc["text_features"];
        if (!tf.is_object() || !tf.contains("feature_file") || !tf["feature_file"].is_string())
            fail(id, "text_features.feature_file: missing or not a string");
        match.text_features_file = tf["feature_file"].get<std::string>();
        auto text_data = read_feature_file(match.base_dir / match.text_features_file, false);
        if (text_data.features.rows != match.commentaries.size())
            fail(id, "text_features: " + std::to_string(text_data.features.rows) +
                         " rows but " + std::to_string(match.commentaries.size()) +
                         " commentaries");
        if (text_data.features.cols != match.frames.dim())
            fail(id, "text_features: dimension " + std::to_string(text_data.features.cols) +
                         " does not match frame dimension " + std::to_string(match.frames.dim()));
        for (std::size_t i = 0; i < match.commentaries.size(); ++i) {
            if (std::abs(text_data.timestamps[i] - match.commentaries[i].t) > 0.002)
                fail(id, "text_features: timestamp of row " + std::to_string(i) +
                             " does not match commentaries[" + std::to_string(i) + "].t");
            const float* row = text_data.features.row(i);
            match.commentaries[i].embedding.assign(row, row + text_data.features.cols);
        }
    }

    if (doc.contains("asr_file") && !doc["asr_file"].is_null()) {
        if (!doc["asr_file"].is_string()) fail(id, "asr_file: not a string");
        match.asr_file = doc["asr_file"].get<std::string>();
    }

    validate_match(match);
    return match;
}

void save_match(const std::filesystem::path& path, const MatchRecord& match,
                const AlignProvenance* provenance) {
    ordered_json doc;
    doc["match_id"] = match.match_id;
    doc["half"] = match.half;
    doc["duration_s"] = match.duration_s;

    ordered_json commentaries = ordered_json::array();
    for (const auto& item : match.commentaries) {
        ordered_json c;
        c["text"] = item.text;
        c["t"] = item.t;
        if (item.t_gt) c["t_gt"] = *item.t_gt;
        if (item.t_aligned) c["t_aligned"] = *item.t_aligned;
        c["display"] = format_display_time(match.half, item.t_aligned ? *item.t_aligned : item.t);
        commentaries.push_back(std::move(c));
    }
    doc["commentaries"] = std::move(commentaries);

    const auto out_dir = path.parent_path();
    doc["frames"] = {{"feature_file", relative_to(match.base_dir / match.frames_file, out_dir)},
                     {"fps", match.frames.fps}};
    if (!match.text_features_file.empty())
        doc["text_features"] = {
            {"feature_file", relative_to(match.base_dir / match.text_features_file, out_dir)}};
    if (!match.asr_file.empty())
        doc["asr_file"] = relative_to(match.base_dir / match.asr_file, out_dir);

    if (provenance) {
        doc["provenance"] = {{"checkpoint", provenance->checkpoint_id},
                             {"config",
                              {{"before_s", provenance->before_s},
                               {"after_s", provenance->after_s},
                               {"coarse_mode", provenance->coarse_mode}}},
                             {"stages",
                              {{"coarse", provenance->coarse_stage},
                               {"fine", provenance->fine_stage}}}};
    }

    std::ofstream out(path);
    if (!out) throw DataError("match file " + path.string() + ": cannot open for writing");
    out << doc.dump(2) << "\n";
    if (!out) throw DataError("match file " + path.string() + ": write failed");
}

}  // namespace alignkit
