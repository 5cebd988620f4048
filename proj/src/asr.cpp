#include "alignkit/asr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "alignkit/errors.hpp"

namespace alignkit {

std::vector<AsrSegment> load_asr(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("asr file " + path.string() + ": missing or unreadable");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
        throw DataError("asr file " + path.string() + ": parse failure: " + e.what());
    }
    if (!doc.contains("segments") || !doc["segments"].is_array())
        throw DataError("asr file " + path.string() + ": segments: missing or not an array");
    std::vector<AsrSegment> segments;
    std::size_t i = 0;
    for (const auto& s : doc["segments"]) {
        const std::string prefix = "asr file " + path.string() + ": segments[" +
                                   std::to_string(i) + "]";
        if (!s.contains("start") || !s["start"].is_number() || !s.contains("end") ||
            !s["end"].is_number())
            throw DataError(prefix + ": start/end missing or not numbers");
        AsrSegment seg;
        seg.start = s["start"].get<double>();
        seg.end = s["end"].get<double>();
        seg.text = s.contains("text") && s["text"].is_string() ? s["text"].get<std::string>()
                                                               : std::string();
        if (seg.start < 0) throw DataError(prefix + ": negative start time");
        if (seg.end < seg.start) throw DataError(prefix + ": end precedes start");
        segments.push_back(std::move(seg));
        ++i;
    }
    return segments;
}

void save_asr(const std::filesystem::path& path, const std::vector<AsrSegment>& segments) {
    nlohmann::ordered_json doc;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : segments)
        arr.push_back({{"start", s.start}, {"end", s.end}, {"text", s.text}});
    doc["segments"] = std::move(arr);
    std::ofstream out(path);
    if (!out) throw DataError("asr file " + path.string() + ": cannot open for writing");
    out << doc.dump(2) << "\n";
}

std::vector<EventBin> bin_transcript(const std::vector<AsrSegment>& segments, double duration_s,
                                     double bin_s) {
    if (!(duration_s > 0)) throw DataError("bin_transcript: duration must be positive");
    if (!(bin_s > 0)) throw DataError("bin_transcript: bin length must be positive");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (segments[i].start < 0)
            throw DataError("bin_transcript: segments[" + std::to_string(i) +
                            "]: negative start time");
        if (i > 0 && segments[i].start < segments[i - 1].start)
            throw DataError("bin_transcript: segments not sorted by start at index " +
                            std::to_string(i));
    }

    const auto nbins = static_cast<std::size_t>(std::ceil(duration_s / bin_s));
    std::vector<EventBin> bins(std::max<std::size_t>(nbins, 1));
    for (std::size_t b = 0; b < bins.size(); ++b) {
        bins[b].start_s = static_cast<double>(b) * bin_s;
        bins[b].len_s = bin_s;
    }

    for (const auto& seg : segments) {
        if (seg.text.empty()) continue;
        auto first = static_cast<long long>(std::floor(seg.start / bin_s));
        // [start, end) overlap; instantaneous segments land in their start bin
        auto last = seg.end > seg.start
                        ? static_cast<long long>(std::floor((seg.end - 1e-9) / bin_s))
                        : first;
        first = std::clamp<long long>(first, 0, static_cast<long long>(bins.size()) - 1);
        last = std::clamp<long long>(last, first, static_cast<long long>(bins.size()) - 1);
        for (long long b = first; b <= last; ++b) {
            auto& text = bins[static_cast<std::size_t>(b)].text;
            if (!text.empty()) text += ' ';
            text += seg.text;
        }
    }
    return bins;
}

}  // namespace alignkit
