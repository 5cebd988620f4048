#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace alignkit {

/// A transcribed span of narration audio.
struct AsrSegment {
    double start = 0.0;
    double end = 0.0;
    std::string text;  // may be empty (silence)
};

/// 10-second event bin: raw narration text plus its summary.
struct EventBin {
    double start_s = 0.0;
    double len_s = 10.0;
    std::string text;     // concatenated raw narration overlapping the bin
    std::string summary;  // filled by the summarization stage

    double end_s() const { return start_s + len_s; }
    double midpoint_s() const { return start_s + len_s / 2.0; }
};

std::vector<AsrSegment> load_asr(const std::filesystem::path& path);
void save_asr(const std::filesystem::path& path, const std::vector<AsrSegment>& segments);

/// Tiles [0, duration) with bin_s-second bins and assigns each segment's
/// text to every bin its [start, end) span overlaps, concatenated in time
/// order. Segments must be sorted by start and non-negative.
std::vector<EventBin> bin_transcript(const std::vector<AsrSegment>& segments, double duration_s,
                                     double bin_s = 10.0);

}  // namespace alignkit
