#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alignkit/errors.hpp"
#include "alignkit/matrix.hpp"

namespace alignkit {

/// Commentaries may run past the nominal half duration by this much
/// (stoppage time tolerance).
inline constexpr double kStoppageToleranceS = 300.0;

/// One timestamped text commentary. t is the noisy source timestamp; t_gt
/// the manual ground truth when available; t_aligned the corrected value
/// after realignment. embedding is the pre-projection text feature row.
struct CommentaryItem {
    std::string text;
    double t = 0.0;
    std::optional<double> t_gt;
    std::optional<double> t_aligned;
    std::vector<float> embedding;
};

/// Key-frame embeddings and their timestamps, strictly increasing.
struct FrameFeatureSequence {
    std::vector<double> timestamps;
    Mat<float> features;  // one row per frame
    double fps = 1.0;

    std::size_t size() const { return timestamps.size(); }
    std::size_t dim() const { return features.cols; }
};

/// One match half: the commentary stream plus the frame feature sequence.
struct MatchRecord {
    std::string match_id;
    int half = 1;
    double duration_s = 0.0;
    std::vector<CommentaryItem> commentaries;
    FrameFeatureSequence frames;

    // file references, relative to the match file location
    std::string frames_file;
    std::string text_features_file;
    std::string asr_file;

    /// Directory the match file was loaded from; resolves the references.
    std::filesystem::path base_dir;

    bool has_asr() const { return !asr_file.empty(); }
    std::filesystem::path asr_path() const { return base_dir / asr_file; }
};

/// Offset statistics between predicted and ground-truth timestamps.
struct OffsetStats {
    std::vector<double> deltas;  // predicted - ground truth, seconds
    double avg_delta = 0.0;
    double avg_abs_delta = 0.0;
    std::map<double, double> window_coverage;  // window seconds -> percent
};

inline const std::vector<double> kDefaultEvalWindows = {10.0, 30.0, 45.0, 60.0};

/// Inference-time candidate window around the current timestamp.
struct RealignConfig {
    double before_s = 45.0;
    double after_s = 30.0;
    // ties resolve to the earliest timestamp; replays repeat the first event
};

struct AlignmentEntry {
    std::size_t commentary_index = 0;
    std::size_t frame_index = 0;
    double score = 0.0;
    double t_original = 0.0;
    double t_center = 0.0;  // window center (coarse timestamp when staged)
    double t_aligned = 0.0;
};

struct AlignmentReport {
    std::vector<AlignmentEntry> entries;  // ordered by commentary index
    bool coarse_stage = false;
    bool fine_stage = true;
    std::optional<OffsetStats> stats;  // present when every item carries t_gt
};

/// Derived "H - MM:SS" display string; never parsed back.
std::string format_display_time(int half, double t_seconds);

/// Validates every documented invariant; throws DataError naming the match
/// and field path on the first violation.
void validate_match(const MatchRecord& match);

}  // namespace alignkit
