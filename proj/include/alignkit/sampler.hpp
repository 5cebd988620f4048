#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alignkit/matrix.hpp"
#include "alignkit/types.hpp"

namespace alignkit {

/// Training candidate window: the key frame nearest the annotated timestamp
/// is the positive; frames between negative_gap_s and the window edge on
/// either side are the negatives.
struct SamplerConfig {
    double window_before_s = 60.0;
    double window_after_s = 60.0;
    double negative_gap_s = 5.0;
};

/// One contrastive training example: a commentary embedding against its
/// candidate frames. candidate_timestamps are ascending and positive_index
/// points at the ground-truth frame.
struct TrainBatch {
    std::vector<float> commentary_embedding;
    Mat<float> candidate_frames;
    std::vector<double> candidate_timestamps;
    std::size_t positive_index = 0;
    std::size_t commentary_index = 0;
    std::string match_id;
};

/// Builds one batch per commentary. Every commentary must carry t_gt and a
/// text embedding. Batch order is shuffled by the seed; contents are a pure
/// function of the match.
std::vector<TrainBatch> sample_batches(const MatchRecord& match, const SamplerConfig& cfg,
                                       std::uint64_t seed);

}  // namespace alignkit
