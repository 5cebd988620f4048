#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "alignkit/checkpoint.hpp"
#include "alignkit/types.hpp"

namespace alignkit {

/// Projects commentaries and frames through the heads and moves each
/// commentary's timestamp to the best-scoring key frame inside
/// [center - before_s, center + after_s], clipped to [0, duration]. The
/// window centers default to the current timestamps; centers may override
/// them (the coarse stage passes its predictions here). Ties take the
/// earliest frame. Sets t_aligned on the match and returns the report with
/// offset statistics when every commentary carries t_gt.
AlignmentReport realign_match(MatchRecord& match, const ProjectionHeads& heads,
                              const RealignConfig& cfg,
                              std::span<const double> centers = {});

/// Exhaustive argmax of the projected cosine over all frames, windowless.
/// Test oracle for realign_match; deliberately evaluated pairwise instead
/// of through the batched affinity path.
std::vector<std::size_t> brute_force_align(const MatchRecord& match,
                                           const ProjectionHeads& heads);

}  // namespace alignkit
