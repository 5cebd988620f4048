#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "alignkit/types.hpp"

namespace alignkit {

/// Stage metadata written into aligned match files.
struct AlignProvenance {
    std::string checkpoint_id;
    double before_s = 45.0;
    double after_s = 30.0;
    std::string coarse_mode = "off";
    bool coarse_stage = false;
    bool fine_stage = true;
};

/// Loads a match file and its referenced feature files, validating every
/// documented invariant. Feature paths resolve relative to the match file.
MatchRecord load_match(const std::filesystem::path& path);

/// Writes a match file (pretty-printed JSON, stable key order). t_gt and
/// t_aligned appear only when present; the display string is derived.
/// Feature file references are rewritten relative to the output location.
void save_match(const std::filesystem::path& path, const MatchRecord& match,
                const AlignProvenance* provenance = nullptr);

}  // namespace alignkit
