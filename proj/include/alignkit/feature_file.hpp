#pragma once

#include <filesystem>
#include <vector>

#include "alignkit/matrix.hpp"

namespace alignkit {

/// Binary feature file contents: one embedding row per entry plus a
/// timestamp in seconds (stored on disk as milliseconds).
struct FeatureFileData {
    Mat<float> features;
    std::vector<double> timestamps;
};

/// Layout: magic "ALNF", version u32, dtype u8 (0 = float32), n u64, d u64,
/// n*d little-endian float32 row-major, then n u64 timestamps in
/// milliseconds.
void write_feature_file(const std::filesystem::path& path, const Mat<float>& features,
                        const std::vector<double>& timestamps_s);

/// Reads and validates an ALNF file. When require_increasing is set the
/// timestamps must be strictly increasing (frame sequences); text feature
/// files keep the source commentary order instead.
FeatureFileData read_feature_file(const std::filesystem::path& path, bool require_increasing);

}  // namespace alignkit
