#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "alignkit/mlp.hpp"

namespace alignkit {

/// The trained alignment parameters: unshared text and visual projection
/// heads of identical shape, plus the seed they were trained with.
struct ProjectionHeads {
    MlpHead<float> text;
    MlpHead<float> visual;
    std::uint64_t train_seed = 0;

    std::size_t dim_in() const { return text.d_in(); }
};

/// Layout: magic "MTAC", version u32, d_in/d_h/d_out u32 each, then the
/// parameter blocks as little-endian float32 in fixed order (text head
/// w1, b1, w2, b2, then the visual head), then a u64 training-seed footer.
void save_checkpoint(const std::filesystem::path& path, const ProjectionHeads& heads);

ProjectionHeads load_checkpoint(const std::filesystem::path& path);

/// Stable content hash of a checkpoint file (FNV-1a over the bytes),
/// hex-encoded; used as the provenance id of aligned outputs.
std::string checkpoint_id(const std::filesystem::path& path);

}  // namespace alignkit
