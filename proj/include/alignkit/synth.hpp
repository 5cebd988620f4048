#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "alignkit/asr.hpp"
#include "alignkit/matrix.hpp"
#include "alignkit/rng.hpp"
#include "alignkit/types.hpp"

namespace alignkit {

/// Noisy-timestamp sampler sigma calibrated so the truncated normal with
/// the default mean reproduces the published 16.63 s absolute-mean offset
/// (see tools/calibrate_offsets).
inline constexpr double kCalibratedOffsetSigmaS = 14.7948458;

struct SynthConfig {
    std::size_t commentaries_per_match = 60;
    double duration_s = 2700.0;
    std::size_t d = 512;
    /// Commentary embeddings are unit vectors drawn from a latent subspace
    /// of this rank. Real text/vision embedding spaces are effectively
    /// low-rank; a full-rank random rotation would need far more than a
    /// desk-scale number of pairs to be learnable at all.
    std::size_t latent_rank = 32;
    double offset_mean_s = 13.85;
    double offset_absmean_target_s = 16.63;
    double offset_min_s = -108.0;
    double offset_max_s = 152.0;
    double offset_sigma_s = kCalibratedOffsetSigmaS;
    double noise_sigma = 0.0;  // embedding noise on planted positives
    double replay_prob = 0.0;  // chance of a replayed copy 15-25 s later
    std::uint64_t seed = 0;

    void validate() const;
};

/// Hidden cross-modal structure shared by every match of one dataset: the
/// rotation mapping text space into frame space and the latent basis the
/// commentary embeddings are drawn from.
struct SynthWorld {
    Mat<double> rotation;      // d x d, orthonormal
    Mat<double> latent_basis;  // latent_rank x d, orthonormal rows
};

/// Per-match planted truth.
struct GroundTruthMap {
    Mat<double> rotation;                 // the dataset's cross-modal map
    std::vector<std::size_t> true_frame;  // per-commentary planted frame index
};

struct SynthMatch {
    MatchRecord match;
    GroundTruthMap truth;
};

Mat<double> random_rotation(std::size_t d, std::uint64_t seed);
SynthWorld make_world(const SynthConfig& cfg);

/// Deterministic function of (cfg, world, match_index). Frames sit on the
/// 1 FPS grid; planted frames are distinct; noisy timestamps are ground
/// truth plus a truncated-normal offset.
SynthMatch generate_match(const SynthConfig& cfg, const SynthWorld& world,
                          std::size_t match_index);
SynthMatch generate_match(const SynthConfig& cfg, std::size_t match_index);

/// Truncated normal offset sampler (rejection).
class OffsetSampler {
public:
    OffsetSampler(double mean_s, double sigma_s, double lo_s, double hi_s);
    double sample(Rng& rng) const;

private:
    double mean_, sigma_, lo_, hi_;
};

/// Monte-Carlo bisection for the sigma whose truncated normal hits the
/// target absolute mean. Ships as tools/calibrate_offsets.
double calibrate_offset_sigma(double mean_s, double target_absmean_s, double lo_s, double hi_s,
                              std::size_t draws, std::uint64_t seed);

/// Deterministic 10,000-entry delta array with absolute mean exactly the
/// published 16.63 s and exactly 26.29% of entries within 10 s.
std::vector<double> reference_delta_array(std::size_t k = 10000);

/// Synthetic narration: one segment inside the 10-second bin of each
/// commentary's t_gt sharing at least three content tokens with it, plus
/// filler segments at the given density per minute.
std::vector<AsrSegment> make_transcript(const MatchRecord& match, std::uint64_t vocab_seed,
                                        double filler_per_minute = 2.0);

struct SplitSpec {
    std::size_t train = 40;
    std::size_t val = 0;
    std::size_t test = 4;
    std::size_t total() const { return train + val + test; }
};

/// Writes match/feature/text/asr files plus manifest.json into out_dir.
void emit_dataset(const SynthConfig& cfg, const SplitSpec& split,
                  const std::filesystem::path& out_dir, double filler_per_minute = 2.0);

}  // namespace alignkit
