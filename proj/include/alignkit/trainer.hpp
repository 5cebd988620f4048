#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "alignkit/adamw.hpp"
#include "alignkit/checkpoint.hpp"
#include "alignkit/sampler.hpp"
#include "alignkit/types.hpp"

namespace alignkit {

struct TrainConfig {
    std::size_t epochs = 50;
    double lr = 5e-4;
    std::uint64_t seed = 0;
    SamplerConfig sampler;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
    std::size_t hidden_dim = 512;
    std::filesystem::path checkpoint_path;  // written on completion when set
    std::function<void(std::size_t epoch, double mean_loss)> on_epoch;
};

struct TrainResult {
    ProjectionHeads heads;
    std::vector<double> epoch_mean_loss;
};

/// Trains the two projection heads with AdamW on the contrastive alignment
/// loss, one commentary's candidate set per optimizer step. Deterministic
/// given the seed: head init, batch construction and the per-epoch shuffle
/// all derive from it.
TrainResult train(const std::vector<MatchRecord>& dataset, const TrainConfig& cfg);

/// Writes the per-epoch loss trace as CSV (epoch,mean_loss).
void write_loss_trace(const std::filesystem::path& path, const std::vector<double>& losses);

}  // namespace alignkit
