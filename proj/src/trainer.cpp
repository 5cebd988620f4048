#include "alignkit/trainer.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "alignkit/contrastive.hpp"
#include "alignkit/rng.hpp"

#ifdef __GLIBC__
#include <malloc.h>
#endif

namespace alignkit {

namespace {

std::array<ParamBlock<float>, 8> head_blocks(MlpHead<float>& text, MlpHead<float>& visual,
                                             HeadGrads<float>& tg, HeadGrads<float>& vg) {
    return {ParamBlock<float>{"text.w1", text.w1.data, tg.w1.data},
            ParamBlock<float>{"text.b1", text.b1, tg.b1},
            ParamBlock<float>{"text.w2", text.w2.data, tg.w2.data},
            ParamBlock<float>{"text.b2", text.b2, tg.b2},
            ParamBlock<float>{"visual.w1", visual.w1.data, vg.w1.data},
            ParamBlock<float>{"visual.b1", visual.b1, vg.b1},
            ParamBlock<float>{"visual.w2", visual.w2.data, vg.w2.data},
            ParamBlock<float>{"visual.b2", visual.b2, vg.b2}};
}

}  // namespace

TrainResult train(const std::vector<MatchRecord>& dataset, const TrainConfig& cfg) {
    if (dataset.empty()) throw DataError("train: empty dataset");
#ifdef __GLIBC__
    // the step loop churns MB-sized scratch buffers; keep them on the heap
    // instead of round-tripping through mmap (kernel zero-fill per step)
    mallopt(M_MMAP_THRESHOLD, 256 * 1024 * 1024);
#endif
    if (cfg.epochs == 0) throw DataError("train: epochs must be >= 1");
    const std::size_t d = dataset.front().frames.dim();
    for (const auto& match : dataset)
        if (match.frames.dim() != d)
            throw DataError("train: match " + match.match_id + " has frame dimension " +
                            std::to_string(match.frames.dim()) + ", expected " +
                            std::to_string(d));

    // batches are fixed across epochs; only their order is reshuffled
    std::vector<TrainBatch> batches;
    for (std::size_t mi = 0; mi < dataset.size(); ++mi) {
        auto match_batches =
            sample_batches(dataset[mi], cfg.sampler, derive_seed(cfg.seed, 1000 + mi));
        for (auto& b : match_batches) batches.push_back(std::move(b));
    }

    TrainResult result;
    Rng init_rng(derive_seed(cfg.seed, 0));
    result.heads.text = init_head<float>(d, cfg.hidden_dim, d, init_rng);
    result.heads.visual = init_head<float>(d, cfg.hidden_dim, d, init_rng);
    result.heads.train_seed = cfg.seed;

    AdamWConfig opt_cfg;
    opt_cfg.lr = cfg.lr;
    opt_cfg.beta1 = cfg.beta1;
    opt_cfg.beta2 = cfg.beta2;
    opt_cfg.eps = cfg.eps;
    opt_cfg.weight_decay = cfg.weight_decay;
    AdamW<float> optimizer(opt_cfg);

    std::vector<std::size_t> order(batches.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    Mat<float> c_emb(1, d);
    HeadActivations<float> tacts, vacts;
    HeadGrads<float> tgrads, vgrads;
    Mat<float> dcp, dvp;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(cfg.seed, 2000 + epoch));
        shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        for (std::size_t step = 0; step < order.size(); ++step) {
            const TrainBatch& batch = batches[order[step]];
            std::copy(batch.commentary_embedding.begin(), batch.commentary_embedding.end(),
                      c_emb.data.begin());

            auto cp = head_forward(result.heads.text, c_emb, &tacts);
            auto vp = head_forward(result.heads.visual, batch.candidate_frames, &vacts);
            auto aff = affinity(cp, vp);
            auto y = LabelMatrix::one_hot(1, aff.cols, {batch.positive_index});
            auto loss = align_loss(aff, y);
            if (!std::isfinite(loss.value))
                throw DataError("train: non-finite loss at epoch " + std::to_string(epoch) +
                                ", batch " + std::to_string(step) + " (match " + batch.match_id +
                                ", commentary " + std::to_string(batch.commentary_index) + ")");
            epoch_loss += loss.value;

            affinity_backward(cp, vp, aff, loss.grad_affinity, &dcp, &dvp);
            head_backward(result.heads.text, c_emb, tacts, dcp, tgrads);
            head_backward(result.heads.visual, batch.candidate_frames, vacts, dvp, vgrads);

            auto blocks = head_blocks(result.heads.text, result.heads.visual, tgrads, vgrads);
            try {
                optimizer.step(blocks);
            } catch (const std::domain_error& e) {
                throw DataError("train: aborted at epoch " + std::to_string(epoch) + ", batch " +
                                std::to_string(step) + " (match " + batch.match_id +
                                ", commentary " + std::to_string(batch.commentary_index) +
                                "): " + e.what());
            }
        }
        const double mean_loss =
            order.empty() ? 0.0 : epoch_loss / static_cast<double>(order.size());
        result.epoch_mean_loss.push_back(mean_loss);
        if (cfg.on_epoch) cfg.on_epoch(epoch, mean_loss);
    }

    if (!cfg.checkpoint_path.empty()) save_checkpoint(cfg.checkpoint_path, result.heads);
    return result;
}

void write_loss_trace(const std::filesystem::path& path, const std::vector<double>& losses) {
    std::ofstream out(path);
    if (!out) throw DataError("loss trace " + path.string() + ": cannot open for writing");
    out << "epoch,mean_loss\n";
    for (std::size_t i = 0; i < losses.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10g", losses[i]);
        out << i << "," << buf << "\n";
    }
}

}  // namespace alignkit
