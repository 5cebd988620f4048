#include "alignkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "alignkit/feature_file.hpp"
#include "alignkit/lexical.hpp"
#include "alignkit/match_io.hpp"

namespace alignkit {

namespace {

// paired commentary/narration templates; {p} and {q} take player tokens.
// Each pair shares at least three content tokens by construction.
struct EventTemplate {
    const char* commentary;
    const char* narration;
};

constexpr EventTemplate kEventTemplates[] = {
    {"Corner kick taken by {p} from the left side",
     "{p} swings in the corner kick from the left"},
    {"Powerful shot by {p} on target from outside the box",
     "what a shot from {p} there outside the box"},
    {"Yellow card shown to {p} after a late tackle",
     "{p} goes into the book yellow card for that late tackle"},
    {"Goal scored by {p} with a header at the near post",
     "{p} rises highest and heads it in goal at the near post"},
    {"Free kick won by {p} in a dangerous area",
     "free kick to {p} now very dangerous area this"},
    {"Substitution for the home side {p} replaces {q}",
     "substitution now {p} comes on for {q}"},
    {"Offside flag raised against {p} on the right wing",
     "{p} caught offside again out on the right wing"},
    {"Great save by the keeper {p} tips it over the bar",
     "brilliant save there {p} tips it over the bar"},
    {"Cross delivered by {p} into the crowded box",
     "{p} whips the cross deep into the box"},
    {"Long throw launched by {p} toward the penalty spot",
     "{p} with the long throw aimed at the penalty spot"},
};

constexpr const char* kFillerLines[] = {
    "the crowd singing loudly tonight",
    "lovely evening at the stadium",
    "both sides settling into some rhythm",
    "tempo dropping just slightly",
    "plenty of noise coming over",
    "referee checking something quickly",
    "players taking water near the bench",
    "drums going strong behind that far net",
    "flags waving all around us",
    "supporters enjoying themselves out",
};

std::string fill_template(std::string text, const std::string& p, const std::string& q) {
    auto replace_all = [&](const std::string& key, const std::string& value) {
        std::size_t pos = 0;
        while ((pos = text.find(key, pos)) != std::string::npos) {
            text.replace(pos, key.size(), value);
            pos += value.size();
        }
    };
    replace_all("{p}", p);
    replace_all("{q}", q);
    return text;
}

void gram_schmidt_rows(Mat<double>& m) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        double* ri = m.row(i);
        for (std::size_t j = 0; j < i; ++j) {
            const double* rj = m.row(j);
            double dot = 0.0;
            for (std::size_t k = 0; k < m.cols; ++k) dot += ri[k] * rj[k];
            for (std::size_t k = 0; k < m.cols; ++k) ri[k] -= dot * rj[k];
        }
        double norm = 0.0;
        for (std::size_t k = 0; k < m.cols; ++k) norm += ri[k] * ri[k];
        norm = std::sqrt(norm);
        for (std::size_t k = 0; k < m.cols; ++k) ri[k] /= norm;
    }
}

std::vector<float> isotropic_unit(std::size_t d, Rng& rng) {
    std::vector<double> x(d);
    double sq = 0.0;
    for (auto& v : x) {
        v = rng.normal();
        sq += v * v;
    }
    const double inv = 1.0 / std::sqrt(sq);
    std::vector<float> out(d);
    for (std::size_t i = 0; i < d; ++i) out[i] = static_cast<float>(x[i] * inv);
    return out;
}

// unit vector inside the latent subspace spanned by the basis rows
std::vector<double> latent_unit(const Mat<double>& basis, Rng& rng) {
    std::vector<double> coeff(basis.rows);
    for (auto& v : coeff) v = rng.normal();
    std::vector<double> x(basis.cols, 0.0);
    for (std::size_t i = 0; i < basis.rows; ++i) {
        const double* row = basis.row(i);
        for (std::size_t k = 0; k < basis.cols; ++k) x[k] += coeff[i] * row[k];
    }
    double sq = 0.0;
    for (double v : x) sq += v * v;
    const double inv = 1.0 / std::sqrt(sq);
    for (auto& v : x) v *= inv;
    return x;
}

std::string zero_pad(std::size_t value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%0*zu", width, value);
    return buf;
}

}  // namespace

void SynthConfig::validate() const {
    if (commentaries_per_match == 0) throw DataError("synth: commentaries_per_match must be >= 1");
    if (!(duration_s >= 300.0))
        throw DataError("synth: duration_s must be at least 300 for the planted windows");
    if (d == 0) throw DataError("synth: embedding dimension must be >= 1");
    if (latent_rank == 0 || latent_rank > d)
        throw DataError("synth: latent_rank must be in [1, d]");
    if (!(offset_min_s < 0 && offset_max_s > 0))
        throw DataError("synth: offset range must contain a neighborhood of zero");
    if (noise_sigma < 0) throw DataError("synth: noise_sigma must be >= 0");
    if (replay_prob < 0 || replay_prob > 1)
        throw DataError("synth: replay_prob must be within [0, 1]");
    const auto n = static_cast<std::size_t>(std::floor(duration_s));
    if (commentaries_per_match > (n - 176) / 2)
        throw DataError("synth: too many commentaries for the duration");
}

Mat<double> random_rotation(std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    Mat<double> m(d, d);
    for (auto& v : m.data) v = rng.normal();
    gram_schmidt_rows(m);
    return m;
}

SynthWorld make_world(const SynthConfig& cfg) {
    SynthWorld world;
    world.rotation = random_rotation(cfg.d, derive_seed(cfg.seed, 1));
    Rng rng(derive_seed(cfg.seed, 2));
    world.latent_basis.resize(cfg.latent_rank, cfg.d);
    for (auto& v : world.latent_basis.data) v = rng.normal();
    gram_schmidt_rows(world.latent_basis);
    return world;
}

OffsetSampler::OffsetSampler(double mean_s, double sigma_s, double lo_s, double hi_s)
    : mean_(mean_s), sigma_(sigma_s), lo_(lo_s), hi_(hi_s) {
    if (!(lo_ < hi_)) throw DataError("offset sampler: empty truncation range");
}

double OffsetSampler::sample(Rng& rng) const {
    for (;;) {
        const double x = mean_ + sigma_ * rng.normal();
        if (x >= lo_ && x <= hi_) return x;
    }
}

double calibrate_offset_sigma(double mean_s, double target_absmean_s, double lo_s, double hi_s,
                              std::size_t draws, std::uint64_t seed) {
    auto absmean_at = [&](double sigma) {
        OffsetSampler sampler(mean_s, sigma, lo_s, hi_s);
        Rng rng(seed);
        double acc = 0.0;
        for (std::size_t i = 0; i < draws; ++i) acc += std::abs(sampler.sample(rng));
        return acc / static_cast<double>(draws);
    };
    double lo = 0.5, hi = 80.0;
    for (int iter = 0; iter < 48; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (absmean_at(mid) < target_absmean_s)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> reference_delta_array(std::size_t k) {
    // 26.29% of entries sit exactly on the 10 s window edge (inclusive);
    // the rest share one value chosen so the absolute mean lands exactly
    // on 16.63 in double arithmetic.
    const auto inside = static_cast<std::size_t>(std::llround(0.2629 * static_cast<double>(k)));
    const std::size_t outside = k - inside;
    const double target_abs_sum = 16.63 * static_cast<double>(k);
    const double outside_value =
        (target_abs_sum - 10.0 * static_cast<double>(inside)) / static_cast<double>(outside);

    std::vector<double> deltas;
    deltas.reserve(k);
    for (std::size_t i = 0; i < inside; ++i) deltas.push_back(i % 2 == 0 ? 10.0 : -10.0);
    for (std::size_t i = 0; i < outside; ++i) deltas.push_back(outside_value);
    return deltas;
}

SynthMatch generate_match(const SynthConfig& cfg, const SynthWorld& world,
                          std::size_t match_index) {
    cfg.validate();
    const std::size_t d = cfg.d;
    const auto n = static_cast<std::size_t>(std::floor(cfg.duration_s));
    Rng rng(derive_seed(cfg.seed, 10'000 + match_index));

    SynthMatch result;
    MatchRecord& match = result.match;
    match.match_id = "m" + zero_pad(match_index, 4);
    match.half = 1;
    match.duration_s = cfg.duration_s;
    match.frames.fps = 1.0;
    match.frames.timestamps.resize(n);
    match.frames.features.resize_for_overwrite(n, d);
    for (std::size_t j = 0; j < n; ++j) {
        match.frames.timestamps[j] = static_cast<double>(j);
        const auto row = isotropic_unit(d, rng);
        std::copy(row.begin(), row.end(), match.frames.features.row(j));
    }

    // distinct planted frames away from the half boundaries
    const std::size_t lo_idx = 110, hi_idx = n - 66;
    std::unordered_set<std::size_t> used;
    std::vector<std::size_t> planted;
    while (planted.size() < cfg.commentaries_per_match) {
        const auto idx = lo_idx + static_cast<std::size_t>(rng.below(hi_idx - lo_idx + 1));
        if (used.insert(idx).second) planted.push_back(idx);
    }
    std::sort(planted.begin(), planted.end());
    result.truth.rotation = world.rotation;
    result.truth.true_frame = planted;

    OffsetSampler offsets(cfg.offset_mean_s, cfg.offset_sigma_s, cfg.offset_min_s,
                          cfg.offset_max_s);
    std::size_t player_counter = 0;
    auto next_player = [&] {
        return "player" + std::to_string(match_index) + "x" + std::to_string(player_counter++);
    };

    for (std::size_t ci = 0; ci < cfg.commentaries_per_match; ++ci) {
        CommentaryItem item;
        const std::size_t frame = planted[ci];
        const double gt = match.frames.timestamps[frame];

        const auto c = latent_unit(world.latent_basis, rng);
        item.embedding.resize(d);
        for (std::size_t i = 0; i < d; ++i) item.embedding[i] = static_cast<float>(c[i]);

        // positive frame embedding: rotation applied to c, plus optional
        // unit-direction noise, renormalized
        std::vector<double> v(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            const double* row = result.truth.rotation.row(i);
            for (std::size_t kk = 0; kk < d; ++kk) v[kk] += c[i] * row[kk];
        }
        if (cfg.noise_sigma > 0) {
            const auto eps = isotropic_unit(d, rng);
            for (std::size_t kk = 0; kk < d; ++kk) v[kk] += cfg.noise_sigma * eps[kk];
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        float* row = match.frames.features.row(frame);
        for (std::size_t kk = 0; kk < d; ++kk) row[kk] = static_cast<float>(v[kk] / norm);

        // replayed copy of the event 15-25 s later, never clobbering
        // another commentary's planted frame
        const double replay_draw = rng.uniform();
        if (replay_draw < cfg.replay_prob) {
            const std::size_t offset = 15 + static_cast<std::size_t>(rng.below(11));
            const std::size_t copy_at = frame + offset;
            if (copy_at < n && !used.count(copy_at))
                std::memcpy(match.frames.features.row(copy_at), row, d * sizeof(float));
        }

        item.t_gt = gt;
        const double delta = offsets.sample(rng);
        item.t = std::clamp(gt + delta, 0.0, match.duration_s + kStoppageToleranceS - 1.0);

        const auto& tmpl = kEventTemplates[rng.below(std::size(kEventTemplates))];
        const std::string p = next_player();
        const std::string q = next_player();
        item.text = fill_template(tmpl.commentary, p, q);
        match.commentaries.push_back(std::move(item));
    }
    return result;
}

SynthMatch generate_match(const SynthConfig& cfg, std::size_t match_index) {
    return generate_match(cfg, make_world(cfg), match_index);
}

std::vector<AsrSegment> make_transcript(const MatchRecord& match, std::uint64_t vocab_seed,
                                        double filler_per_minute) {
    Rng rng(vocab_seed);
    std::vector<AsrSegment> segments;

    static const char* kPrefix[] = {"and", "now", "oh", "well"};
    static const char* kSuffix[] = {"certainly", "once more", "you love seeing", "right away"};

    for (const auto& item : match.commentaries) {
        if (!item.t_gt) throw DataError("make_transcript: commentary without t_gt");
        const double gt = *item.t_gt;
        const double bin_lo = std::floor(gt / 10.0) * 10.0;
        const double bin_hi = bin_lo + 10.0;

        AsrSegment seg;
        // keep the segment inside the commentary's own 10 s bin and within
        // a few seconds of the event
        seg.start = std::max(bin_lo, gt - 2.0);
        seg.end = std::min(bin_hi - 0.05, gt + 2.5);
        if (seg.end <= seg.start) seg.end = seg.start + 0.5;

        // narration re-words the commentary: join its content tokens so at
        // least three survive verbatim
        auto tokens = content_tokens(item.text);
        std::string body;
        for (const auto& tok : tokens) {
            if (!body.empty()) body += ' ';
            body += tok;
        }
        seg.text = std::string(kPrefix[rng.below(std::size(kPrefix))]) + " " + body + " " +
                   kSuffix[rng.below(std::size(kSuffix))];
        segments.push_back(std::move(seg));
    }

    const auto filler_count =
        static_cast<std::size_t>(std::floor(filler_per_minute * match.duration_s / 60.0));
    for (std::size_t i = 0; i < filler_count; ++i) {
        AsrSegment seg;
        seg.start = rng.uniform(0.0, std::max(1.0, match.duration_s - 4.0));
        seg.end = seg.start + 3.0;
        seg.text = kFillerLines[rng.below(std::size(kFillerLines))];
        segments.push_back(std::move(seg));
    }

    std::sort(segments.begin(), segments.end(), [](const AsrSegment& a, const AsrSegment& b) {
        if (a.start != b.start) return a.start < b.start;
        if (a.end != b.end) return a.end < b.end;
        return a.text < b.text;
    });
    return segments;
}

void emit_dataset(const SynthConfig& cfg, const SplitSpec& split,
                  const std::filesystem::path& out_dir, double filler_per_minute) {
    cfg.validate();
    if (split.total() == 0) throw DataError("synth: split contains zero matches");
    std::filesystem::create_directories(out_dir);

    const SynthWorld world = make_world(cfg);
    nlohmann::ordered_json manifest;
    std::vector<std::string> train_ids, val_ids, test_ids;

    for (std::size_t idx = 0; idx < split.total(); ++idx) {
        auto generated = generate_match(cfg, world, idx);
        MatchRecord& match = generated.match;
        const std::string& id = match.match_id;

        match.frames_file = id + ".frames.alnf";
        match.text_features_file = id + ".text.alnf";
        match.asr_file = id + ".asr.json";
        match.base_dir = out_dir;

        write_feature_file(out_dir / match.frames_file, match.frames.features,
                           match.frames.timestamps);
        Mat<float> text_features(match.commentaries.size(), cfg.d);
        std::vector<double> text_ts(match.commentaries.size());
        for (std::size_t i = 0; i < match.commentaries.size(); ++i) {
            std::copy(match.commentaries[i].embedding.begin(),
                      match.commentaries[i].embedding.end(), text_features.row(i));
            text_ts[i] = match.commentaries[i].t;
        }
        write_feature_file(out_dir / match.text_features_file, text_features, text_ts);
        save_asr(out_dir / match.asr_file,
                 make_transcript(match, derive_seed(cfg.seed, 20'000 + idx), filler_per_minute));
        save_match(out_dir / (id + ".match.json"), match);

        if (idx < split.train)
            train_ids.push_back(id);
        else if (idx < split.train + split.val)
            val_ids.push_back(id);
        else
            test_ids.push_back(id);
    }

    manifest["train"] = train_ids;
    manifest["val"] = val_ids;
    manifest["test"] = test_ids;
    manifest["seed"] = cfg.seed;
    manifest["config"] = {{"commentaries_per_match", cfg.commentaries_per_match},
                          {"duration_s", cfg.duration_s},
                          {"d", cfg.d},
                          {"latent_rank", cfg.latent_rank},
                          {"offset_mean_s", cfg.offset_mean_s},
                          {"offset_absmean_target_s", cfg.offset_absmean_target_s},
                          {"offset_min_s", cfg.offset_min_s},
                          {"offset_max_s", cfg.offset_max_s},
                          {"offset_sigma_s", cfg.offset_sigma_s},
                          {"noise_sigma", cfg.noise_sigma},
                          {"replay_prob", cfg.replay_prob},
                          {"filler_per_minute", filler_per_minute}};
    std::ofstream out(out_dir / "manifest.json");
    if (!out) throw DataError("manifest: cannot open for writing");
    out << manifest.dump(2) << "\n";
}

}  // namespace alignkit
