#include "alignkit/coarse.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <thread>

#include "alignkit/lexical.hpp"

namespace alignkit {

namespace {

void warn(const CoarseOptions& opts, const std::string& message) {
    if (opts.warn) opts.warn(message);
}

std::string format_seconds(double s) {
    char buf[48];
    if (s == std::floor(s))
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(s));
    else
        std::snprintf(buf, sizeof buf, "%.2f", s);
    return buf;
}

std::string bin_range_label(const EventBin& bin) {
    return format_seconds(bin.start_s) + "-" + format_seconds(bin.end_s()) + "s";
}

/// Splits a completion into candidate summary lines, dropping enumeration
/// decorations the model tends to prepend.
std::vector<std::string> summary_lines(const std::string& reply) {
    std::vector<std::string> lines;
    std::string current;
    auto flush = [&] {
        // strip "1." / "2)" / "-" / "0-10s:" style prefixes
        std::size_t i = 0;
        while (i < current.size() &&
               (std::isspace(static_cast<unsigned char>(current[i])) || current[i] == '-' ||
                current[i] == '*'))
            ++i;
        std::size_t j = i;
        while (j < current.size() &&
               (std::isdigit(static_cast<unsigned char>(current[j])) || current[j] == '-' ||
                current[j] == 's'))
            ++j;
        if (j < current.size() && (current[j] == '.' || current[j] == ')' || current[j] == ':'))
            i = j + 1;
        while (i < current.size() && std::isspace(static_cast<unsigned char>(current[i]))) ++i;
        if (i < current.size()) lines.push_back(current.substr(i));
        current.clear();
    };
    for (char ch : reply) {
        if (ch == '\n')
            flush();
        else
            current.push_back(ch);
    }
    flush();
    return lines;
}

std::optional<double> first_number(const std::string& text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(text[i])) ||
            (text[i] == '-' && i + 1 < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            std::size_t end = i + (text[i] == '-' ? 1 : 0);
            bool seen_dot = false;
            while (end < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[end])) ||
                    (text[end] == '.' && !seen_dot))) {
                if (text[end] == '.') seen_dot = true;
                ++end;
            }
            try {
                return std::stod(text.substr(i, end - i));
            } catch (...) {
                return std::nullopt;
            }
        }
    }
    return std::nullopt;
}

double lexical_timestamp(const CommentaryItem& commentary, const std::vector<EventBin>& bins,
                         const TfIdfIndex& index, const CoarseOptions& opts) {
    if (content_tokens(commentary.text).empty()) {
        warn(opts, "coarse: commentary with empty or stop-word-only text kept at t=" +
                       format_seconds(commentary.t));
        return commentary.t;
    }
    const auto match = lexical_best_match(index, commentary.text, opts.tau);
    if (!match.bin) return commentary.t;
    return bins[*match.bin].midpoint_s();
}

}  // namespace

CoarseMode parse_coarse_mode(const std::string& name) {
    if (name == "off") return CoarseMode::off;
    if (name == "lexical") return CoarseMode::lexical;
    if (name == "llm") return CoarseMode::llm;
    throw DataError("unknown coarse mode '" + name + "' (expected off|lexical|llm)");
}

std::string to_string(CoarseMode mode) {
    switch (mode) {
        case CoarseMode::off: return "off";
        case CoarseMode::lexical: return "lexical";
        case CoarseMode::llm: return "llm";
    }
    return "off";
}

std::string render_summarize_prompt(const std::string& template_text,
                                    const std::vector<EventBin>& bins, std::size_t first,
                                    std::size_t count) {
    std::string ranges, asr_lines;
    for (std::size_t i = first; i < first + count; ++i) {
        if (!ranges.empty()) ranges += ", ";
        ranges += bin_range_label(bins[i]);
        asr_lines += bin_range_label(bins[i]) + ": " + bins[i].text + "\n";
    }
    if (!asr_lines.empty()) asr_lines.pop_back();
    return render_template(template_text, {{"bin_count", std::to_string(count)},
                                           {"bin_ranges", ranges},
                                           {"asr_lines", asr_lines}});
}

void summarize_bins(std::vector<EventBin>& bins, CoarseMode mode, const CoarseOptions& opts) {
    if (mode != CoarseMode::llm) {
        for (auto& bin : bins) bin.summary = bin.text;
        return;
    }
    if (!opts.client) throw EndpointError("summarize_bins: llm mode without a configured client");
    const std::string template_text =
        load_template_file(opts.client->config().summarize_template);

    constexpr std::size_t kBinsPerChunk = 6;  // one minute of narration per request
    const std::size_t chunk_count = (bins.size() + kBinsPerChunk - 1) / kBinsPerChunk;
    std::vector<std::vector<std::string>> chunk_summaries(chunk_count);
    std::vector<std::string> chunk_errors(chunk_count);

    std::atomic<std::size_t> next_chunk{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t chunk = next_chunk.fetch_add(1);
            if (chunk >= chunk_count) return;
            const std::size_t first = chunk * kBinsPerChunk;
            const std::size_t count = std::min(kBinsPerChunk, bins.size() - first);
            try {
                const auto prompt = render_summarize_prompt(template_text, bins, first, count);
                const auto reply = opts.client->complete(prompt, opts.llm_max_tokens);
                chunk_summaries[chunk] = summary_lines(reply);
            } catch (const std::exception& e) {
                chunk_errors[chunk] = e.what();
            }
        }
    };
    const std::size_t threads =
        std::max<std::size_t>(1, std::min(opts.client->config().max_in_flight, chunk_count));
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (std::size_t chunk = 0; chunk < chunk_count; ++chunk) {
        const std::size_t first = chunk * kBinsPerChunk;
        const std::size_t count = std::min(kBinsPerChunk, bins.size() - first);
        const auto& lines = chunk_summaries[chunk];
        if (!chunk_errors[chunk].empty())
            warn(opts, "coarse: summarization chunk " + std::to_string(chunk) +
                           " fell back to raw narration: " + chunk_errors[chunk]);
        else if (lines.size() < count)
            warn(opts, "coarse: summarization chunk " + std::to_string(chunk) + " returned " +
                           std::to_string(lines.size()) + " summaries for " +
                           std::to_string(count) + " bins; missing bins keep raw narration");
        for (std::size_t i = 0; i < count; ++i)
            bins[first + i].summary = i < lines.size() ? lines[i] : bins[first + i].text;
    }
}

double predict_timestamp(const CommentaryItem& commentary, const std::vector<EventBin>& bins,
                         CoarseMode mode, const CoarseOptions& opts) {
    if (bins.empty()) throw DataError("predict_timestamp: no bins");
    if (mode == CoarseMode::off) return commentary.t;

    std::vector<std::string> docs;
    docs.reserve(bins.size());
    for (const auto& bin : bins) docs.push_back(bin.summary);
    const TfIdfIndex index(docs);

    if (mode == CoarseMode::lexical) return lexical_timestamp(commentary, bins, index, opts);

    // llm mode
    if (!opts.client) throw EndpointError("predict_timestamp: llm mode without a client");
    std::vector<std::size_t> offered;
    for (std::size_t i = 0; i < bins.size(); ++i)
        if (std::abs(bins[i].midpoint_s() - commentary.t) <= opts.llm_candidate_span_s)
            offered.push_back(i);
    if (offered.empty()) return commentary.t;

    std::string candidate_lines;
    for (std::size_t i : offered)
        candidate_lines += bin_range_label(bins[i]) + ": " + bins[i].summary + "\n";
    if (!candidate_lines.empty()) candidate_lines.pop_back();

    try {
        const std::string template_text =
            load_template_file(opts.client->config().predict_template);
        const auto prompt =
            render_template(template_text, {{"original_timestamp", format_seconds(commentary.t)},
                                            {"commentary", commentary.text},
                                            {"candidate_lines", candidate_lines}});
        const auto reply = opts.client->complete(prompt, 64);
        const auto value = first_number(reply);
        if (!value) return commentary.t;
        for (std::size_t i : offered)
            if (*value >= bins[i].start_s && *value < bins[i].end_s()) return *value;
        return commentary.t;
    } catch (const EndpointError& e) {
        warn(opts, std::string("coarse: endpoint failure, lexical fallback: ") + e.what());
        return lexical_timestamp(commentary, bins, index, opts);
    }
}

std::vector<double> coarse_align(const MatchRecord& match, const CoarseOptions& opts) {
    if (!match.has_asr())
        throw DataError("match " + match.match_id + ": coarse alignment requires asr_file");
    auto segments = load_asr(match.asr_path());
    auto bins = bin_transcript(segments, match.duration_s, opts.bin_s);
    summarize_bins(bins, opts.mode, opts);

    std::vector<std::string> docs;
    docs.reserve(bins.size());
    for (const auto& bin : bins) docs.push_back(bin.summary);
    const TfIdfIndex index(docs);

    std::vector<double> centers;
    centers.reserve(match.commentaries.size());
    for (const auto& item : match.commentaries) {
        if (opts.mode == CoarseMode::lexical)
            centers.push_back(lexical_timestamp(item, bins, index, opts));
        else
            centers.push_back(predict_timestamp(item, bins, opts.mode, opts));
    }
    return centers;
}

}  // namespace alignkit
