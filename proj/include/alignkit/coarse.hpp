#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "alignkit/asr.hpp"
#include "alignkit/llm_client.hpp"
#include "alignkit/types.hpp"

namespace alignkit {

enum class CoarseMode { off, lexical, llm };

CoarseMode parse_coarse_mode(const std::string& name);
std::string to_string(CoarseMode mode);

using WarnSink = std::function<void(const std::string&)>;

struct CoarseOptions {
    CoarseMode mode = CoarseMode::off;
    double bin_s = 10.0;
    double tau = 0.1;  // lexical similarity floor
    /// Candidate bins offered to the model sit within this span of the
    /// original timestamp.
    double llm_candidate_span_s = 90.0;
    int llm_max_tokens = 512;
    const LlmClient* client = nullptr;  // required in llm mode
    WarnSink warn;                      // optional; never throws
};

/// Fills bin summaries. llm mode sends the event-summarization prompt in
/// 60-second chunks and degrades to passthrough (with a warning) for any
/// bin the endpoint fails to cover; passthrough copies the raw text.
void summarize_bins(std::vector<EventBin>& bins, CoarseMode mode, const CoarseOptions& opts);

/// Renders the summarization prompt for a chunk of bins (exposed for the
/// prompt-contract tests).
std::string render_summarize_prompt(const std::string& template_text,
                                    const std::vector<EventBin>& bins, std::size_t first,
                                    std::size_t count);

/// Coarse timestamp for one commentary. lexical mode: TF-IDF cosine over
/// the bin summaries, bin midpoint on a confident match, otherwise the
/// original t. llm mode: the timestamp-prediction prompt; unparseable or
/// out-of-range replies fall back to the original t; endpoint failures
/// fall back to lexical with a warning.
double predict_timestamp(const CommentaryItem& commentary, const std::vector<EventBin>& bins,
                         CoarseMode mode, const CoarseOptions& opts);

/// Stage-one predictions for a whole match (requires match.asr_file).
std::vector<double> coarse_align(const MatchRecord& match, const CoarseOptions& opts);

}  // namespace alignkit
