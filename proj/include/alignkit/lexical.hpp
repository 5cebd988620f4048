#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace alignkit {

/// Lowercased alphanumeric tokens; every other byte separates. Mask tokens
/// like "[PLAYER]" therefore surface as plain "player".
std::vector<std::string> tokenize(const std::string& text);

/// The fixed 50-entry stop-word list used by the lexical stage.
const std::unordered_set<std::string>& stop_words();

/// Tokens minus stop words, order preserved.
std::vector<std::string> content_tokens(const std::string& text);

/// TF-IDF index over a fixed document collection (the bin summaries).
/// Query terms outside the collection vocabulary are dropped, matching the
/// usual vectorizer convention.
class TfIdfIndex {
public:
    explicit TfIdfIndex(const std::vector<std::string>& documents);

    /// Cosine similarity of the query against every document; zero for
    /// empty documents or an empty query.
    std::vector<double> similarities(const std::string& query) const;

    std::size_t size() const { return doc_count_; }

private:
    struct Posting {
        std::size_t doc = 0;
        double weight = 0.0;
    };
    struct Term {
        double idf = 0.0;
        std::vector<Posting> postings;
    };
    std::unordered_map<std::string, Term> terms_;
    std::vector<double> doc_norms_;
    std::size_t doc_count_ = 0;
};

struct LexicalPrediction {
    std::optional<std::size_t> bin;  // empty when no candidate clears tau
    double best_similarity = 0.0;
};

/// Best-matching document for the query at the given similarity floor.
/// Ties take the earliest document.
LexicalPrediction lexical_best_match(const TfIdfIndex& index, const std::string& query,
                                     double tau);

}  // namespace alignkit
