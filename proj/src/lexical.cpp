#include "alignkit/lexical.hpp"

#include <cctype>
#include <cmath>

namespace alignkit {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char ch : text) {
        if (std::isalnum(ch)) {
            current.push_back(static_cast<char>(std::tolower(ch)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

const std::unordered_set<std::string>& stop_words() {
    // fixed 50-entry list; mask-derived tokens ("player", "team") stay in
    static const std::unordered_set<std::string> words = {
        "a",    "an",   "and",  "are",  "as",    "at",   "be",   "but",  "by",   "did",
        "do",   "for",  "from", "had",  "has",   "have", "he",   "her",  "here", "his",
        "i",    "if",   "in",   "is",   "it",    "its",  "me",   "my",   "no",   "not",
        "of",   "on",   "or",   "our",  "she",   "so",   "that", "the",  "their", "them",
        "then", "there", "they", "this", "to",   "was",  "we",   "were", "with", "you"};
    return words;
}

std::vector<std::string> content_tokens(const std::string& text) {
    std::vector<std::string> out;
    for (auto& tok : tokenize(text))
        if (!stop_words().count(tok)) out.push_back(std::move(tok));
    return out;
}

TfIdfIndex::TfIdfIndex(const std::vector<std::string>& documents) {
    doc_count_ = documents.size();
    doc_norms_.assign(doc_count_, 0.0);

    std::vector<std::unordered_map<std::string, std::size_t>> counts(doc_count_);
    for (std::size_t doc = 0; doc < doc_count_; ++doc)
        for (auto& tok : content_tokens(documents[doc])) ++counts[doc][tok];

    std::unordered_map<std::string, std::size_t> df;
    for (const auto& c : counts)
        for (const auto& [tok, _] : c) ++df[tok];

    const double n = static_cast<double>(doc_count_);
    for (const auto& [tok, freq] : df) {
        Term term;
        term.idf = std::log((1.0 + n) / (1.0 + static_cast<double>(freq))) + 1.0;
        terms_.emplace(tok, std::move(term));
    }
    for (std::size_t doc = 0; doc < doc_count_; ++doc) {
        for (const auto& [tok, count] : counts[doc]) {
            auto& term = terms_.at(tok);
            const double w = static_cast<double>(count) * term.idf;
            term.postings.push_back(Posting{doc, w});
            doc_norms_[doc] += w * w;
        }
        doc_norms_[doc] = std::sqrt(doc_norms_[doc]);
    }
}

std::vector<double> TfIdfIndex::similarities(const std::string& query) const {
    std::vector<double> dots(doc_count_, 0.0);
    std::unordered_map<std::string, std::size_t> qcounts;
    for (auto& tok : content_tokens(query)) ++qcounts[tok];

    double qnorm = 0.0;
    for (const auto& [tok, count] : qcounts) {
        const auto it = terms_.find(tok);
        if (it == terms_.end()) continue;  // outside the collection vocabulary
        const double qw = static_cast<double>(count) * it->second.idf;
        qnorm += qw * qw;
        for (const auto& posting : it->second.postings) dots[posting.doc] += qw * posting.weight;
    }
    if (qnorm == 0.0) return std::vector<double>(doc_count_, 0.0);
    qnorm = std::sqrt(qnorm);

    for (std::size_t doc = 0; doc < doc_count_; ++doc)
        dots[doc] = doc_norms_[doc] > 0.0 ? dots[doc] / (qnorm * doc_norms_[doc]) : 0.0;
    return dots;
}

LexicalPrediction lexical_best_match(const TfIdfIndex& index, const std::string& query,
                                     double tau) {
    LexicalPrediction result;
    const auto sims = index.similarities(query);
    for (std::size_t doc = 0; doc < sims.size(); ++doc) {
        if (sims[doc] > result.best_similarity) {
            result.best_similarity = sims[doc];
            result.bin = doc;
        }
    }
    if (result.best_similarity < tau) result.bin.reset();
    return result;
}

}  // namespace alignkit
