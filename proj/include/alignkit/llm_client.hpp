#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace alignkit {

/// Hosted-model endpoint. Wire contract: POST base_url with JSON
/// {"prompt": string, "max_tokens": int}, response {"text": string}.
/// ALIGN_LLM_KEY, when set, is sent as a bearer token.
struct LlmEndpointConfig {
    std::string base_url;
    std::string model_name;
    double timeout_s = 30.0;
    int max_retries = 2;
    std::size_t max_in_flight = 4;
    std::filesystem::path summarize_template;
    std::filesystem::path predict_template;

    void validate() const;
};

class LlmClient {
public:
    explicit LlmClient(LlmEndpointConfig cfg);

    /// One completion round trip; retries transient failures, then throws
    /// EndpointError.
    std::string complete(const std::string& prompt, int max_tokens) const;

    const LlmEndpointConfig& config() const { return cfg_; }

private:
    LlmEndpointConfig cfg_;
    std::string host_;
    std::string path_;
};

/// Replaces every {{key}} with its value; unknown placeholders pass
/// through untouched.
std::string render_template(const std::string& text,
                            const std::map<std::string, std::string>& values);

std::string load_template_file(const std::filesystem::path& path);

}  // namespace alignkit
