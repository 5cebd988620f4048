#include "alignkit/llm_client.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "alignkit/errors.hpp"

namespace alignkit {

void LlmEndpointConfig::validate() const {
    if (base_url.empty())
        throw EndpointError("llm endpoint: no base URL configured (flag --llm-url or "
                            "ALIGN_LLM_URL)");
    if (!(timeout_s > 0)) throw EndpointError("llm endpoint: timeout must be positive");
    if (max_retries < 0) throw EndpointError("llm endpoint: retries must be >= 0");
}

LlmClient::LlmClient(LlmEndpointConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    // split scheme://host:port from the request path
    const auto scheme_end = cfg_.base_url.find("://");
    const auto path_start =
        cfg_.base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) {
        host_ = cfg_.base_url;
        path_ = "/";
    } else {
        host_ = cfg_.base_url.substr(0, path_start);
        path_ = cfg_.base_url.substr(path_start);
    }
}

std::string LlmClient::complete(const std::string& prompt, int max_tokens) const {
    nlohmann::json request = {{"prompt", prompt}, {"max_tokens", max_tokens}};
    const std::string body = request.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
        httplib::Client client(host_);
        client.set_connection_timeout(std::chrono::duration<double>(cfg_.timeout_s));
        client.set_read_timeout(std::chrono::duration<double>(cfg_.timeout_s));
        if (const char* key = std::getenv("ALIGN_LLM_KEY"))
            client.set_default_headers({{"Authorization", std::string("Bearer ") + key}});

        auto res = client.Post(path_, body, "application/json");
        if (!res) {
            last_error = "transport failure (" + httplib::to_string(res.error()) + ")";
            continue;
        }
        if (res->status != 200) {
            last_error = "http status " + std::to_string(res->status);
            continue;
        }
        try {
            auto doc = nlohmann::json::parse(res->body);
            if (!doc.contains("text") || !doc["text"].is_string()) {
                last_error = "response missing text field";
                continue;
            }
            return doc["text"].get<std::string>();
        } catch (const std::exception& e) {
            last_error = std::string("response parse failure: ") + e.what();
        }
    }
    throw EndpointError("llm endpoint " + cfg_.base_url + ": " + last_error + " after " +
                        std::to_string(cfg_.max_retries + 1) + " attempts");
}

std::string render_template(const std::string& text,
                            const std::map<std::string, std::string>& values) {
    std::string out = text;
    for (const auto& [key, value] : values) {
        const std::string needle = "{{" + key + "}}";
        std::size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), value);
            pos += value.size();
        }
    }
    return out;
}

std::string load_template_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("prompt template " + path.string() + ": missing or unreadable");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    // trailing newline is an artifact of the file, not the prompt
    while (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

}  // namespace alignkit
