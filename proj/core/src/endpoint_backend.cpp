#include <atomic>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "backends.hpp"
#include "parc/error.hpp"
#include "parc/reply_cache.hpp"

namespace parc {

namespace {

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::ConfigError, "endpoint_url lacks a scheme: " + url);
  }
  std::size_t path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) {
    return {url, "/v1/chat/completions"};
  }
  return {url.substr(0, path_begin), url.substr(path_begin)};
}

bool retryable_status(int status) {
  return status == 408 || status == 429 || status >= 500;
}

/// OpenAI-compatible chat-completions client with bounded retries and an
/// optional write-once disk cache. fetch is thread-safe: each call uses its
/// own HTTP client instance.
class EndpointBackend : public JudgeBackend {
 public:
  explicit EndpointBackend(const BackendConfig& config) : config_(config) {
    if (config.endpoint_url.empty()) {
      throw Error(ErrorCode::ConfigError, "endpoint backend needs endpoint_url");
    }
    if (config.model_name.empty()) {
      throw Error(ErrorCode::ConfigError, "endpoint backend needs model_name");
    }
    const char* key = std::getenv(config.api_key_env_var.c_str());
    if (!key || !*key) {
      throw Error(ErrorCode::ConfigError,
                  "environment variable " + config.api_key_env_var + " is empty or unset");
    }
    api_key_ = key;
    url_ = split_url(config.endpoint_url);
    if (!config.cache_dir.empty()) {
      cache_.emplace(config.cache_dir);
    }
  }

  std::string fetch(const JudgeRequest& request) override {
    std::string key;
    if (cache_) {
      key = ReplyCache::key_hash(config_.model_name, request.system, request.instruction);
      if (auto hit = cache_->lookup(key)) return *hit;
    }
    std::string reply = fetch_over_http(request);
    if (cache_) cache_->store(key, reply);
    return reply;
  }

  long long queries_issued() const override { return issued_.load(); }

 private:
  std::string fetch_over_http(const JudgeRequest& request) {
    nlohmann::json body;
    body["model"] = config_.model_name;
    nlohmann::json messages = nlohmann::json::array();
    if (!request.system.empty()) {
      messages.push_back({{"role", "system"}, {"content", request.system}});
    }
    messages.push_back({{"role", "user"}, {"content", request.instruction}});
    body["messages"] = std::move(messages);
    body["temperature"] = config_.temperature;
    std::string payload = body.dump();

    std::string last_failure;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(config_.backoff_base * (1LL << (attempt - 1)));
      }
      httplib::Client client(url_.base);
      client.set_connection_timeout(config_.timeout);
      client.set_read_timeout(config_.timeout);
      client.set_write_timeout(config_.timeout);
      client.set_bearer_token_auth(api_key_);
      auto result = client.Post(url_.path, payload, "application/json");
      if (!result) {
        last_failure = "connection failure: " + httplib::to_string(result.error());
        continue;
      }
      if (result->status == 200) {
        issued_.fetch_add(1);
        return extract_content(result->body);
      }
      last_failure = "HTTP " + std::to_string(result->status);
      if (!retryable_status(result->status)) break;
    }
    throw Error(ErrorCode::TransportError,
                "endpoint " + config_.endpoint_url + " failed after retries: " + last_failure);
  }

  static std::string extract_content(const std::string& body) {
    nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty() ||
        !parsed["choices"][0].contains("message") ||
        !parsed["choices"][0]["message"].contains("content") ||
        !parsed["choices"][0]["message"]["content"].is_string()) {
      throw Error(ErrorCode::TransportError,
                  "endpoint returned 200 with an unrecognized completion body");
    }
    return parsed["choices"][0]["message"]["content"].get<std::string>();
  }

  BackendConfig config_;
  std::string api_key_;
  SplitUrl url_;
  std::optional<ReplyCache> cache_;
  std::atomic<long long> issued_{0};
};

}  // namespace

std::unique_ptr<JudgeBackend> make_endpoint_backend(const BackendConfig& config) {
  return std::make_unique<EndpointBackend>(config);
}

}  // namespace parc
