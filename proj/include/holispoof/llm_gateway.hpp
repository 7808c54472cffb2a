#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace holispoof {

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
};

struct ChatRequest {
  std::string model_name;
  std::vector<ChatMessage> messages;  // non-empty; first role system or user
  double temperature = 0.0;
  std::uint32_t max_output_tokens = 1024;
};

struct BackoffSchedule {
  std::uint32_t initial_ms = 250;
  double multiplier = 2.0;
  std::uint32_t cap_ms = 4000;
};

// The credential is read from the environment and must never be written to
// logs, reports, or serialized requests on disk; it travels only in the
// Authorization header at call time.
struct GatewayConfig {
  std::string base_url;
  std::string credential;
  double timeout_s = 30.0;
  std::uint32_t max_retries = 3;
  BackoffSchedule backoff;
  std::uint32_t max_in_flight = 4;
};

// Reads HOLISPOOF_BASE_URL and HOLISPOOF_API_KEY; unset variables leave the
// fields empty for the caller to validate.
GatewayConfig gateway_config_from_env();

struct TransportResponse {
  enum class Failure { none, timeout, connection };
  int status = 0;  // meaningful only when failure == none
  std::string body;
  Failure failure = Failure::none;
};

using HeaderList = std::vector<std::pair<std::string, std::string>>;

class Transport {
 public:
  virtual ~Transport() = default;
  virtual TransportResponse post(const std::string& path,
                                 const std::string& body,
                                 const HeaderList& headers) = 0;
};

// POSTs over HTTP(S) using the base URL's scheme, authority, and path
// prefix. TLS support depends on the build; without it, https endpoints
// fail as connection errors.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::string base_url, double timeout_s = 30.0);
  TransportResponse post(const std::string& path, const std::string& body,
                         const HeaderList& headers) override;

 private:
  std::string origin_;       // scheme://host[:port]
  std::string path_prefix_;  // leading path of the base URL, may be empty
  double timeout_s_;
};

// Replays a fixed script of responses in order; thread-safe. Records every
// request body for assertions. When the script runs out, repeats the last
// response.
class ScriptedTransport : public Transport {
 public:
  explicit ScriptedTransport(std::vector<TransportResponse> script);
  TransportResponse post(const std::string& path, const std::string& body,
                         const HeaderList& headers) override;

  std::vector<std::string> request_bodies() const;
  size_t calls() const;

 private:
  mutable std::mutex mutex_;
  std::vector<TransportResponse> script_;
  std::vector<std::string> requests_;
  size_t next_ = 0;
};

// Builds a chat-completion response body around assistant text.
std::string chat_completion_body(const std::string& content);

// Deterministic stateless mock driven by a rules file:
//   {"rules": [{"contains": "...", "status": 200, "content": "..."}, ...],
//    "default": {"status": 200, "content": "..."}}
// The first rule whose "contains" substring occurs in the request body
// answers; "content" becomes the assistant message of a chat-completion
// body, or a rule may give a raw "body" instead. Throws ConfigError on a
// malformed rules file.
class MockRulesTransport : public Transport {
 public:
  explicit MockRulesTransport(const std::string& rules_path);
  TransportResponse post(const std::string& path, const std::string& body,
                         const HeaderList& headers) override;

 private:
  struct Rule {
    std::string contains;  // empty for the default rule
    int status = 200;
    std::string body;
  };
  std::vector<Rule> rules_;
  Rule default_rule_;
  bool has_default_ = false;
};

// Chat-completion client with bounded in-flight concurrency, exponential
// backoff on transient failures (transport errors, 429, 5xx), and no
// retries on other 4xx. Safe for concurrent use.
class GatewayClient {
 public:
  GatewayClient(GatewayConfig config, std::shared_ptr<Transport> transport);

  // Assistant content of the first choice. Errors: Timeout, AuthFailure
  // (401/403, no retry), RateLimited (429 after retries),
  // ServiceUnavailable (5xx or connection failure after retries),
  // MalformedResponse (other 4xx, or a 200 body without
  // choices[0].message.content).
  std::string complete(const ChatRequest& request);

  // complete(), then extract the first balanced JSON object whose top
  // level carries every required key. On extraction failure the reply and
  // a corrective instruction are appended and the request re-asked, at
  // most twice; then StructuredOutputFailure.
  nlohmann::json complete_json(const ChatRequest& request,
                               const std::vector<std::string>& required_keys);

  // Transport posts made so far (retries and re-asks included).
  std::uint64_t transport_calls() const { return transport_calls_.load(); }

 private:
  std::string attempt_once(const ChatRequest& request);

  GatewayConfig config_;
  std::shared_ptr<Transport> transport_;
  std::atomic<std::uint64_t> transport_calls_{0};

  // Hand-rolled counting semaphore bounding concurrent transport posts.
  std::mutex gate_mutex_;
  std::condition_variable gate_cv_;
  std::uint32_t in_flight_ = 0;
};

}  // namespace holispoof
