#include "holispoof/llm_gateway.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "holispoof/errors.hpp"
#include "holispoof/json_scan.hpp"
#include "httplib.h"

namespace holispoof {

GatewayConfig gateway_config_from_env() {
  GatewayConfig config;
  if (const char* url = std::getenv("HOLISPOOF_BASE_URL")) config.base_url = url;
  if (const char* key = std::getenv("HOLISPOOF_API_KEY")) config.credential = key;
  return config;
}

// --- HttpTransport ----------------------------------------------------------

HttpTransport::HttpTransport(std::string base_url, double timeout_s)
    : timeout_s_(timeout_s) {
  const size_t scheme = base_url.find("://");
  const size_t authority = scheme == std::string::npos ? 0 : scheme + 3;
  const size_t slash = base_url.find('/', authority);
  if (slash == std::string::npos) {
    origin_ = base_url;
  } else {
    origin_ = base_url.substr(0, slash);
    path_prefix_ = base_url.substr(slash);
    while (!path_prefix_.empty() && path_prefix_.back() == '/')
      path_prefix_.pop_back();
  }
}

TransportResponse HttpTransport::post(const std::string& path,
                                      const std::string& body,
                                      const HeaderList& headers) {
  httplib::Client client(origin_);
  const time_t seconds = static_cast<time_t>(timeout_s_);
  const time_t micros =
      static_cast<time_t>((timeout_s_ - static_cast<double>(seconds)) * 1e6);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);

  httplib::Headers http_headers;
  for (const auto& [name, value] : headers) http_headers.emplace(name, value);

  const httplib::Result result =
      client.Post(path_prefix_ + path, http_headers, body, "application/json");
  TransportResponse response;
  if (!result) {
    // Read failures after connect are indistinguishable from read
    // timeouts here, so they count as timeouts.
    response.failure = (result.error() == httplib::Error::ConnectionTimeout ||
                        result.error() == httplib::Error::Read)
                           ? TransportResponse::Failure::timeout
                           : TransportResponse::Failure::connection;
    return response;
  }
  response.status = result->status;
  response.body = result->body;
  return response;
}

// --- ScriptedTransport ------------------------------------------------------

ScriptedTransport::ScriptedTransport(std::vector<TransportResponse> script)
    : script_(std::move(script)) {
  if (script_.empty())
    raise(ErrorCode::ConfigError, "scripted transport needs at least one response");
}

TransportResponse ScriptedTransport::post(const std::string&,
                                          const std::string& body,
                                          const HeaderList&) {
  std::lock_guard<std::mutex> lock(mutex_);
  requests_.push_back(body);
  const TransportResponse& response =
      next_ < script_.size() ? script_[next_] : script_.back();
  if (next_ < script_.size()) ++next_;
  return response;
}

std::vector<std::string> ScriptedTransport::request_bodies() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return requests_;
}

size_t ScriptedTransport::calls() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return requests_.size();
}

// --- MockRulesTransport -----------------------------------------------------

std::string chat_completion_body(const std::string& content) {
  nlohmann::json message{{"role", "assistant"}, {"content", content}};
  nlohmann::json body{{"choices", nlohmann::json::array(
                                      {nlohmann::json{{"message", message}}})}};
  return body.dump();
}

MockRulesTransport::MockRulesTransport(const std::string& rules_path) {
  std::ifstream in(rules_path, std::ios::binary);
  if (!in)
    raise(ErrorCode::ConfigError, "cannot open mock rules " + rules_path);
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    raise(ErrorCode::ConfigError, rules_path + " is not a JSON object");

  const auto parse_rule = [&](const nlohmann::json& value, bool need_contains) {
    Rule rule;
    if (need_contains) {
      if (!value.contains("contains") || !value.at("contains").is_string())
        raise(ErrorCode::ConfigError,
              rules_path + ": every rule needs a \"contains\" string");
      rule.contains = value.at("contains").get<std::string>();
    }
    if (value.contains("status")) rule.status = value.at("status").get<int>();
    if (value.contains("body")) {
      rule.body = value.at("body").get<std::string>();
    } else if (value.contains("content")) {
      rule.body = chat_completion_body(value.at("content").get<std::string>());
    } else {
      raise(ErrorCode::ConfigError,
            rules_path + ": a rule needs \"content\" or \"body\"");
    }
    return rule;
  };

  if (doc.contains("rules")) {
    if (!doc.at("rules").is_array())
      raise(ErrorCode::ConfigError, rules_path + ": \"rules\" must be an array");
    for (const nlohmann::json& value : doc.at("rules"))
      rules_.push_back(parse_rule(value, true));
  }
  if (doc.contains("default")) {
    default_rule_ = parse_rule(doc.at("default"), false);
    has_default_ = true;
  }
  if (rules_.empty() && !has_default_)
    raise(ErrorCode::ConfigError, rules_path + " defines no rules");
}

TransportResponse MockRulesTransport::post(const std::string&,
                                           const std::string& body,
                                           const HeaderList&) {
  const Rule* hit = nullptr;
  for (const Rule& rule : rules_) {
    if (body.find(rule.contains) != std::string::npos) {
      hit = &rule;
      break;
    }
  }
  if (hit == nullptr && has_default_) hit = &default_rule_;

  TransportResponse response;
  if (hit == nullptr) {
    response.status = 404;
    response.body = R"({"error": "no mock rule matches the request"})";
    return response;
  }
  response.status = hit->status;
  response.body = hit->body;
  return response;
}

// --- GatewayClient ----------------------------------------------------------

GatewayClient::GatewayClient(GatewayConfig config,
                             std::shared_ptr<Transport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  if (transport_ == nullptr)
    raise(ErrorCode::ConfigError, "gateway client needs a transport");
  if (config_.max_in_flight == 0)
    raise(ErrorCode::ConfigError, "in-flight bound must be positive");
  if (!(config_.timeout_s > 0.0))
    raise(ErrorCode::ConfigError, "timeout must be positive");
}

namespace {

void validate_request(const ChatRequest& request) {
  if (request.model_name.empty())
    raise(ErrorCode::ConfigError, "chat request needs a model name");
  if (request.messages.empty())
    raise(ErrorCode::ConfigError, "chat request needs at least one message");
  const std::string& first = request.messages.front().role;
  if (first != "system" && first != "user")
    raise(ErrorCode::ConfigError,
          "the first message role must be system or user, got " + first);
  for (const ChatMessage& m : request.messages) {
    if (m.role != "system" && m.role != "user" && m.role != "assistant")
      raise(ErrorCode::ConfigError, "unknown message role " + m.role);
  }
  if (!(request.temperature >= 0.0))
    raise(ErrorCode::ConfigError, "temperature must be non-negative");
}

std::string request_body_json(const ChatRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = request.model_name;
  nlohmann::ordered_json messages = nlohmann::ordered_json::array();
  for (const ChatMessage& m : request.messages)
    messages.push_back({{"role", m.role}, {"content", m.content}});
  body["messages"] = std::move(messages);
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_output_tokens;
  return body.dump();
}

std::string extract_content(const std::string& body) {
  const nlohmann::json doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    raise(ErrorCode::MalformedResponse, "response body is not a JSON object");
  if (!doc.contains("choices") || !doc.at("choices").is_array() ||
      doc.at("choices").empty())
    raise(ErrorCode::MalformedResponse, "response has no choices");
  const nlohmann::json& first = doc.at("choices").at(0);
  if (!first.contains("message") || !first.at("message").contains("content") ||
      !first.at("message").at("content").is_string())
    raise(ErrorCode::MalformedResponse,
          "response choice has no message content");
  return first.at("message").at("content").get<std::string>();
}

}  // namespace

std::string GatewayClient::complete(const ChatRequest& request) {
  validate_request(request);
  const std::string body = request_body_json(request);
  HeaderList headers;
  if (!config_.credential.empty())
    headers.emplace_back("Authorization", "Bearer " + config_.credential);

  TransportResponse last;
  const std::uint32_t attempts = config_.max_retries + 1;
  for (std::uint32_t attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0 && config_.backoff.initial_ms > 0) {
      double delay = static_cast<double>(config_.backoff.initial_ms) *
                     std::pow(config_.backoff.multiplier,
                              static_cast<double>(attempt - 1));
      delay = std::min(delay, static_cast<double>(config_.backoff.cap_ms));
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<std::int64_t>(delay)));
    }

    {
      std::unique_lock<std::mutex> lock(gate_mutex_);
      gate_cv_.wait(lock,
                    [this] { return in_flight_ < config_.max_in_flight; });
      ++in_flight_;
    }
    ++transport_calls_;
    last = transport_->post("/chat/completions", body, headers);
    {
      std::lock_guard<std::mutex> lock(gate_mutex_);
      --in_flight_;
    }
    gate_cv_.notify_one();

    if (last.failure != TransportResponse::Failure::none) continue;
    if (last.status == 200) return extract_content(last.body);
    if (last.status == 401 || last.status == 403)
      raise(ErrorCode::AuthFailure,
            "service rejected the credential with status " +
                std::to_string(last.status));
    if (last.status == 429 || last.status >= 500) continue;
    raise(ErrorCode::MalformedResponse,
          "service answered status " + std::to_string(last.status));
  }

  if (last.failure == TransportResponse::Failure::timeout)
    raise(ErrorCode::Timeout,
          "no response within " + std::to_string(config_.timeout_s) +
              " s after " + std::to_string(attempts) + " attempts");
  if (last.failure == TransportResponse::Failure::connection)
    raise(ErrorCode::ServiceUnavailable,
          "cannot reach the service after " + std::to_string(attempts) +
              " attempts");
  if (last.status == 429)
    raise(ErrorCode::RateLimited,
          "still rate-limited after " + std::to_string(attempts) +
              " attempts");
  raise(ErrorCode::ServiceUnavailable,
        "service kept answering status " + std::to_string(last.status) +
            " over " + std::to_string(attempts) + " attempts");
}

nlohmann::json GatewayClient::complete_json(
    const ChatRequest& request, const std::vector<std::string>& required_keys) {
  ChatRequest working = request;
  std::string corrective = "Your previous reply was not a single JSON object "
                           "with the required keys (";
  for (size_t i = 0; i < required_keys.size(); ++i) {
    if (i > 0) corrective += ", ";
    corrective += required_keys[i];
  }
  corrective += "). Reply with exactly one JSON object containing those keys "
                "and NOTHING else.";

  // One initial ask plus at most two corrective re-asks.
  for (int ask = 0; ask < 3; ++ask) {
    const std::string reply = complete(working);
    const JsonScanResult scan =
        find_json_object(reply, [&](const nlohmann::json& object) {
          for (const std::string& key : required_keys)
            if (!object.contains(key)) return false;
          return true;
        });
    if (scan.object.has_value()) return *scan.object;
    working.messages.push_back({"assistant", reply});
    working.messages.push_back({"user", corrective});
  }
  raise(ErrorCode::StructuredOutputFailure,
        "no JSON object with the required keys after 3 asks");
}

}  // namespace holispoof
