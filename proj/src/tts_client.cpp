#include "holispoof/tts_client.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <thread>

#include "json.hpp"

#include "holispoof/base64.hpp"
#include "holispoof/errors.hpp"
#include "holispoof/hash.hpp"

namespace holispoof {

namespace {

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

TtsClient::TtsClient(TtsConfig config, std::shared_ptr<Transport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  if (!transport_) raise(ErrorCode::ConfigError, "tts transport must not be null");
  if (config_.model_name.empty()) raise(ErrorCode::ConfigError, "tts model name must not be empty");
}

Waveform TtsClient::synthesize(const std::string& text, const Waveform& prompt) {
  if (text.empty()) raise(ErrorCode::EmptyInput, "synthesis text must not be empty");
  if (prompt.samples.empty()) raise(ErrorCode::EmptyInput, "speech prompt must not be empty");

  nlohmann::ordered_json body;
  body["model"] = config_.model_name;
  body["text"] = text;
  body["prompt_wav_base64"] = base64_encode(encode_wav(prompt));
  body["prompt_sample_rate"] = prompt.sample_rate_hz;
  const std::string payload = body.dump();

  HeaderList headers;
  headers.emplace_back("Content-Type", "application/json");
  if (!config_.credential.empty())
    headers.emplace_back("Authorization", "Bearer " + config_.credential);

  const std::uint32_t attempts = config_.max_retries + 1;
  double delay_ms = static_cast<double>(config_.backoff.initial_ms);
  TransportResponse last{};
  for (std::uint32_t attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0 && config_.backoff.initial_ms > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<std::int64_t>(delay_ms)));
      delay_ms = std::min(delay_ms * config_.backoff.multiplier,
                          static_cast<double>(config_.backoff.cap_ms));
    }
    last = transport_->post("/tts", payload, headers);
    if (last.failure != TransportResponse::Failure::none) continue;
    if (last.status == 401 || last.status == 403)
      raise(ErrorCode::AuthFailure,
            "synthesis service rejected the credential (status " +
                std::to_string(last.status) + ")");
    if (retryable_status(last.status)) continue;
    if (last.status != 200)
      raise(ErrorCode::SynthesisFailure,
            "synthesis service answered status " + std::to_string(last.status));

    Waveform wave;
    try {
      wave = decode_wav(
          std::vector<std::uint8_t>(last.body.begin(), last.body.end()));
    } catch (const Error& e) {
      raise(ErrorCode::SynthesisFailure,
            std::string("synthesis service returned an undecodable body: ") + e.what());
    }
    if (wave.sample_rate_hz != prompt.sample_rate_hz)
      raise(ErrorCode::RateMismatch,
            "synthesis service answered at " + std::to_string(wave.sample_rate_hz) +
                " Hz but the prompt is " + std::to_string(prompt.sample_rate_hz) + " Hz");
    return wave;
  }

  if (last.failure == TransportResponse::Failure::timeout)
    raise(ErrorCode::Timeout, "synthesis request timed out after " +
                                  std::to_string(attempts) + " attempts");
  if (last.failure == TransportResponse::Failure::connection)
    raise(ErrorCode::ServiceUnavailable,
          "could not reach the synthesis service after " +
              std::to_string(attempts) + " attempts");
  if (last.status == 429)
    raise(ErrorCode::RateLimited, "synthesis service kept answering 429 after " +
                                      std::to_string(attempts) + " attempts");
  raise(ErrorCode::ServiceUnavailable,
        "synthesis service kept answering status " + std::to_string(last.status) +
            " after " + std::to_string(attempts) + " attempts");
}

MockTtsTransport::MockTtsTransport(const std::string& rules_path) {
  std::ifstream in(rules_path, std::ios::binary);
  if (!in) raise(ErrorCode::ConfigError, "cannot open synthesis rules file: " + rules_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ConfigError,
          "synthesis rules file is not valid JSON: " + rules_path + ": " + e.what());
  }

  auto parse_rule = [&](const nlohmann::json& node) {
    Rule rule;
    if (node.contains("contains")) rule.contains = node.at("contains").get<std::string>();
    if (node.contains("status")) rule.status = node.at("status").get<int>();
    if (node.contains("duration_s")) rule.duration_s = node.at("duration_s").get<double>();
    if (node.contains("sample_rate")) rule.sample_rate = node.at("sample_rate").get<std::uint32_t>();
    if (node.contains("body")) rule.body = node.at("body").get<std::string>();
    return rule;
  };

  if (doc.contains("rules"))
    for (const auto& node : doc.at("rules")) rules_.push_back(parse_rule(node));
  if (doc.contains("default")) {
    default_rule_ = parse_rule(doc.at("default"));
    has_default_ = true;
  }
}

TransportResponse MockTtsTransport::post(const std::string& /*path*/,
                                         const std::string& body,
                                         const HeaderList& /*headers*/) {
  const Rule* chosen = nullptr;
  for (const auto& rule : rules_) {
    if (!rule.contains.empty() && body.find(rule.contains) != std::string::npos) {
      chosen = &rule;
      break;
    }
  }
  if (!chosen && has_default_) chosen = &default_rule_;
  if (!chosen)
    return TransportResponse{
        404, "{\"error\": \"no mock rule matches the request\"}"};
  if (chosen->status != 200)
    return TransportResponse{chosen->status,
                             chosen->body.empty()
                                 ? "{\"error\": \"mock failure\"}"
                                 : chosen->body};
  if (!chosen->body.empty()) return TransportResponse{200, chosen->body};

  std::string text = "mock";
  std::uint32_t rate = 16000;
  try {
    auto req = nlohmann::json::parse(body);
    if (req.contains("text")) text = req.at("text").get<std::string>();
    if (req.contains("prompt_sample_rate"))
      rate = req.at("prompt_sample_rate").get<std::uint32_t>();
  } catch (const nlohmann::json::exception&) {
  }
  if (chosen->sample_rate != 0) rate = chosen->sample_rate;

  Waveform wave;
  wave.sample_rate_hz = rate;
  const auto count = static_cast<std::size_t>(chosen->duration_s * rate + 0.5);
  wave.samples.resize(count);
  std::mt19937_64 engine(fnv1a64(text));
  for (auto& sample : wave.samples)
    sample = static_cast<std::int16_t>(static_cast<std::uint16_t>(engine() & 0xffff));
  const std::vector<std::uint8_t> bytes = encode_wav(wave);
  return TransportResponse{200, std::string(bytes.begin(), bytes.end())};
}

}  // namespace holispoof
