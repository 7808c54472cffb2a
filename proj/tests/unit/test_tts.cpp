#include "doctest.h"

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "helpers.hpp"
#include "holispoof/audio.hpp"
#include "holispoof/base64.hpp"
#include "holispoof/errors.hpp"
#include "holispoof/tts_client.hpp"
#include "json.hpp"

using holispoof::Error;
using holispoof::ErrorCode;
using holispoof::HeaderList;
using holispoof::MockTtsTransport;
using holispoof::ScriptedTransport;
using holispoof::Transport;
using holispoof::TransportResponse;
using holispoof::TtsClient;
using holispoof::TtsConfig;
using holispoof::Waveform;

namespace {

Waveform tone(std::size_t n, std::uint32_t rate) {
  Waveform wave;
  wave.sample_rate_hz = rate;
  wave.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    wave.samples[i] = static_cast<std::int16_t>((i * 37) % 997 - 400);
  return wave;
}

std::string wav_body(const Waveform& wave) {
  const auto bytes = holispoof::encode_wav(wave);
  return std::string(bytes.begin(), bytes.end());
}

TransportResponse ok_wave(const Waveform& wave) {
  return TransportResponse{200, wav_body(wave)};
}

TransportResponse status(int code) { return TransportResponse{code, "{}"}; }

TransportResponse failed(TransportResponse::Failure kind) {
  TransportResponse response;
  response.failure = kind;
  return response;
}

TtsConfig fast_config() {
  TtsConfig config;
  config.base_url = "http://mock.invalid";
  config.credential = "tts-secret-XYZ";
  config.max_retries = 2;
  config.backoff.initial_ms = 0;
  return config;
}

// Wraps another transport and keeps the headers of every request, which
// ScriptedTransport does not record.
class HeaderSpy : public Transport {
 public:
  explicit HeaderSpy(std::shared_ptr<Transport> inner)
      : inner_(std::move(inner)) {}

  TransportResponse post(const std::string& path, const std::string& body,
                         const HeaderList& headers) override {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      seen_.push_back(headers);
      paths_.push_back(path);
    }
    return inner_->post(path, body, headers);
  }

  std::vector<HeaderList> seen() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return seen_;
  }
  std::vector<std::string> paths() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return paths_;
  }

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<Transport> inner_;
  std::vector<HeaderList> seen_;
  std::vector<std::string> paths_;
};

ErrorCode run_for_code(TtsClient& client, const std::string& text,
                       const Waveform& prompt, std::string* message = nullptr) {
  try {
    client.synthesize(text, prompt);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("synthesize was expected to throw");
  return ErrorCode::ConfigError;
}

}  // namespace

TEST_CASE("a synthesis request carries the prompt without the credential") {
  const Waveform prompt = tone(1600, 16000);
  const Waveform reply = tone(8000, 16000);
  auto scripted = std::make_shared<ScriptedTransport>(
      std::vector<TransportResponse>{ok_wave(reply)});
  auto spy = std::make_shared<HeaderSpy>(scripted);
  TtsClient client(fast_config(), spy);

  const Waveform out = client.synthesize("hello world", prompt);
  CHECK(out.sample_rate_hz == reply.sample_rate_hz);
  CHECK(out.samples == reply.samples);
  CHECK(scripted->calls() == 1);
  CHECK(spy->paths() == std::vector<std::string>{"/tts"});

  const std::string raw = scripted->request_bodies()[0];
  CHECK(raw.find("tts-secret-XYZ") == std::string::npos);
  const auto body = nlohmann::json::parse(raw);
  CHECK(body.at("model") == "cosyvoice-3");
  CHECK(body.at("text") == "hello world");
  CHECK(body.at("prompt_sample_rate") == 16000);
  CHECK(body.at("prompt_wav_base64") ==
        holispoof::base64_encode(holispoof::encode_wav(prompt)));
  CHECK(body.size() == 4);

  // The credential travels only in the Authorization header.
  const auto header_sets = spy->seen();
  REQUIRE(header_sets.size() == 1);
  bool authorized = false;
  for (const auto& [key, value] : header_sets[0])
    if (key == "Authorization" && value == "Bearer tts-secret-XYZ")
      authorized = true;
  CHECK(authorized);

  // Without a credential no Authorization header is sent.
  auto scripted2 = std::make_shared<ScriptedTransport>(
      std::vector<TransportResponse>{ok_wave(reply)});
  auto spy2 = std::make_shared<HeaderSpy>(scripted2);
  TtsConfig anonymous = fast_config();
  anonymous.credential.clear();
  TtsClient open_client(anonymous, spy2);
  open_client.synthesize("hello", prompt);
  const auto anonymous_headers = spy2->seen();
  REQUIRE(anonymous_headers.size() == 1);
  for (const auto& [key, value] : anonymous_headers[0])
    CHECK(key != "Authorization");
}

TEST_CASE("synthesis inputs and configuration are validated") {
  auto transport = std::make_shared<ScriptedTransport>(
      std::vector<TransportResponse>{status(200)});
  TtsClient client(fast_config(), transport);
  const Waveform prompt = tone(100, 16000);

  std::string message;
  CHECK(run_for_code(client, "", prompt, &message) == ErrorCode::EmptyInput);
  CHECK(message.find("synthesis text must not be empty") != std::string::npos);
  CHECK(run_for_code(client, "text", Waveform{}, &message) ==
        ErrorCode::EmptyInput);
  CHECK(message.find("speech prompt must not be empty") != std::string::npos);
  CHECK(transport->calls() == 0);

  CHECK_THROWS_AS(TtsClient(fast_config(), nullptr), Error);
  TtsConfig unnamed = fast_config();
  unnamed.model_name.clear();
  CHECK_THROWS_AS(TtsClient(unnamed, transport), Error);
}

TEST_CASE("authentication and client errors stop immediately") {
  const Waveform prompt = tone(100, 16000);
  for (const int code : {401, 403}) {
    auto transport = std::make_shared<ScriptedTransport>(
        std::vector<TransportResponse>{status(code)});
    TtsClient client(fast_config(), transport);
    std::string message;
    CHECK(run_for_code(client, "text", prompt, &message) ==
          ErrorCode::AuthFailure);
    CHECK(message.find("synthesis service rejected the credential (status " +
                       std::to_string(code) + ")") != std::string::npos);
    CHECK(message.find("tts-secret-XYZ") == std::string::npos);
    CHECK(transport->calls() == 1);
  }

  for (const int code : {404, 418}) {
    auto transport = std::make_shared<ScriptedTransport>(
        std::vector<TransportResponse>{status(code)});
    TtsClient client(fast_config(), transport);
    std::string message;
    CHECK(run_for_code(client, "text", prompt, &message) ==
          ErrorCode::SynthesisFailure);
    CHECK(message.find("synthesis service answered status " +
                       std::to_string(code)) != std::string::npos);
    CHECK(transport->calls() == 1);
  }
}

TEST_CASE("transient synthesis failures retry and classify by the last answer") {
  const Waveform prompt = tone(100, 16000);
  const auto run_script = [&](std::vector<TransportResponse> script,
                              std::string* message) {
    auto transport =
        std::make_shared<ScriptedTransport>(std::move(script));
    TtsClient client(fast_config(), transport);
    const ErrorCode code = run_for_code(client, "text", prompt, message);
    CHECK(transport->calls() == 3);
    return code;
  };

  std::string message;
  CHECK(run_script({failed(TransportResponse::Failure::timeout)}, &message) ==
        ErrorCode::Timeout);
  CHECK(message.find("synthesis request timed out after 3 attempts") !=
        std::string::npos);
  CHECK(run_script({failed(TransportResponse::Failure::connection)},
                   &message) == ErrorCode::ServiceUnavailable);
  CHECK(message.find("could not reach the synthesis service after 3 "
                     "attempts") != std::string::npos);
  CHECK(run_script({status(429)}, &message) == ErrorCode::RateLimited);
  CHECK(message.find("synthesis service kept answering 429 after 3 "
                     "attempts") != std::string::npos);
  CHECK(run_script({status(503)}, &message) == ErrorCode::ServiceUnavailable);
  CHECK(message.find("synthesis service kept answering status 503 after 3 "
                     "attempts") != std::string::npos);
  CHECK(run_script({status(500), status(429),
                    failed(TransportResponse::Failure::timeout)},
                   &message) == ErrorCode::Timeout);

  // A success on a later attempt ends the retry loop cleanly.
  const Waveform reply = tone(320, 16000);
  auto transport = std::make_shared<ScriptedTransport>(
      std::vector<TransportResponse>{
          failed(TransportResponse::Failure::timeout), status(500),
          ok_wave(reply)});
  TtsClient client(fast_config(), transport);
  CHECK(client.synthesize("text", prompt).samples == reply.samples);
  CHECK(transport->calls() == 3);
}

TEST_CASE("an undecodable or rate-shifted reply is a hard error") {
  const Waveform prompt = tone(100, 16000);

  auto garbled = std::make_shared<ScriptedTransport>(
      std::vector<TransportResponse>{TransportResponse{200, "not a wav"}});
  TtsClient garbled_client(fast_config(), garbled);
  std::string message;
  CHECK(run_for_code(garbled_client, "text", prompt, &message) ==
        ErrorCode::SynthesisFailure);
  CHECK(message.find("synthesis service returned an undecodable body: ") !=
        std::string::npos);
  CHECK(garbled->calls() == 1);

  auto shifted = std::make_shared<ScriptedTransport>(
      std::vector<TransportResponse>{ok_wave(tone(2400, 24000))});
  TtsClient shifted_client(fast_config(), shifted);
  CHECK(run_for_code(shifted_client, "text", prompt, &message) ==
        ErrorCode::RateMismatch);
  CHECK(message.find("synthesis service answered at 24000 Hz but the prompt "
                     "is 16000 Hz") != std::string::npos);
}

TEST_CASE("the synthesis mock answers deterministic audio from rules") {
  testutil::TempDir dir("ttsmock");
  const std::string rules = dir.file("rules.json");
  testutil::write_file(rules, R"({
  "rules": [
    {"contains": "storm", "duration_s": 2.0},
    {"contains": "chipmunk", "duration_s": 0.5, "sample_rate": 8000},
    {"contains": "broken", "status": 503},
    {"contains": "verbatim", "body": "raw-bytes"}
  ],
  "default": {"duration_s": 1.0}
})");

  const Waveform prompt = tone(1600, 16000);
  TtsConfig config = fast_config();
  config.max_retries = 0;

  TtsClient client(config, std::make_shared<MockTtsTransport>(rules));
  const Waveform storm = client.synthesize("a storm is coming", prompt);
  CHECK(storm.sample_rate_hz == 16000);
  CHECK(storm.samples.size() == 32000);

  // Equal text yields identical audio, across transport instances too.
  const Waveform again = client.synthesize("a storm is coming", prompt);
  CHECK(again.samples == storm.samples);
  TtsClient other(config, std::make_shared<MockTtsTransport>(rules));
  CHECK(other.synthesize("a storm is coming", prompt).samples ==
        storm.samples);
  CHECK(client.synthesize("a storm is darker", prompt).samples !=
        storm.samples);

  const Waveform fallback = client.synthesize("nothing matches", prompt);
  CHECK(fallback.sample_rate_hz == 16000);
  CHECK(fallback.samples.size() == 16000);

  // An explicit rule rate disagrees with the prompt and is surfaced.
  std::string message;
  CHECK(run_for_code(client, "the chipmunk version", prompt, &message) ==
        ErrorCode::RateMismatch);
  CHECK(message.find("8000 Hz") != std::string::npos);

  CHECK(run_for_code(client, "broken service", prompt, &message) ==
        ErrorCode::ServiceUnavailable);
  CHECK(message.find("503 after 1 attempts") != std::string::npos);

  CHECK(run_for_code(client, "verbatim body please", prompt, &message) ==
        ErrorCode::SynthesisFailure);
  CHECK(message.find("undecodable") != std::string::npos);

  // Without a default, unmatched text is a 404 from the mock.
  const std::string strict = dir.file("strict.json");
  testutil::write_file(strict,
                       R"({"rules": [{"contains": "storm", "duration_s": 1.0}]})");
  TtsClient strict_client(config, std::make_shared<MockTtsTransport>(strict));
  CHECK(run_for_code(strict_client, "nothing matches", prompt, &message) ==
        ErrorCode::SynthesisFailure);
  CHECK(message.find("status 404") != std::string::npos);

  try {
    MockTtsTransport missing(dir.file("absent.json"));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find("cannot open synthesis rules file: ") !=
          std::string::npos);
  }
  const std::string broken = dir.file("broken.json");
  testutil::write_file(broken, "{not json");
  try {
    MockTtsTransport bad(broken);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find(
              "synthesis rules file is not valid JSON: ") !=
          std::string::npos);
  }
}
