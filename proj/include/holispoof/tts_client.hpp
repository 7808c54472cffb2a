#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "holispoof/audio.hpp"
#include "holispoof/llm_gateway.hpp"

namespace holispoof {

struct TtsConfig {
  std::string base_url;
  std::string credential;
  std::string model_name = "cosyvoice-3";
  double timeout_s = 60.0;
  std::uint32_t max_retries = 3;
  BackoffSchedule backoff;
};

// Voice-cloning client. The request carries the text, the speech prompt as
// a base64 WAV, and the prompt's sample rate; the response body is a WAV.
// Retries transient failures, 429, and 5xx like the chat client. Errors:
// ServiceUnavailable (unreachable or 5xx after retries), AuthFailure,
// SynthesisFailure (other 4xx or an undecodable body), RateMismatch (the
// service answered at a different rate than the prompt).
class TtsClient {
 public:
  TtsClient(TtsConfig config, std::shared_ptr<Transport> transport);

  Waveform synthesize(const std::string& text, const Waveform& prompt);

 private:
  TtsConfig config_;
  std::shared_ptr<Transport> transport_;
};

// Deterministic synthesis mock driven by a rules file:
//   {"rules": [{"contains": "...", "status": 200, "duration_s": 2.0,
//               "sample_rate": 16000}, ...],
//    "default": {"duration_s": 1.0}}
// The first rule whose "contains" substring occurs in the request body
// answers. A 200 response is a WAV of the given duration at the request's
// prompt_sample_rate (or the rule's explicit "sample_rate"), with samples
// generated from a generator seeded by the request text, so equal requests
// get identical audio.
class MockTtsTransport : public Transport {
 public:
  explicit MockTtsTransport(const std::string& rules_path);
  TransportResponse post(const std::string& path, const std::string& body,
                         const HeaderList& headers) override;

 private:
  struct Rule {
    std::string contains;
    int status = 200;
    double duration_s = 1.0;
    std::uint32_t sample_rate = 0;  // 0: echo the prompt rate
    std::string body;               // non-empty: verbatim response body
  };
  std::vector<Rule> rules_;
  Rule default_rule_;
  bool has_default_ = false;
};

}  // namespace holispoof
