#include "holispoof/annotation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>

#include "holispoof/errors.hpp"
#include "holispoof/json_scan.hpp"
#include "json.hpp"

namespace holispoof {

namespace {

// Lowercase, trim, and fold spaces/hyphens to underscores so that
// "Cut and Paste", "cut-and-paste" and "cut_and_paste" all compare equal.
std::string fold_key(std::string_view text) {
  size_t begin = 0, end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  std::string out;
  out.reserve(end - begin);
  for (size_t i = begin; i < end; ++i) {
    char c = text[i];
    if (c == ' ' || c == '-') c = '_';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

const std::map<std::string, SpoofMethod>& method_aliases() {
  static const std::map<std::string, SpoofMethod> table = {
      {"tts", SpoofMethod::tts},
      {"text_to_speech", SpoofMethod::tts},
      {"tts_synthesis", SpoofMethod::tts},
      {"speech_synthesis", SpoofMethod::tts},
      {"vc", SpoofMethod::vc},
      {"voice_conversion", SpoofMethod::vc},
      {"cut_and_paste", SpoofMethod::cut_and_paste},
      {"cap", SpoofMethod::cut_and_paste},
      {"concatenation", SpoofMethod::cut_and_paste},
      {"speech_editing", SpoofMethod::speech_editing},
      {"se", SpoofMethod::speech_editing},
      {"editing", SpoofMethod::speech_editing},
      {"neural_speech_editing", SpoofMethod::speech_editing},
      {"vocoder_resynthesis", SpoofMethod::vocoder_resynthesis},
      {"vr", SpoofMethod::vocoder_resynthesis},
      {"vocoder", SpoofMethod::vocoder_resynthesis},
      {"codec_resynthesis", SpoofMethod::codec_resynthesis},
      {"cr", SpoofMethod::codec_resynthesis},
      {"codec", SpoofMethod::codec_resynthesis},
      {"unknown", SpoofMethod::unknown},
      {"/", SpoofMethod::unknown},
      {"n/a", SpoofMethod::unknown},
      {"none", SpoofMethod::unknown},
  };
  return table;
}

void check_consistent(const AnalysisRecord& record, ErrorCode code) {
  if (record.authenticity == Label::real) {
    if (record.method.has_value())
      raise(code, "a real record must not carry a spoof method");
    if (!record.regions.empty())
      raise(code, "a real record must not carry spoofed regions");
    if (record.semantic_influence.has_value())
      raise(code, "a real record must not carry a semantic influence analysis");
  }
}

}  // namespace

std::string to_string(Label label) {
  return label == Label::real ? "real" : "fake";
}

std::string to_string(SpoofMethod method) {
  switch (method) {
    case SpoofMethod::tts: return "tts";
    case SpoofMethod::vc: return "vc";
    case SpoofMethod::cut_and_paste: return "cut_and_paste";
    case SpoofMethod::speech_editing: return "speech_editing";
    case SpoofMethod::vocoder_resynthesis: return "vocoder_resynthesis";
    case SpoofMethod::codec_resynthesis: return "codec_resynthesis";
    case SpoofMethod::unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Label> parse_label(std::string_view text) {
  const std::string key = fold_key(text);
  if (key == "real" || key == "bona_fide" || key == "bonafide" || key == "genuine")
    return Label::real;
  if (key == "fake" || key == "spoof" || key == "spoofed") return Label::fake;
  return std::nullopt;
}

std::optional<SpoofMethod> parse_method(std::string_view text) {
  const auto& table = method_aliases();
  const auto it = table.find(fold_key(text));
  if (it == table.end()) return std::nullopt;
  return it->second;
}

bool interval_well_formed(const TimeInterval& interval) {
  return interval.start_s >= 0.0 && interval.start_s < interval.end_s &&
         std::isfinite(interval.start_s) && std::isfinite(interval.end_s);
}

std::vector<TimeInterval> normalize_regions(std::vector<TimeInterval> regions) {
  for (const auto& r : regions) {
    if (!interval_well_formed(r))
      raise(ErrorCode::MalformedInterval,
            "interval [" + format_seconds(r.start_s) + ", " +
                format_seconds(r.end_s) + "] is not a valid region");
  }
  std::sort(regions.begin(), regions.end(), [](const auto& a, const auto& b) {
    return a.start_s != b.start_s ? a.start_s < b.start_s : a.end_s < b.end_s;
  });
  std::vector<TimeInterval> merged;
  for (const auto& r : regions) {
    if (!merged.empty() && r.start_s < merged.back().end_s) {
      merged.back().end_s = std::max(merged.back().end_s, r.end_s);
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

AnalysisRecord parse_analysis(std::string_view raw_text) {
  const JsonScanResult scan =
      find_json_object(raw_text, [](const nlohmann::json& obj) {
        return obj.contains("real_or_fake");
      });
  if (!scan.object.has_value()) {
    if (!scan.saw_object)
      raise(ErrorCode::NoJsonFound, "no balanced JSON object in model output");
    raise(ErrorCode::MissingAuthenticityKey,
          "no JSON object carries the key \"real_or_fake\"");
  }
  const nlohmann::json& obj = *scan.object;

  AnalysisRecord record;
  const nlohmann::json& auth = obj.at("real_or_fake");
  std::optional<Label> label;
  if (auth.is_string()) label = parse_label(auth.get<std::string>());
  if (!label.has_value())
    raise(ErrorCode::MissingAuthenticityKey,
          "\"real_or_fake\" must be \"real\" or \"fake\", got " + auth.dump());
  record.authenticity = *label;

  if (obj.contains("spoof_method") && obj.at("spoof_method").is_string()) {
    // Unrecognized method strings leave the field absent; the wrongness is
    // scored by the metrics, not rejected here.
    const auto method = parse_method(obj.at("spoof_method").get<std::string>());
    if (method.has_value() && *method != SpoofMethod::unknown)
      record.method = *method;
  }

  if (obj.contains("spoof_regions")) {
    const nlohmann::json& regions = obj.at("spoof_regions");
    if (!regions.is_array())
      raise(ErrorCode::MalformedInterval, "\"spoof_regions\" must be an array");
    std::vector<TimeInterval> parsed;
    for (const nlohmann::json& item : regions) {
      if (!item.is_array() || item.size() != 2 || !item[0].is_number() ||
          !item[1].is_number())
        raise(ErrorCode::MalformedInterval,
              "each region must be a [start, end] pair of seconds, got " +
                  item.dump());
      TimeInterval interval{item[0].get<double>(), item[1].get<double>()};
      if (!interval_well_formed(interval))
        raise(ErrorCode::MalformedInterval,
              "region " + item.dump() + " has end <= start or a negative bound");
      parsed.push_back(interval);
    }
    record.regions = normalize_regions(std::move(parsed));
  }

  if (obj.contains("semantic_influence") &&
      obj.at("semantic_influence").is_string()) {
    std::string text = obj.at("semantic_influence").get<std::string>();
    if (!text.empty()) record.semantic_influence = std::move(text);
  }

  check_consistent(record, ErrorCode::InconsistentRecord);
  return record;
}

std::string format_seconds(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3f", value);
  std::string text(buffer);
  while (text.size() > 1 && text.back() == '0' &&
         text[text.size() - 2] != '.') {
    text.pop_back();
  }
  return text;
}

std::string serialize_analysis(const AnalysisRecord& record) {
  AnalysisRecord canonical = record;
  try {
    canonical.regions = normalize_regions(std::move(canonical.regions));
  } catch (const Error&) {
    raise(ErrorCode::InvariantViolation, "record carries a malformed region");
  }
  check_consistent(canonical, ErrorCode::InvariantViolation);
  if (canonical.method == SpoofMethod::unknown)
    raise(ErrorCode::InvariantViolation,
          "unknown is a reference-side method, not a record value");

  std::string out = "{\"real_or_fake\": \"";
  out += to_string(canonical.authenticity);
  out += '"';
  if (canonical.method.has_value()) {
    out += ", \"spoof_method\": \"";
    out += to_string(*canonical.method);
    out += '"';
  }
  if (!canonical.regions.empty()) {
    out += ", \"spoof_regions\": [";
    for (size_t i = 0; i < canonical.regions.size(); ++i) {
      if (i > 0) out += ", ";
      out += '[';
      out += format_seconds(canonical.regions[i].start_s);
      out += ", ";
      out += format_seconds(canonical.regions[i].end_s);
      out += ']';
    }
    out += ']';
  }
  if (canonical.semantic_influence.has_value()) {
    out += ", \"semantic_influence\": ";
    out += nlohmann::json(*canonical.semantic_influence).dump();
  }
  out += '}';
  return out;
}

ValidationReport validate_record(const AnalysisRecord& record,
                                 double audio_duration_s) {
  if (!(audio_duration_s > 0.0))
    raise(ErrorCode::InvariantViolation, "audio duration must be positive");
  constexpr double kOutOfBoundsSlack = 0.05;

  ValidationReport report;
  if (record.authenticity == Label::real &&
      (record.method.has_value() || !record.regions.empty() ||
       record.semantic_influence.has_value())) {
    report.issues.push_back(
        {ViolationKind::InconsistentRecord,
         "real record carries spoof method, regions, or semantic analysis"});
  }
  for (const auto& region : record.regions) {
    if (!interval_well_formed(region)) {
      report.issues.push_back(
          {ViolationKind::InconsistentRecord,
           "region [" + format_seconds(region.start_s) + ", " +
               format_seconds(region.end_s) + "] is malformed"});
      continue;
    }
    if (region.end_s > audio_duration_s + kOutOfBoundsSlack) {
      report.issues.push_back(
          {ViolationKind::RegionOutOfBounds,
           "region ends at " + format_seconds(region.end_s) +
               " s but the audio lasts " + format_seconds(audio_duration_s) +
               " s"});
    }
  }
  return report;
}

}  // namespace holispoof
