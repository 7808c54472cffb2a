#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace holispoof {

enum class Label { real, fake };

// The six spoofing techniques a record may carry, plus `unknown` for
// reference datasets whose generation method is unlabeled. `unknown` is a
// reference-side value only; the lenient parser never produces it.
enum class SpoofMethod {
  tts,
  vc,
  cut_and_paste,
  speech_editing,
  vocoder_resynthesis,
  codec_resynthesis,
  unknown,
};

std::string to_string(Label label);
std::string to_string(SpoofMethod method);

// Case-insensitive parse over the alias table in annotation.cpp
// (e.g. "speech editing", "SE", "CaP" all resolve). Unrecognized -> nullopt.
std::optional<Label> parse_label(std::string_view text);
std::optional<SpoofMethod> parse_method(std::string_view text);

struct TimeInterval {
  double start_s = 0.0;
  double end_s = 0.0;
  bool operator==(const TimeInterval&) const = default;
};

// True iff 0 <= start < end.
bool interval_well_formed(const TimeInterval& interval);

// Sorts by start time and unions intervals overlapping with positive
// measure. Intervals that merely touch are kept separate so that
// serialization round-trips exactly. Idempotent. Throws MalformedInterval.
std::vector<TimeInterval> normalize_regions(std::vector<TimeInterval> regions);

// The structured holistic verdict for one audio sample.
struct AnalysisRecord {
  Label authenticity = Label::real;
  std::optional<SpoofMethod> method;
  std::vector<TimeInterval> regions;
  std::optional<std::string> semantic_influence;
  bool operator==(const AnalysisRecord&) const = default;
};

// Extracts the record from arbitrary model output: the first balanced
// {...} block whose top level has the key "real_or_fake" is parsed; prose
// and code fences around it are ignored, as are unknown keys inside it.
// Regions are normalized. Throws NoJsonFound, MissingAuthenticityKey,
// MalformedInterval, InconsistentRecord.
AnalysisRecord parse_analysis(std::string_view raw_text);

// Canonical single-line JSON with fixed key order (real_or_fake,
// spoof_method, spoof_regions, semantic_influence); absent optionals and
// empty region lists are omitted. Region endpoints are written with up to
// three decimal places. parse_analysis(serialize_analysis(r)) == r for any
// record whose endpoints sit on the millisecond lattice.
// Throws InvariantViolation on inconsistent records.
std::string serialize_analysis(const AnalysisRecord& record);

enum class ViolationKind { RegionOutOfBounds, InconsistentRecord };

struct ValidationIssue {
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Checks a record against the audio it annotates. A region may exceed the
// stated duration by at most 0.05 s (duration metadata and region labels
// come from different tools with rounding).
ValidationReport validate_record(const AnalysisRecord& record,
                                 double audio_duration_s);

// Seconds formatting used by the canonical wire form: up to three decimal
// places, at least one ("1.2", "0.0", "1.235").
std::string format_seconds(double value);

}  // namespace holispoof
