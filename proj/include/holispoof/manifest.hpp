#pragma once

#include <optional>
#include <string>
#include <vector>

#include "holispoof/annotation.hpp"

namespace holispoof {

// One dataset row. Fake entries carry a spoof method (`unknown` when the
// source corpus does not label it) and, when localized, spoofed regions.
// audio_path may be empty while the sample is still pending synthesis.
struct ManifestEntry {
  std::string sample_id;
  std::string audio_path;
  Label label = Label::real;
  std::optional<SpoofMethod> method;
  std::vector<TimeInterval> regions;
  std::string dataset_tag;
  std::string language;
  std::optional<double> duration_s;
  std::optional<std::string> semantic_influence;

  bool operator==(const ManifestEntry&) const = default;
};

// Parses one JSON Lines row. Required keys: sample_id, label. A fake entry
// without spoof_method is given method unknown; a real entry must not carry
// a method other than unknown, regions, or a semantic_influence text.
// Throws InconsistentRecord and MalformedInterval.
ManifestEntry manifest_entry_from_json(const std::string& line);

// Canonical single-line JSON with fixed key order: sample_id, audio_path,
// label, spoof_method, spoof_regions, dataset_tag, language, duration_s,
// semantic_influence. Absent optionals, empty region lists, and empty
// tag/language strings are omitted; audio_path is always present.
std::string manifest_entry_to_json(const ManifestEntry& entry);

// Reads a JSON Lines manifest, skipping blank lines and lines starting
// with '#'. Throws ManifestNotFound when the file cannot be opened,
// DuplicateSampleId on a repeated id, and the per-line parse errors with
// the line number attached.
std::vector<ManifestEntry> read_manifest(const std::string& path);

// Writes header comment lines (each prefixed with "# ") followed by one
// entry per line, flushing after every line.
void write_manifest(const std::string& path,
                    const std::vector<ManifestEntry>& entries,
                    const std::vector<std::string>& header_comments = {});

// The ground-truth analysis the entry encodes: label, method, regions, and
// semantic influence. An unknown method is preserved so that the metrics
// can exclude the sample from method scoring.
AnalysisRecord reference_record(const ManifestEntry& entry);

}  // namespace holispoof
