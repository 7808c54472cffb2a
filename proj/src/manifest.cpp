#include "holispoof/manifest.hpp"

#include <fstream>
#include <set>

#include "holispoof/errors.hpp"
#include "json.hpp"

namespace holispoof {

namespace {

std::vector<TimeInterval> regions_from_json(const nlohmann::json& value) {
  if (!value.is_array())
    raise(ErrorCode::MalformedInterval, "\"spoof_regions\" must be an array");
  std::vector<TimeInterval> regions;
  for (const nlohmann::json& item : value) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() ||
        !item[1].is_number())
      raise(ErrorCode::MalformedInterval,
            "each region must be a [start, end] pair of seconds, got " +
                item.dump());
    TimeInterval interval{item[0].get<double>(), item[1].get<double>()};
    if (!interval_well_formed(interval))
      raise(ErrorCode::MalformedInterval,
            "region " + item.dump() + " has end <= start or a negative bound");
    regions.push_back(interval);
  }
  return normalize_regions(std::move(regions));
}

}  // namespace

ManifestEntry manifest_entry_from_json(const std::string& line) {
  const nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object())
    raise(ErrorCode::InconsistentRecord, "line is not a JSON object");

  ManifestEntry entry;
  if (!obj.contains("sample_id") || !obj.at("sample_id").is_string() ||
      obj.at("sample_id").get<std::string>().empty())
    raise(ErrorCode::InconsistentRecord,
          "entry needs a non-empty string \"sample_id\"");
  entry.sample_id = obj.at("sample_id").get<std::string>();

  if (!obj.contains("label") || !obj.at("label").is_string())
    raise(ErrorCode::InconsistentRecord,
          "entry " + entry.sample_id + " needs a string \"label\"");
  const auto label = parse_label(obj.at("label").get<std::string>());
  if (!label.has_value())
    raise(ErrorCode::InconsistentRecord,
          "entry " + entry.sample_id + " has unrecognized label " +
              obj.at("label").dump());
  entry.label = *label;

  if (obj.contains("audio_path") && obj.at("audio_path").is_string())
    entry.audio_path = obj.at("audio_path").get<std::string>();
  if (obj.contains("dataset_tag") && obj.at("dataset_tag").is_string())
    entry.dataset_tag = obj.at("dataset_tag").get<std::string>();
  if (obj.contains("language") && obj.at("language").is_string())
    entry.language = obj.at("language").get<std::string>();

  if (obj.contains("spoof_method")) {
    const nlohmann::json& method = obj.at("spoof_method");
    if (!method.is_string())
      raise(ErrorCode::InconsistentRecord,
            "entry " + entry.sample_id + " has a non-string spoof_method");
    const auto parsed = parse_method(method.get<std::string>());
    if (!parsed.has_value())
      raise(ErrorCode::InconsistentRecord,
            "entry " + entry.sample_id + " has unrecognized spoof_method " +
                method.dump());
    entry.method = *parsed;
  }

  if (obj.contains("spoof_regions")) {
    try {
      entry.regions = regions_from_json(obj.at("spoof_regions"));
    } catch (const Error& e) {
      raise(e.code(), "entry " + entry.sample_id + ": " + e.what());
    }
  }

  if (obj.contains("duration_s")) {
    const nlohmann::json& duration = obj.at("duration_s");
    if (!duration.is_number() || !(duration.get<double>() > 0.0))
      raise(ErrorCode::InconsistentRecord,
            "entry " + entry.sample_id + " has a non-positive duration_s");
    entry.duration_s = duration.get<double>();
  }

  if (obj.contains("semantic_influence") &&
      obj.at("semantic_influence").is_string()) {
    std::string text = obj.at("semantic_influence").get<std::string>();
    if (!text.empty()) entry.semantic_influence = std::move(text);
  }

  if (entry.label == Label::real) {
    if (entry.method.has_value() && *entry.method != SpoofMethod::unknown)
      raise(ErrorCode::InconsistentRecord,
            "real entry " + entry.sample_id + " carries a spoof_method");
    entry.method.reset();
    if (!entry.regions.empty())
      raise(ErrorCode::InconsistentRecord,
            "real entry " + entry.sample_id + " carries spoof_regions");
    if (entry.semantic_influence.has_value())
      raise(ErrorCode::InconsistentRecord,
            "real entry " + entry.sample_id + " carries semantic_influence");
  } else if (!entry.method.has_value()) {
    entry.method = SpoofMethod::unknown;
  }
  return entry;
}

std::string manifest_entry_to_json(const ManifestEntry& entry) {
  nlohmann::ordered_json obj;
  obj["sample_id"] = entry.sample_id;
  obj["audio_path"] = entry.audio_path;
  obj["label"] = to_string(entry.label);
  if (entry.method.has_value()) obj["spoof_method"] = to_string(*entry.method);
  if (!entry.regions.empty()) {
    nlohmann::ordered_json regions = nlohmann::ordered_json::array();
    for (const auto& r : entry.regions)
      regions.push_back(nlohmann::ordered_json::array({r.start_s, r.end_s}));
    obj["spoof_regions"] = std::move(regions);
  }
  if (!entry.dataset_tag.empty()) obj["dataset_tag"] = entry.dataset_tag;
  if (!entry.language.empty()) obj["language"] = entry.language;
  if (entry.duration_s.has_value()) obj["duration_s"] = *entry.duration_s;
  if (entry.semantic_influence.has_value())
    obj["semantic_influence"] = *entry.semantic_influence;
  return obj.dump();
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    raise(ErrorCode::ManifestNotFound, "cannot open manifest " + path);

  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#')
      continue;
    ManifestEntry entry;
    try {
      entry = manifest_entry_from_json(line);
    } catch (const Error& e) {
      raise(e.code(),
            path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen.insert(entry.sample_id).second)
      raise(ErrorCode::DuplicateSampleId,
            path + ":" + std::to_string(line_no) + ": sample_id " +
                entry.sample_id + " appears twice");
    entries.push_back(std::move(entry));
  }
  return entries;
}

void write_manifest(const std::string& path,
                    const std::vector<ManifestEntry>& entries,
                    const std::vector<std::string>& header_comments) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    raise(ErrorCode::ManifestNotFound, "cannot open " + path + " for writing");
  for (const std::string& comment : header_comments) {
    out << "# " << comment << "\n";
    out.flush();
  }
  for (const ManifestEntry& entry : entries) {
    out << manifest_entry_to_json(entry) << "\n";
    out.flush();
  }
}

AnalysisRecord reference_record(const ManifestEntry& entry) {
  AnalysisRecord record;
  record.authenticity = entry.label;
  if (entry.label == Label::fake) {
    record.method = entry.method;
    record.regions = entry.regions;
    record.semantic_influence = entry.semantic_influence;
  }
  return record;
}

}  // namespace holispoof
