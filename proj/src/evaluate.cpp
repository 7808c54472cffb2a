#include "holispoof/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "holispoof/errors.hpp"

namespace holispoof {

namespace {

std::ifstream open_or_raise(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    raise(ErrorCode::ManifestNotFound, std::string(what) + " not found: " + path);
  return in;
}

bool skip_line(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line.empty() || line[0] == '#';
}

[[noreturn]] void bad_line(const std::string& path, std::size_t line_no,
                           const std::string& why) {
  raise(ErrorCode::InvariantViolation,
        path + ":" + std::to_string(line_no) + ": " + why);
}

double parse_logit(const std::string& path, std::size_t line_no,
                   const std::string& field) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    bad_line(path, line_no, "not a number: " + field);
  }
  if (used != field.size()) bad_line(path, line_no, "not a number: " + field);
  return value;
}

// Scratch for one group of samples while streaming the manifest.
struct SliceAccumulator {
  MetricSlice slice;
  std::size_t correct = 0;
  std::vector<std::optional<SpoofMethod>> method_pred;
  std::vector<SpoofMethod> method_ref;
  std::vector<DetectionTrial> trials;
  double semantic_sum = 0.0;
};

void finalize(SliceAccumulator& acc) {
  MetricSlice& s = acc.slice;
  if (s.samples > 0)
    s.accuracy = static_cast<double>(acc.correct) / static_cast<double>(s.samples);
  bool has_real = false;
  bool has_fake = false;
  for (const auto& trial : acc.trials) (trial.is_real ? has_real : has_fake) = true;
  if (has_real && has_fake) s.eer = equal_error_rate(acc.trials);
  if (!acc.method_ref.empty())
    s.method_macro_f1 = method_macro_f1(acc.method_pred, acc.method_ref);
  if (s.seg_samples > 0) s.seg_f1 = segment_f1(s.seg_counts);
  if (s.semantic_scored > 0)
    s.semantic_score = acc.semantic_sum / static_cast<double>(s.semantic_scored);
}

nlohmann::ordered_json slice_to_json(const MetricSlice& s) {
  nlohmann::ordered_json j;
  j["samples"] = s.samples;
  j["parse_failures"] = s.parse_failures;
  if (s.accuracy) j["accuracy"] = *s.accuracy;
  if (s.eer) j["eer"] = *s.eer;
  j["eer_scored"] = s.eer_scored;
  if (s.method_macro_f1) j["method_macro_f1"] = *s.method_macro_f1;
  j["method_scored"] = s.method_scored;
  j["method_excluded_unknown"] = s.method_excluded_unknown;
  if (s.seg_f1) j["seg_f1"] = *s.seg_f1;
  j["seg_samples"] = s.seg_samples;
  if (s.semantic_score) j["semantic_score"] = *s.semantic_score;
  j["semantic_scored"] = s.semantic_scored;
  return j;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_predictions_file(
    const std::string& path) {
  auto in = open_or_raise(path, "predictions file");
  std::vector<std::pair<std::string, std::string>> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      bad_line(path, line_no, "expected sample_id<TAB>raw_output");
    if (tab == 0) bad_line(path, line_no, "empty sample id");
    std::string id = line.substr(0, tab);
    if (!seen.insert(id).second)
      raise(ErrorCode::DuplicateSampleId,
            path + ":" + std::to_string(line_no) + ": repeated sample id: " + id);
    out.emplace_back(std::move(id), line.substr(tab + 1));
  }
  return out;
}

std::map<std::string, ScorePair> read_scores_file(const std::string& path) {
  auto in = open_or_raise(path, "scores file");
  std::map<std::string, ScorePair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      bad_line(path, line_no, "expected sample_id<TAB>logit_real<TAB>logit_fake");
    if (tab1 == 0) bad_line(path, line_no, "empty sample id");
    std::string id = line.substr(0, tab1);
    ScorePair pair;
    pair.logit_real = parse_logit(path, line_no, line.substr(tab1 + 1, tab2 - tab1 - 1));
    pair.logit_fake = parse_logit(path, line_no, line.substr(tab2 + 1));
    if (!out.emplace(std::move(id), pair).second)
      raise(ErrorCode::DuplicateSampleId,
            path + ":" + std::to_string(line_no) +
                ": repeated sample id: " + line.substr(0, tab1));
  }
  return out;
}

MetricReport evaluate_run(
    const std::vector<ManifestEntry>& references,
    const std::vector<std::pair<std::string, std::string>>& predictions,
    const EvaluateOptions& options) {
  if (references.empty())
    raise(ErrorCode::EmptyInput, "reference manifest has no entries");
  if (!std::isfinite(options.resolution_s) || options.resolution_s <= 0.0)
    raise(ErrorCode::ConfigError, "resolution must be a positive number of seconds");

  std::unordered_map<std::string, const std::string*> pred_map;
  for (const auto& [id, text] : predictions)
    if (!pred_map.emplace(id, &text).second)
      raise(ErrorCode::DuplicateSampleId, "prediction repeated for sample: " + id);

  SliceAccumulator overall;
  std::map<std::string, SliceAccumulator> by_tag;
  std::unordered_set<std::string> seen_ids;
  std::size_t matched = 0;

  for (const auto& entry : references) {
    if (!seen_ids.insert(entry.sample_id).second)
      raise(ErrorCode::DuplicateSampleId,
            "reference manifest repeats sample: " + entry.sample_id);

    std::optional<AnalysisRecord> parsed;
    if (auto it = pred_map.find(entry.sample_id); it != pred_map.end()) {
      ++matched;
      try {
        parsed = parse_analysis(*it->second);
      } catch (const Error&) {
        parsed.reset();
      }
    }

    const auto apply = [&](SliceAccumulator& acc) {
      MetricSlice& s = acc.slice;
      ++s.samples;
      if (!parsed) ++s.parse_failures;
      if (parsed && parsed->authenticity == entry.label) ++acc.correct;

      if (entry.label == Label::fake) {
        const SpoofMethod ref_method = entry.method.value_or(SpoofMethod::unknown);
        if (ref_method == SpoofMethod::unknown) {
          ++s.method_excluded_unknown;
        } else {
          ++s.method_scored;
          acc.method_ref.push_back(ref_method);
          acc.method_pred.push_back(parsed ? parsed->method : std::nullopt);
        }
      }

      if (!entry.regions.empty()) {
        ++s.seg_samples;
        double ref_end = 0.0;
        for (const auto& region : entry.regions) ref_end = std::max(ref_end, region.end_s);
        double pred_end = 0.0;
        const std::vector<TimeInterval> pred_regions =
            parsed ? parsed->regions : std::vector<TimeInterval>{};
        for (const auto& region : pred_regions) pred_end = std::max(pred_end, region.end_s);
        // Without duration metadata the grid spans the labels; a runaway
        // predicted endpoint is capped so the grid stays bounded.
        const double duration =
            entry.duration_s ? *entry.duration_s
                             : std::max(ref_end, std::min(pred_end, ref_end + 3600.0));
        const auto ref_marks =
            rasterize_regions(entry.regions, duration, options.resolution_s);
        const auto pred_marks =
            rasterize_regions(pred_regions, duration, options.resolution_s);
        s.seg_counts += segment_counts(pred_marks, ref_marks);
      }

      if (auto it = options.scores.find(entry.sample_id); it != options.scores.end()) {
        ++s.eer_scored;
        acc.trials.push_back(
            {normalize_logits(it->second.logit_real, it->second.logit_fake),
             entry.label == Label::real});
      }

      if (auto it = options.semantic_means.find(entry.sample_id);
          it != options.semantic_means.end()) {
        if (!(it->second >= 1.0 && it->second <= 5.0))
          raise(ErrorCode::ScoreOutOfRange,
                "semantic mean for sample " + entry.sample_id +
                    " is outside [1, 5]: " + std::to_string(it->second));
        ++s.semantic_scored;
        acc.semantic_sum += it->second;
      }
    };

    apply(overall);
    if (!entry.dataset_tag.empty()) apply(by_tag[entry.dataset_tag]);
  }

  finalize(overall);
  MetricReport report;
  report.resolution_s = options.resolution_s;
  report.overall = overall.slice;
  for (auto& [tag, acc] : by_tag) {
    finalize(acc);
    report.per_dataset.emplace_back(tag, acc.slice);
  }
  report.unmatched_predictions = predictions.size() - matched;
  return report;
}

nlohmann::ordered_json metric_report_to_json(const MetricReport& report) {
  nlohmann::ordered_json j;
  j["resolution_s"] = report.resolution_s;
  j["unmatched_predictions"] = report.unmatched_predictions;
  j["overall"] = slice_to_json(report.overall);
  auto per = nlohmann::ordered_json::object();
  for (const auto& [tag, slice] : report.per_dataset) per[tag] = slice_to_json(slice);
  j["per_dataset"] = std::move(per);
  return j;
}

}  // namespace holispoof
