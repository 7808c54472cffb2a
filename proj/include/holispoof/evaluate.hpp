#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "holispoof/manifest.hpp"
#include "holispoof/metrics.hpp"

namespace holispoof {

// Raw two-class logits for one sample, normalized into p(real) before
// threshold sweeping.
struct ScorePair {
  double logit_real = 0.0;
  double logit_fake = 0.0;
};

// Metrics over one group of samples. Each optional is absent when the group
// contains no sample eligible for that metric; the companion counters say
// how many samples fed it. seg_counts are pooled over the samples that have
// reference regions, so the group's seg_f1 is a micro average.
struct MetricSlice {
  std::size_t samples = 0;
  std::size_t parse_failures = 0;
  std::optional<double> accuracy;
  std::optional<double> eer;
  std::size_t eer_scored = 0;
  std::optional<double> method_macro_f1;
  std::size_t method_scored = 0;
  std::size_t method_excluded_unknown = 0;
  std::optional<double> seg_f1;
  std::size_t seg_samples = 0;
  SegmentCounts seg_counts;
  std::optional<double> semantic_score;
  std::size_t semantic_scored = 0;
};

struct MetricReport {
  double resolution_s = 0.2;
  MetricSlice overall;
  // One slice per non-empty dataset tag, ordered by tag.
  std::vector<std::pair<std::string, MetricSlice>> per_dataset;
  std::size_t unmatched_predictions = 0;
};

struct EvaluateOptions {
  double resolution_s = 0.2;
  // sample_id -> raw logits; enables the eer column.
  std::map<std::string, ScorePair> scores;
  // sample_id -> mean judge score in [1, 5]; enables the semantic column.
  std::map<std::string, double> semantic_means;
};

// Reads `sample_id<TAB>raw_model_output` lines, skipping blanks and lines
// starting with '#'. Only the first tab separates; the raw output may
// contain further tabs. Throws ManifestNotFound when the file cannot be
// opened, DuplicateSampleId on a repeated id, and InvariantViolation on a
// line without a tab or with an empty id.
std::vector<std::pair<std::string, std::string>> read_predictions_file(
    const std::string& path);

// Reads `sample_id<TAB>logit_real<TAB>logit_fake` lines under the same
// skipping and error rules.
std::map<std::string, ScorePair> read_scores_file(const std::string& path);

// Scores a prediction run against a reference manifest. Every reference
// sample either finds its raw output by sample_id or is counted as a parse
// failure, as is any output parse_analysis rejects; a failed sample scores
// wrong on every metric it participates in (label incorrect, no method
// class, no predicted regions). Method scoring covers fake references with
// a known method; unknown-method references are excluded and counted.
// Seg-F1 covers samples with reference regions, on a grid spanning the
// entry's duration_s when present and the labeled regions otherwise.
// Predictions whose id matches no reference are counted, not an error.
// Throws EmptyInput on an empty manifest, DuplicateSampleId, ConfigError
// on a non-positive resolution, ScoreOutOfRange on a semantic mean outside
// [1, 5].
MetricReport evaluate_run(
    const std::vector<ManifestEntry>& references,
    const std::vector<std::pair<std::string, std::string>>& predictions,
    const EvaluateOptions& options = {});

// Fixed key order: resolution_s, unmatched_predictions, overall,
// per_dataset; slices order their keys as declared above, absent metrics
// omitted.
nlohmann::ordered_json metric_report_to_json(const MetricReport& report);

}  // namespace holispoof
