#include "doctest.h"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "helpers.hpp"
#include "holispoof/annotation.hpp"
#include "holispoof/errors.hpp"
#include "holispoof/evaluate.hpp"
#include "holispoof/manifest.hpp"
#include "json.hpp"

using holispoof::AnalysisRecord;
using holispoof::Error;
using holispoof::ErrorCode;
using holispoof::EvaluateOptions;
using holispoof::Label;
using holispoof::ManifestEntry;
using holispoof::MetricReport;
using holispoof::ScorePair;
using holispoof::SpoofMethod;
using holispoof::TimeInterval;

namespace {

ManifestEntry real_entry(const std::string& id, const std::string& tag = "") {
  ManifestEntry e;
  e.sample_id = id;
  e.label = Label::real;
  e.dataset_tag = tag;
  return e;
}

ManifestEntry fake_entry(const std::string& id, SpoofMethod method,
                         std::vector<TimeInterval> regions = {},
                         std::optional<double> duration = std::nullopt,
                         const std::string& tag = "") {
  ManifestEntry e;
  e.sample_id = id;
  e.label = Label::fake;
  e.method = method;
  e.regions = std::move(regions);
  e.duration_s = duration;
  e.dataset_tag = tag;
  return e;
}

std::string self_prediction(const ManifestEntry& entry) {
  return holispoof::serialize_analysis(holispoof::reference_record(entry));
}

std::vector<std::pair<std::string, std::string>> self_predictions(
    const std::vector<ManifestEntry>& entries) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : entries) out.emplace_back(e.sample_id, self_prediction(e));
  return out;
}

std::string fake_regions_json(const std::vector<TimeInterval>& regions) {
  AnalysisRecord record;
  record.authenticity = Label::fake;
  record.method = SpoofMethod::tts;
  record.regions = regions;
  return holispoof::serialize_analysis(record);
}

}  // namespace

TEST_CASE("a run that echoes the reference scores one on every metric") {
  const std::vector<ManifestEntry> refs = {
      real_entry("r1", "alpha"),
      fake_entry("f1", SpoofMethod::tts, {{0.4, 1.2}}, 2.0, "alpha"),
      fake_entry("f2", SpoofMethod::cut_and_paste, {{1.0, 2.0}}, 3.0, "beta"),
      real_entry("r2"),
  };
  const MetricReport report =
      holispoof::evaluate_run(refs, self_predictions(refs));

  CHECK(report.resolution_s == 0.2);
  CHECK(report.unmatched_predictions == 0);
  const auto& o = report.overall;
  CHECK(o.samples == 4);
  CHECK(o.parse_failures == 0);
  REQUIRE(o.accuracy.has_value());
  CHECK(*o.accuracy == 1.0);
  CHECK(!o.eer.has_value());
  CHECK(o.eer_scored == 0);
  REQUIRE(o.method_macro_f1.has_value());
  CHECK(*o.method_macro_f1 == 1.0);
  CHECK(o.method_scored == 2);
  CHECK(o.method_excluded_unknown == 0);
  REQUIRE(o.seg_f1.has_value());
  CHECK(*o.seg_f1 == 1.0);
  CHECK(o.seg_samples == 2);
  CHECK(!o.semantic_score.has_value());
  CHECK(o.semantic_scored == 0);

  // Only non-empty tags get a slice, in sorted order.
  REQUIRE(report.per_dataset.size() == 2);
  CHECK(report.per_dataset[0].first == "alpha");
  CHECK(report.per_dataset[0].second.samples == 2);
  CHECK(*report.per_dataset[0].second.accuracy == 1.0);
  CHECK(report.per_dataset[1].first == "beta");
  CHECK(report.per_dataset[1].second.samples == 1);
  CHECK(*report.per_dataset[1].second.seg_f1 == 1.0);
}

TEST_CASE("missing and unparseable outputs fail the sample on every metric") {
  const std::vector<ManifestEntry> refs = {
      real_entry("a"),
      fake_entry("b", SpoofMethod::tts, {{0.0, 1.0}}, 2.0),
      fake_entry("c", SpoofMethod::unknown),
      real_entry("d"),
  };
  const std::vector<std::pair<std::string, std::string>> preds = {
      {"a", "no json here"},
      {"c", "{\"real_or_fake\": \"real\"}"},
      {"d", "{\"real_or_fake\": \"real\"}"},
      {"zz", "{\"real_or_fake\": \"real\"}"},
  };
  const MetricReport report = holispoof::evaluate_run(refs, preds);
  const auto& o = report.overall;

  CHECK(o.samples == 4);
  // "a" is unparseable and "b" has no output at all.
  CHECK(o.parse_failures == 2);
  CHECK(*o.accuracy == 0.25);
  // "b" keeps its method slot as a miss; "c" is excluded as unlabeled.
  CHECK(o.method_scored == 1);
  CHECK(o.method_excluded_unknown == 1);
  CHECK(*o.method_macro_f1 == 0.0);
  // "b" contributes an all-miss segment grid.
  CHECK(o.seg_samples == 1);
  CHECK(*o.seg_f1 == 0.0);
  CHECK(report.unmatched_predictions == 1);
}

TEST_CASE("segment grids span the declared duration or fall back to labels") {
  // Without duration metadata the grid covers the labeled and predicted
  // spans: ref (0, 0.4) against pred (0.2, 0.6) makes three cells.
  ManifestEntry ref = fake_entry("s", SpoofMethod::tts, {{0.0, 0.4}});
  MetricReport report = holispoof::evaluate_run(
      {ref}, {{"s", fake_regions_json({{0.2, 0.6}})}});
  CHECK(report.overall.seg_samples == 1);
  CHECK(*report.overall.seg_f1 == 0.5);

  // A declared duration clamps the grid even when the prediction runs past
  // it: ten cells, pred marks 1..9, ref marks 0..1.
  ref = fake_entry("s", SpoofMethod::tts, {{0.0, 0.4}}, 2.0);
  report = holispoof::evaluate_run(
      {ref}, {{"s", fake_regions_json({{0.2, 5.0}})}});
  CHECK(*report.overall.seg_f1 == 2.0 / 11.0);

  // Without a duration a runaway predicted endpoint is capped an hour past
  // the last labeled region.
  ref = fake_entry("s", SpoofMethod::tts, {{0.0, 1.0}});
  report = holispoof::evaluate_run(
      {ref}, {{"s", fake_regions_json({{0.5, 10000.0}})}});
  const auto expect_at = [&](double duration) {
    const auto pred_marks =
        holispoof::rasterize_regions({{0.5, 10000.0}}, duration, 0.2);
    const auto ref_marks =
        holispoof::rasterize_regions({{0.0, 1.0}}, duration, 0.2);
    return holispoof::segment_f1(
        holispoof::segment_counts(pred_marks, ref_marks));
  };
  CHECK(*report.overall.seg_f1 == expect_at(3601.0));
  CHECK(*report.overall.seg_f1 != expect_at(10000.0));
}

TEST_CASE("segment scores pool counts instead of averaging per sample") {
  const std::vector<ManifestEntry> refs = {
      fake_entry("hit", SpoofMethod::tts, {{0.0, 0.4}}, 0.4),
      fake_entry("miss", SpoofMethod::tts, {{0.0, 0.4}}, 0.4),
  };
  const MetricReport report = holispoof::evaluate_run(
      refs, {{"hit", fake_regions_json({{0.0, 0.4}})}});
  // Two true cells from the hit plus two missed cells: 2tp/(2tp+fp+fn)
  // is 4/6, where a per-sample mean would have given 0.5.
  CHECK(*report.overall.seg_f1 == 2.0 / 3.0);
  CHECK(report.overall.seg_samples == 2);
}

TEST_CASE("raw logits drive the equal error rate column") {
  const std::vector<ManifestEntry> refs = {
      real_entry("r1"), real_entry("r2"),
      fake_entry("f1", SpoofMethod::tts), fake_entry("f2", SpoofMethod::tts),
      fake_entry("f3", SpoofMethod::tts),
  };
  const auto preds = self_predictions(refs);

  EvaluateOptions options;
  // The sigmoid keeps the ordering, so these mirror real scores
  // {0.6, 0.8} against fake scores {0.1, 0.5, 0.7}.
  options.scores = {{"r1", {0.6, 0.0}}, {"r2", {0.8, 0.0}},
                    {"f1", {0.1, 0.0}}, {"f2", {0.5, 0.0}},
                    {"f3", {0.7, 0.0}}, {"ghost", {9.0, 0.0}}};
  MetricReport report = holispoof::evaluate_run(refs, preds, options);
  CHECK(report.overall.eer_scored == 5);
  REQUIRE(report.overall.eer.has_value());
  CHECK(*report.overall.eer == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // Scores covering only one class leave the column empty.
  options.scores = {{"r1", {2.0, 0.0}}, {"r2", {1.0, 0.0}}};
  report = holispoof::evaluate_run(refs, preds, options);
  CHECK(report.overall.eer_scored == 2);
  CHECK(!report.overall.eer.has_value());
}

TEST_CASE("judge means feed the semantic column and are range-checked") {
  const std::vector<ManifestEntry> refs = {
      fake_entry("s1", SpoofMethod::tts),
      fake_entry("s2", SpoofMethod::vc),
  };
  const auto preds = self_predictions(refs);

  EvaluateOptions options;
  options.semantic_means = {{"s1", 4.0}, {"s2", 3.5}, {"ghost", 1.0}};
  const MetricReport report = holispoof::evaluate_run(refs, preds, options);
  CHECK(report.overall.semantic_scored == 2);
  REQUIRE(report.overall.semantic_score.has_value());
  CHECK(*report.overall.semantic_score == 3.75);

  options.semantic_means = {{"s1", 5.5}};
  try {
    holispoof::evaluate_run(refs, preds, options);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScoreOutOfRange);
    CHECK(std::string(e.what()).find(
              "semantic mean for sample s1 is outside [1, 5]: 5.5") !=
          std::string::npos);
  }
  options.semantic_means = {{"s1", 0.5}};
  CHECK_THROWS_AS(holispoof::evaluate_run(refs, preds, options), Error);
}

TEST_CASE("evaluation inputs are validated") {
  try {
    holispoof::evaluate_run({}, {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyInput);
    CHECK(std::string(e.what()).find("reference manifest has no entries") !=
          std::string::npos);
  }

  const std::vector<ManifestEntry> refs = {real_entry("a")};
  for (const double bad : {0.0, -0.5}) {
    EvaluateOptions options;
    options.resolution_s = bad;
    try {
      holispoof::evaluate_run(refs, {}, options);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConfigError);
      CHECK(std::string(e.what()).find(
                "resolution must be a positive number of seconds") !=
            std::string::npos);
    }
  }

  try {
    holispoof::evaluate_run(refs, {{"x", "1"}, {"x", "2"}});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateSampleId);
    CHECK(std::string(e.what()).find("prediction repeated for sample: x") !=
          std::string::npos);
  }

  try {
    holispoof::evaluate_run({real_entry("a"), real_entry("a")}, {});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateSampleId);
    CHECK(std::string(e.what()).find(
              "reference manifest repeats sample: a") != std::string::npos);
  }
}

TEST_CASE("prediction files split on the first tab only") {
  testutil::TempDir dir("preds");
  const std::string path = dir.file("preds.tsv");
  testutil::write_file(path,
                       "# header\n"
                       "\n"
                       "a1\t{\"k\": 1}\tand more\r\n"
                       "b2\tplain text\n");
  const auto rows = holispoof::read_predictions_file(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].first == "a1");
  CHECK(rows[0].second == "{\"k\": 1}\tand more");
  CHECK(rows[1].first == "b2");
  CHECK(rows[1].second == "plain text");

  try {
    holispoof::read_predictions_file(dir.file("absent.tsv"));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ManifestNotFound);
    CHECK(std::string(e.what()).find("predictions file not found: ") !=
          std::string::npos);
  }

  testutil::write_file(path, "no tab at all\n");
  try {
    holispoof::read_predictions_file(path);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvariantViolation);
    CHECK(std::string(e.what()).find(
              path + ":1: expected sample_id<TAB>raw_output") !=
          std::string::npos);
  }

  testutil::write_file(path, "\toutput without id\n");
  try {
    holispoof::read_predictions_file(path);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("empty sample id") != std::string::npos);
  }

  testutil::write_file(path, "a\tone\na\ttwo\n");
  try {
    holispoof::read_predictions_file(path);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateSampleId);
    CHECK(std::string(e.what()).find(path + ":2: repeated sample id: a") !=
          std::string::npos);
  }
}

TEST_CASE("scores files need two fully numeric columns") {
  testutil::TempDir dir("scores");
  const std::string path = dir.file("scores.tsv");
  testutil::write_file(path,
                       "# logits\n"
                       "s1\t0.25\t-1.5\n"
                       "s2\t1e3\t0\n");
  const auto scores = holispoof::read_scores_file(path);
  REQUIRE(scores.size() == 2);
  CHECK(scores.at("s1").logit_real == 0.25);
  CHECK(scores.at("s1").logit_fake == -1.5);
  CHECK(scores.at("s2").logit_real == 1000.0);
  CHECK(scores.at("s2").logit_fake == 0.0);

  testutil::write_file(path, "s1\t0.25\n");
  try {
    holispoof::read_scores_file(path);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(
              "expected sample_id<TAB>logit_real<TAB>logit_fake") !=
          std::string::npos);
  }

  for (const std::string row :
       {"s1\tx\t1\n", "s1\t1.5e\t1\n", "s1\t1 \t2\n", "s1\t\t2\n"}) {
    testutil::write_file(path, row);
    try {
      holispoof::read_scores_file(path);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvariantViolation);
      CHECK(std::string(e.what()).find("not a number: ") != std::string::npos);
    }
  }

  testutil::write_file(path, "s\t1\t2\ns\t3\t4\n");
  CHECK_THROWS_AS(holispoof::read_scores_file(path), Error);

  try {
    holispoof::read_scores_file(dir.file("absent.tsv"));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("scores file not found: ") !=
          std::string::npos);
  }
}

TEST_CASE("report JSON keeps a fixed key order and omits absent metrics") {
  const std::vector<ManifestEntry> refs = {
      real_entry("r1", "alpha"),
      fake_entry("f1", SpoofMethod::tts, {{0.0, 0.4}}, 1.0, "alpha"),
  };
  EvaluateOptions options;
  options.scores = {{"r1", {1.0, 0.0}}, {"f1", {0.0, 1.0}}};
  options.semantic_means = {{"f1", 4.0}};
  const auto full = holispoof::metric_report_to_json(
      holispoof::evaluate_run(refs, self_predictions(refs), options));

  std::vector<std::string> top;
  for (const auto& item : full.items()) top.push_back(item.key());
  CHECK(top == std::vector<std::string>{"resolution_s",
                                        "unmatched_predictions", "overall",
                                        "per_dataset"});

  std::vector<std::string> slice_keys;
  for (const auto& item : full.at("overall").items())
    slice_keys.push_back(item.key());
  CHECK(slice_keys ==
        std::vector<std::string>{
            "samples", "parse_failures", "accuracy", "eer", "eer_scored",
            "method_macro_f1", "method_scored", "method_excluded_unknown",
            "seg_f1", "seg_samples", "semantic_score", "semantic_scored"});
  CHECK(full.at("per_dataset").contains("alpha"));

  // A slice with no eligible samples for a metric drops that key.
  const auto sparse = holispoof::metric_report_to_json(
      holispoof::evaluate_run({real_entry("r1")},
                              {{"r1", "{\"real_or_fake\": \"real\"}"}}));
  const auto& overall = sparse.at("overall");
  CHECK(overall.contains("accuracy"));
  CHECK(!overall.contains("eer"));
  CHECK(!overall.contains("method_macro_f1"));
  CHECK(!overall.contains("seg_f1"));
  CHECK(!overall.contains("semantic_score"));
  CHECK(overall.at("eer_scored") == 0);
  CHECK(sparse.at("per_dataset").empty());
}
