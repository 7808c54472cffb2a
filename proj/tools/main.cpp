#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "holispoof/adapter_math.hpp"
#include "holispoof/audio.hpp"
#include "holispoof/curation.hpp"
#include "holispoof/dialogue.hpp"
#include "holispoof/errors.hpp"
#include "holispoof/evaluate.hpp"
#include "holispoof/hash.hpp"
#include "holispoof/llm_gateway.hpp"
#include "holispoof/manifest.hpp"
#include "holispoof/mixer.hpp"
#include "holispoof/tts_client.hpp"
#include "holispoof/version.hpp"

namespace {

using holispoof::Error;
using holispoof::ErrorCode;
using holispoof::raise;
using nlohmann::ordered_json;

// 0 ok, 1 data failure, 2 config failure, 3 service failure.
int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::ZeroCap:
    case ErrorCode::ManifestNotFound:
      return 2;
    case ErrorCode::Timeout:
    case ErrorCode::AuthFailure:
    case ErrorCode::RateLimited:
    case ErrorCode::MalformedResponse:
    case ErrorCode::StructuredOutputFailure:
    case ErrorCode::ServiceUnavailable:
    case ErrorCode::SynthesisFailure:
      return 3;
    default:
      return 1;
  }
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string fixed3(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

struct ToolConfig {
  holispoof::GatewayConfig gateway;
  holispoof::TtsConfig tts;
  holispoof::CurationModels models;
  ordered_json file = ordered_json::object();
};

// The API key lives in HOLISPOOF_API_KEY only. A config file that tries to
// carry one is rejected so credentials never sit on disk or reach the
// config hash.
void reject_credential_keys(const ordered_json& node, const std::string& where) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      std::string folded;
      for (const char c : it.key())
        if (c != '_' && c != '-')
          folded += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (folded == "apikey" || folded == "credential" || folded == "credentials" ||
          folded == "authorization" || folded == "token" || folded == "secret" ||
          folded == "password")
        raise(ErrorCode::ConfigError,
              "config key '" + where + it.key() +
                  "' looks like a credential; the key is read from "
                  "HOLISPOOF_API_KEY only and must not be written to disk");
      reject_credential_keys(it.value(), where + it.key() + ".");
    }
  } else if (node.is_array()) {
    for (const auto& item : node) reject_credential_keys(item, where);
  }
}

ToolConfig load_tool_config(const std::string& path) {
  ToolConfig cfg;
  cfg.gateway = holispoof::gateway_config_from_env();
  cfg.tts.base_url = cfg.gateway.base_url;
  cfg.tts.credential = cfg.gateway.credential;
  if (path.empty()) return cfg;

  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::ConfigError, "cannot open config file: " + path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ConfigError,
          "config file is not valid JSON: " + path + ": " + e.what());
  }
  if (!doc.is_object()) raise(ErrorCode::ConfigError, "config root must be a JSON object");
  reject_credential_keys(doc, "");

  try {
    if (doc.contains("gateway")) {
      const auto& g = doc.at("gateway");
      if (g.contains("base_url")) cfg.gateway.base_url = g.at("base_url").get<std::string>();
      if (g.contains("timeout_s")) cfg.gateway.timeout_s = g.at("timeout_s").get<double>();
      if (g.contains("max_retries"))
        cfg.gateway.max_retries = g.at("max_retries").get<std::uint32_t>();
      if (g.contains("max_in_flight"))
        cfg.gateway.max_in_flight = g.at("max_in_flight").get<std::uint32_t>();
      if (g.contains("backoff")) {
        const auto& b = g.at("backoff");
        if (b.contains("initial_ms"))
          cfg.gateway.backoff.initial_ms = b.at("initial_ms").get<std::uint32_t>();
        if (b.contains("multiplier"))
          cfg.gateway.backoff.multiplier = b.at("multiplier").get<double>();
        if (b.contains("cap_ms")) cfg.gateway.backoff.cap_ms = b.at("cap_ms").get<std::uint32_t>();
      }
    }
    if (doc.contains("tts")) {
      const auto& t = doc.at("tts");
      if (t.contains("base_url")) cfg.tts.base_url = t.at("base_url").get<std::string>();
      if (t.contains("model")) cfg.tts.model_name = t.at("model").get<std::string>();
      if (t.contains("timeout_s")) cfg.tts.timeout_s = t.at("timeout_s").get<double>();
      if (t.contains("max_retries"))
        cfg.tts.max_retries = t.at("max_retries").get<std::uint32_t>();
      if (t.contains("backoff")) {
        const auto& b = t.at("backoff");
        if (b.contains("initial_ms"))
          cfg.tts.backoff.initial_ms = b.at("initial_ms").get<std::uint32_t>();
        if (b.contains("multiplier"))
          cfg.tts.backoff.multiplier = b.at("multiplier").get<double>();
        if (b.contains("cap_ms")) cfg.tts.backoff.cap_ms = b.at("cap_ms").get<std::uint32_t>();
      }
    }
    if (doc.contains("models")) {
      const auto& m = doc.at("models");
      if (m.contains("writer_model"))
        cfg.models.writer_model = m.at("writer_model").get<std::string>();
      if (m.contains("checker_model"))
        cfg.models.checker_model = m.at("checker_model").get<std::string>();
      if (m.contains("annotator_model"))
        cfg.models.annotator_model = m.at("annotator_model").get<std::string>();
      if (m.contains("judge_model"))
        cfg.models.judge_model = m.at("judge_model").get<std::string>();
      if (m.contains("writer_temperature"))
        cfg.models.writer_temperature = m.at("writer_temperature").get<double>();
      if (m.contains("checker_temperature"))
        cfg.models.checker_temperature = m.at("checker_temperature").get<double>();
      if (m.contains("annotator_temperature"))
        cfg.models.annotator_temperature = m.at("annotator_temperature").get<double>();
      if (m.contains("judge_temperature"))
        cfg.models.judge_temperature = m.at("judge_temperature").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ConfigError, std::string("config field has the wrong type: ") + e.what());
  }
  cfg.file = std::move(doc);
  return cfg;
}

bool is_mock_transport(const std::string& spec) { return spec.rfind("mock:", 0) == 0; }

std::shared_ptr<holispoof::Transport> make_chat_transport(
    const std::string& spec, const holispoof::GatewayConfig& gateway) {
  if (is_mock_transport(spec)) {
    const auto rules = std::filesystem::path(spec.substr(5)) / "rules.json";
    return std::make_shared<holispoof::MockRulesTransport>(rules.string());
  }
  if (!spec.empty() && spec != "http")
    raise(ErrorCode::ConfigError,
          "unknown transport '" + spec + "' (expected 'http' or 'mock:<fixture dir>')");
  if (gateway.base_url.empty())
    raise(ErrorCode::ConfigError,
          "no service endpoint; set HOLISPOOF_BASE_URL or gateway.base_url, "
          "or pass --transport mock:<fixture dir>");
  return std::make_shared<holispoof::HttpTransport>(gateway.base_url, gateway.timeout_s);
}

std::shared_ptr<holispoof::Transport> make_tts_transport(
    const std::string& spec, const holispoof::TtsConfig& tts) {
  if (is_mock_transport(spec)) {
    const auto rules = std::filesystem::path(spec.substr(5)) / "tts_rules.json";
    return std::make_shared<holispoof::MockTtsTransport>(rules.string());
  }
  if (!spec.empty() && spec != "http")
    raise(ErrorCode::ConfigError,
          "unknown transport '" + spec + "' (expected 'http' or 'mock:<fixture dir>')");
  if (tts.base_url.empty())
    raise(ErrorCode::ConfigError,
          "no synthesis endpoint; set HOLISPOOF_BASE_URL or tts.base_url, "
          "or pass --transport mock:<fixture dir>");
  return std::make_shared<holispoof::HttpTransport>(tts.base_url, tts.timeout_s);
}

std::string default_report_path(const std::string& explicit_path,
                                const std::string& anchor) {
  return explicit_path.empty() ? anchor + ".report.json" : explicit_path;
}

ordered_json effective_config(const ToolConfig& cfg, ordered_json flags) {
  ordered_json e;
  e["config_file"] = cfg.file;
  e["flags"] = std::move(flags);
  return e;
}

void write_report(const std::string& path, const std::string& command,
                  const ordered_json& effective, const ordered_json& seeds,
                  const ordered_json& payload) {
  ordered_json report;
  report["tool_version"] = holispoof::kVersion;
  report["command"] = command;
  report["config_hash"] = hex64(holispoof::fnv1a64(effective.dump()));
  report["seeds"] = seeds;
  for (auto it = payload.begin(); it != payload.end(); ++it) report[it.key()] = it.value();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::ConfigError, "cannot write report file: " + path);
  out << report.dump(2) << "\n";
}

// --- curate -----------------------------------------------------------------

struct CurateArgs {
  std::string dialogues_dir;
  std::string out_path;
  std::string manifest_out;
  std::string report_path;
  std::string transport;
  std::string config_path;
  std::string tag = "edits";
  std::string language = "en";
  std::uint32_t max_iters = 3;
};

int cmd_curate(const CurateArgs& args) {
  const ToolConfig cfg = load_tool_config(args.config_path);
  const auto dialogues = holispoof::load_dialogue_dir(args.dialogues_dir);
  holispoof::GatewayClient gateway(cfg.gateway,
                                   make_chat_transport(args.transport, cfg.gateway));

  std::vector<holispoof::SpoofEdit> edits;
  std::size_t accepted = 0;
  std::size_t discarded = 0;
  std::size_t failed = 0;
  std::size_t annotation_failures = 0;
  bool service_failure = false;

  for (const auto& dialogue : dialogues) {
    holispoof::SpoofEdit edit;
    try {
      edit = holispoof::run_edit_loop(dialogue, gateway, cfg.models, args.max_iters);
    } catch (const Error& e) {
      ++failed;
      if (exit_code_for(e.code()) == 3) service_failure = true;
      std::cerr << "curate: dialogue " << dialogue.dialogue_id << " failed: " << e.what()
                << "\n";
      continue;
    }
    if (edit.verdict == holispoof::EditVerdict::accepted) {
      ++accepted;
      try {
        edit.semantic_influence = holispoof::annotate_semantic_influence(
            holispoof::render_dialogue_lines_with_replacement(
                dialogue, edit.target_utterance_idx, edit.modified_text),
            edit.modified_text, holispoof::SpanGranularity::sentence, gateway, cfg.models);
      } catch (const Error& e) {
        ++annotation_failures;
        if (exit_code_for(e.code()) == 3) service_failure = true;
        std::cerr << "curate: semantic annotation for dialogue " << dialogue.dialogue_id
                  << " failed: " << e.what() << "\n";
      }
    } else {
      ++discarded;
    }
    edits.push_back(std::move(edit));
  }

  holispoof::write_edits(args.out_path, edits);

  std::vector<holispoof::ManifestEntry> pending;
  for (const auto& edit : edits) {
    if (edit.verdict != holispoof::EditVerdict::accepted) continue;
    holispoof::ManifestEntry entry;
    entry.sample_id = edit.dialogue_id;
    entry.label = holispoof::Label::fake;
    entry.method = holispoof::SpoofMethod::cut_and_paste;
    entry.dataset_tag = args.tag;
    entry.language = args.language;
    entry.semantic_influence = edit.semantic_influence;
    pending.push_back(std::move(entry));
  }
  const std::string manifest_out =
      args.manifest_out.empty()
          ? (std::filesystem::path(args.out_path).parent_path() / "pending_manifest.jsonl")
                .string()
          : args.manifest_out;
  holispoof::write_manifest(
      manifest_out, pending,
      {ordered_json{{"pending", pending.size()}, {"dataset_tag", args.tag}}.dump()});

  ordered_json payload;
  payload["dialogues"] = dialogues.size();
  payload["accepted"] = accepted;
  payload["discarded"] = discarded;
  payload["failed"] = failed;
  payload["annotation_failures"] = annotation_failures;
  payload["transport_calls"] = gateway.transport_calls();
  payload["edits_path"] = args.out_path;
  payload["manifest_path"] = manifest_out;
  write_report(default_report_path(args.report_path, args.out_path), "curate",
               effective_config(cfg, ordered_json{{"dialogues", args.dialogues_dir},
                                                  {"out", args.out_path},
                                                  {"manifest_out", manifest_out},
                                                  {"max_iters", args.max_iters},
                                                  {"transport", args.transport},
                                                  {"tag", args.tag},
                                                  {"language", args.language}}),
               ordered_json::object(), payload);
  std::cout << "curate: " << dialogues.size() << " dialogues, " << accepted
            << " accepted, " << discarded << " discarded, " << failed << " failed -> "
            << args.out_path << "\n";
  if (accepted > 0) return 0;
  return service_failure ? 3 : 1;
}

// --- mix ---------------------------------------------------------------------

struct MixArgs {
  std::string spec_path;
  std::string out_path;
  std::string report_path;
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

int cmd_mix(const MixArgs& args) {
  const ToolConfig cfg = load_tool_config(args.config_path);
  std::ifstream in(args.spec_path, std::ios::binary);
  if (!in) raise(ErrorCode::ConfigError, "cannot open mix spec: " + args.spec_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ConfigError,
          "mix spec is not valid JSON: " + args.spec_path + ": " + e.what());
  }

  std::vector<holispoof::MixDatasetSpec> specs;
  std::uint64_t seed = 0;
  try {
    if (!doc.contains("datasets") || !doc.at("datasets").is_array() ||
        doc.at("datasets").empty())
      raise(ErrorCode::ConfigError, "mix spec needs a non-empty 'datasets' array");
    for (const auto& d : doc.at("datasets")) {
      holispoof::MixDatasetSpec spec;
      spec.manifest_path = d.contains("manifest") ? d.at("manifest").get<std::string>()
                                                  : d.at("manifest_path").get<std::string>();
      spec.dataset_tag = d.contains("tag") ? d.at("tag").get<std::string>()
                                           : d.at("dataset_tag").get<std::string>();
      spec.cap = d.at("cap").get<std::uint64_t>();
      specs.push_back(std::move(spec));
    }
    if (args.seed)
      seed = *args.seed;
    else if (doc.contains("seed"))
      seed = doc.at("seed").get<std::uint64_t>();
    else
      raise(ErrorCode::ConfigError, "no seed given; pass --seed or put 'seed' in the mix spec");
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ConfigError, std::string("mix spec field error: ") + e.what());
  }

  const auto result = holispoof::build_mixed_manifest(specs, seed);
  holispoof::write_mixed_manifest(args.out_path, result);

  std::uint64_t real = 0;
  std::uint64_t fake = 0;
  auto datasets = ordered_json::array();
  for (const auto& summary : result.datasets) {
    real += summary.real;
    fake += summary.fake;
    datasets.push_back(ordered_json{{"tag", summary.dataset_tag},
                                    {"pool", summary.pool_size},
                                    {"selected", summary.selected},
                                    {"real", summary.real},
                                    {"fake", summary.fake}});
  }
  ordered_json payload;
  payload["total"] = result.entries.size();
  payload["real"] = real;
  payload["fake"] = fake;
  payload["datasets"] = datasets;
  payload["out_path"] = args.out_path;
  write_report(default_report_path(args.report_path, args.out_path), "mix",
               effective_config(cfg, ordered_json{{"spec", args.spec_path},
                                                  {"out", args.out_path},
                                                  {"seed", seed}}),
               ordered_json{{"mix", seed}}, payload);
  std::cout << "mix: " << result.datasets.size() << " datasets, " << result.entries.size()
            << " samples (" << real << " real, " << fake << " fake), seed " << seed
            << " -> " << args.out_path << "\n";
  return 0;
}

// --- evaluate ----------------------------------------------------------------

struct EvaluateArgs {
  std::string manifest_path;
  std::string predictions_path;
  std::string scores_path;
  std::string judge_path;
  std::string report_path = "metric_report.json";
  std::string config_path;
  double resolution_s = 0.2;
};

std::map<std::string, double> read_judge_means(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::ManifestNotFound, "judge verdicts file not found: " + path);
  std::map<std::string, double> means;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
      const auto id = row.at("sample_id").get<std::string>();
      if (!row.contains("mean")) continue;
      if (!means.emplace(id, row.at("mean").get<double>()).second)
        raise(ErrorCode::DuplicateSampleId,
              path + ":" + std::to_string(line_no) + ": repeated sample id: " + id);
    } catch (const nlohmann::json::exception& e) {
      raise(ErrorCode::InvariantViolation,
            path + ":" + std::to_string(line_no) + ": bad judge verdict row: " + e.what());
    }
  }
  return means;
}

int cmd_evaluate(const EvaluateArgs& args) {
  const ToolConfig cfg = load_tool_config(args.config_path);
  const auto references = holispoof::read_manifest(args.manifest_path);
  const auto predictions = holispoof::read_predictions_file(args.predictions_path);

  holispoof::EvaluateOptions options;
  options.resolution_s = args.resolution_s;
  if (!args.scores_path.empty()) options.scores = holispoof::read_scores_file(args.scores_path);
  if (!args.judge_path.empty()) options.semantic_means = read_judge_means(args.judge_path);

  const auto report = holispoof::evaluate_run(references, predictions, options);

  ordered_json payload = holispoof::metric_report_to_json(report);
  payload["manifest_path"] = args.manifest_path;
  payload["predictions_path"] = args.predictions_path;
  write_report(args.report_path, "evaluate",
               effective_config(cfg, ordered_json{{"manifest", args.manifest_path},
                                                  {"predictions", args.predictions_path},
                                                  {"scores", args.scores_path},
                                                  {"judge_file", args.judge_path},
                                                  {"resolution", args.resolution_s}}),
               ordered_json::object(), payload);

  std::string line = "evaluate: " + std::to_string(report.overall.samples) + " samples, " +
                     std::to_string(report.overall.parse_failures) + " parse failures";
  if (report.overall.accuracy) line += ", accuracy " + fixed3(*report.overall.accuracy);
  if (report.overall.eer) line += ", eer " + fixed3(*report.overall.eer);
  if (report.overall.method_macro_f1)
    line += ", method_f1 " + fixed3(*report.overall.method_macro_f1);
  if (report.overall.seg_f1) line += ", seg_f1 " + fixed3(*report.overall.seg_f1);
  if (report.overall.semantic_score)
    line += ", semantic " + fixed3(*report.overall.semantic_score);
  std::cout << line << " -> " << args.report_path << "\n";
  return 0;
}

// --- judge ---------------------------------------------------------------

struct JudgeArgs {
  std::string input_path;
  std::string out_path;
  std::string report_path;
  std::string transport;
  std::string config_path;
};

struct JudgeRow {
  std::string sample_id;
  std::string original_text;
  std::string modification;
  std::string analysis;
};

std::vector<JudgeRow> read_judge_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::ManifestNotFound, "judge input file not found: " + path);
  std::vector<JudgeRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    try {
      const auto row = nlohmann::json::parse(line);
      JudgeRow parsed;
      parsed.sample_id = row.at("sample_id").get<std::string>();
      parsed.original_text = row.at("original_text").get<std::string>();
      if (row.contains("modification"))
        parsed.modification = row.at("modification").get<std::string>();
      else
        parsed.modification = row.at("original_span").get<std::string>() + " -> " +
                              row.at("modified_span").get<std::string>();
      parsed.analysis = row.at("analysis").get<std::string>();
      rows.push_back(std::move(parsed));
    } catch (const nlohmann::json::exception& e) {
      raise(ErrorCode::InvariantViolation,
            path + ":" + std::to_string(line_no) + ": bad judge input row: " + e.what());
    }
  }
  if (rows.empty()) raise(ErrorCode::EmptyInput, "judge input has no rows: " + path);
  return rows;
}

int cmd_judge(const JudgeArgs& args) {
  const ToolConfig cfg = load_tool_config(args.config_path);
  const auto rows = read_judge_input(args.input_path);
  holispoof::GatewayClient gateway(cfg.gateway,
                                   make_chat_transport(args.transport, cfg.gateway));

  std::ofstream out(args.out_path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::ConfigError, "cannot write judge verdicts: " + args.out_path);

  std::size_t judged = 0;
  std::size_t complete = 0;
  std::size_t failed = 0;
  bool service_failure = false;
  double mean_sum = 0.0;

  for (const auto& row : rows) {
    ordered_json record;
    record["sample_id"] = row.sample_id;
    try {
      const auto verdict = holispoof::judge_semantic_analysis(
          row.original_text, row.modification, row.analysis, gateway, cfg.models);
      ++judged;
      record["scores"] = verdict.scores;
      if (verdict.mean) {
        record["mean"] = *verdict.mean;
        mean_sum += *verdict.mean;
        ++complete;
      }
      record["failures"] = verdict.failures;
    } catch (const Error& e) {
      ++failed;
      if (exit_code_for(e.code()) == 3) service_failure = true;
      std::cerr << "judge: sample " << row.sample_id << " failed: " << e.what() << "\n";
      record["scores"] = nlohmann::json::array();
      record["failures"] = std::vector<std::string>{e.what()};
    }
    out << record.dump() << "\n";
    out.flush();
  }

  ordered_json payload;
  payload["samples"] = rows.size();
  payload["judged"] = judged;
  payload["complete"] = complete;
  if (complete > 0) payload["mean_of_means"] = mean_sum / static_cast<double>(complete);
  payload["failed"] = failed;
  payload["transport_calls"] = gateway.transport_calls();
  payload["out_path"] = args.out_path;
  write_report(default_report_path(args.report_path, args.out_path), "judge",
               effective_config(cfg, ordered_json{{"input", args.input_path},
                                                  {"out", args.out_path},
                                                  {"transport", args.transport}}),
               ordered_json::object(), payload);
  std::cout << "judge: " << rows.size() << " samples, " << judged << " judged, "
            << complete << " complete -> " << args.out_path << "\n";
  if (judged > 0) return 0;
  return service_failure ? 3 : 1;
}

// --- assemble ------------------------------------------------------------

struct AssembleArgs {
  std::string edits_path;
  std::string dialogues_dir;
  std::string out_dir;
  std::string manifest_out;
  std::string report_path;
  std::string transport;
  std::string config_path;
  std::string tag = "edits";
  std::string language = "en";
};

int cmd_assemble(const AssembleArgs& args) {
  const ToolConfig cfg = load_tool_config(args.config_path);
  const auto all_edits = holispoof::read_edits(args.edits_path);
  std::vector<holispoof::SpoofEdit> accepted;
  for (const auto& edit : all_edits)
    if (edit.verdict == holispoof::EditVerdict::accepted) accepted.push_back(edit);
  if (accepted.empty())
    raise(ErrorCode::EmptyInput, "no accepted edits in " + args.edits_path);

  const auto dialogues = holispoof::load_dialogue_dir(args.dialogues_dir);
  std::map<std::string, const holispoof::Dialogue*> by_id;
  for (const auto& dialogue : dialogues) by_id[dialogue.dialogue_id] = &dialogue;

  holispoof::TtsConfig tts_config = cfg.tts;
  holispoof::TtsClient tts(tts_config, make_tts_transport(args.transport, cfg.tts));
  std::filesystem::create_directories(args.out_dir);

  std::vector<holispoof::ManifestEntry> entries;
  std::size_t assembled = 0;
  std::size_t failed = 0;
  bool service_failure = false;

  for (const auto& edit : accepted) {
    try {
      const auto it = by_id.find(edit.dialogue_id);
      if (it == by_id.end())
        raise(ErrorCode::ConfigError,
              "edit references a dialogue not under " + args.dialogues_dir + ": " +
                  edit.dialogue_id);
      const holispoof::Dialogue& dialogue = *it->second;
      if (edit.target_utterance_idx >= dialogue.utterances.size())
        raise(ErrorCode::IndexOutOfRange,
              "edit for dialogue " + edit.dialogue_id + " targets utterance " +
                  std::to_string(edit.target_utterance_idx) + " of " +
                  std::to_string(dialogue.utterances.size()));

      const auto selection =
          holispoof::select_prompt_utterance(dialogue, edit.target_utterance_idx);
      const auto prompt =
          holispoof::read_wav(dialogue.utterances[selection.utterance_idx].audio_path);
      const auto synthesized = tts.synthesize(edit.modified_text, prompt);

      std::vector<holispoof::Waveform> waves;
      waves.reserve(dialogue.utterances.size());
      for (const auto& utterance : dialogue.utterances)
        waves.push_back(holispoof::read_wav(utterance.audio_path));
      const auto result =
          holispoof::splice_replace(waves, edit.target_utterance_idx, synthesized);

      const std::string wav_path =
          (std::filesystem::path(args.out_dir) / (edit.dialogue_id + ".wav")).string();
      holispoof::write_wav(wav_path, result.waveform);

      holispoof::ManifestEntry entry;
      entry.sample_id = edit.dialogue_id;
      entry.audio_path = wav_path;
      entry.label = holispoof::Label::fake;
      entry.method = holispoof::SpoofMethod::cut_and_paste;
      entry.regions = result.spoofed_regions;
      entry.dataset_tag = args.tag;
      entry.language = args.language;
      entry.duration_s = result.waveform.duration_s();
      entry.semantic_influence = edit.semantic_influence;
      entries.push_back(std::move(entry));
      ++assembled;
    } catch (const Error& e) {
      ++failed;
      if (exit_code_for(e.code()) == 3) service_failure = true;
      std::cerr << "assemble: dialogue " << edit.dialogue_id << " failed: " << e.what()
                << "\n";
    }
  }

  const std::string manifest_out =
      args.manifest_out.empty()
          ? (std::filesystem::path(args.out_dir) / "assembled_manifest.jsonl").string()
          : args.manifest_out;
  holispoof::write_manifest(
      manifest_out, entries,
      {ordered_json{{"assembled", assembled}, {"dataset_tag", args.tag}}.dump()});

  ordered_json payload;
  payload["edits"] = accepted.size();
  payload["assembled"] = assembled;
  payload["failed"] = failed;
  payload["out_dir"] = args.out_dir;
  payload["manifest_path"] = manifest_out;
  write_report(default_report_path(args.report_path, manifest_out), "assemble",
               effective_config(cfg, ordered_json{{"edits", args.edits_path},
                                                  {"dialogues", args.dialogues_dir},
                                                  {"out_dir", args.out_dir},
                                                  {"manifest_out", manifest_out},
                                                  {"transport", args.transport},
                                                  {"tag", args.tag},
                                                  {"language", args.language}}),
               ordered_json::object(), payload);
  std::cout << "assemble: " << accepted.size() << " edits, " << assembled
            << " assembled, " << failed << " failed -> " << args.out_dir << "\n";
  if (assembled > 0) return 0;
  return service_failure ? 3 : 1;
}

// --- dora-check ------------------------------------------------------------

struct DoraArgs {
  std::string params_path;
  std::string expected_path;
  std::string out_path;
  std::string report_path = "dora_report.json";
  std::string config_path;
  double tolerance = 1e-9;
};

nlohmann::json read_json_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::ConfigError, std::string("cannot open ") + what + ": " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ConfigError,
          std::string(what) + " is not valid JSON: " + path + ": " + e.what());
  }
}

int cmd_dora_check(const DoraArgs& args) {
  const ToolConfig cfg = load_tool_config(args.config_path);
  const auto params = holispoof::dora_params_from_json(read_json_file(args.params_path, "params file"));
  const auto merged = holispoof::dora_merge(params);

  std::optional<double> max_abs_diff;
  bool ok = true;
  if (!args.expected_path.empty()) {
    const auto expected =
        holispoof::matrix_from_json(read_json_file(args.expected_path, "expected matrix"));
    if (expected.rows != merged.rows || expected.cols != merged.cols)
      raise(ErrorCode::DimensionMismatch,
            "expected matrix is " + std::to_string(expected.rows) + "x" +
                std::to_string(expected.cols) + " but the merged weight is " +
                std::to_string(merged.rows) + "x" + std::to_string(merged.cols));
    double diff = 0.0;
    for (std::size_t i = 0; i < merged.data.size(); ++i)
      diff = std::max(diff, std::abs(merged.data[i] - expected.data[i]));
    max_abs_diff = diff;
    ok = diff <= args.tolerance;
  }

  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::ConfigError, "cannot write merged matrix: " + args.out_path);
    out << holispoof::matrix_to_json(merged).dump() << "\n";
  }

  ordered_json payload;
  payload["rows"] = merged.rows;
  payload["cols"] = merged.cols;
  if (max_abs_diff) payload["max_abs_diff"] = *max_abs_diff;
  payload["tolerance"] = args.tolerance;
  payload["ok"] = ok;
  write_report(args.report_path, "dora-check",
               effective_config(cfg, ordered_json{{"params", args.params_path},
                                                  {"expected", args.expected_path},
                                                  {"out", args.out_path},
                                                  {"tolerance", args.tolerance}}),
               ordered_json::object(), payload);

  char diff_text[64] = "no expected matrix";
  if (max_abs_diff)
    std::snprintf(diff_text, sizeof(diff_text), "max |diff| %.3e (tol %.0e)",
                  *max_abs_diff, args.tolerance);
  std::cout << "dora-check: " << merged.rows << "x" << merged.cols << " merged, "
            << diff_text << " -> " << (ok ? "ok" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holistic speech anti-spoofing toolkit: dialogue manipulation "
               "pipeline, dataset mixing, and structured-analysis scoring"};
  app.set_version_flag("--version", std::string(holispoof::kVersion));
  app.require_subcommand(1);

  CurateArgs curate_args;
  auto* curate = app.add_subcommand(
      "curate", "propose and vet one malicious utterance edit per dialogue");
  curate->add_option("--dialogues", curate_args.dialogues_dir, "dialogue root directory")
      ->required();
  curate->add_option("--out", curate_args.out_path, "edits JSONL output path")->required();
  curate->add_option("--max-iters", curate_args.max_iters,
                     "propose/check rounds before discarding (default 3)");
  curate->add_option("--manifest-out", curate_args.manifest_out,
                     "pending-sample manifest path (default: pending_manifest.jsonl "
                     "next to --out)");
  curate->add_option("--tag", curate_args.tag, "dataset tag for the pending manifest");
  curate->add_option("--language", curate_args.language, "language tag for the manifest");
  curate->add_option("--report", curate_args.report_path, "JSON report path");
  curate->add_option("--transport", curate_args.transport,
                     "'http' or 'mock:<fixture dir>'");
  curate->add_option("--config", curate_args.config_path, "JSON config file");

  MixArgs mix_args;
  std::uint64_t mix_seed = 0;
  auto* mix = app.add_subcommand("mix", "build a mixed manifest by stratified sampling");
  mix->add_option("--spec", mix_args.spec_path, "mix spec JSON file")->required();
  auto* mix_seed_opt = mix->add_option("--seed", mix_seed, "sampling seed");
  mix->add_option("--out", mix_args.out_path, "mixed manifest output path")->required();
  mix->add_option("--report", mix_args.report_path, "JSON report path");
  mix->add_option("--config", mix_args.config_path, "JSON config file");

  EvaluateArgs evaluate_args;
  auto* evaluate = app.add_subcommand(
      "evaluate", "score structured predictions against a reference manifest");
  evaluate->add_option("--manifest", evaluate_args.manifest_path, "reference manifest")
      ->required();
  evaluate
      ->add_option("--predictions", evaluate_args.predictions_path,
                   "sample_id<TAB>raw_output file")
      ->required();
  evaluate->add_option("--resolution", evaluate_args.resolution_s,
                       "segment resolution in seconds (default 0.2)");
  evaluate->add_option("--scores", evaluate_args.scores_path,
                       "sample_id<TAB>logit_real<TAB>logit_fake file enabling EER");
  evaluate->add_option("--judge-file", evaluate_args.judge_path,
                       "judge verdicts JSONL enabling the semantic column");
  evaluate->add_option("--report", evaluate_args.report_path,
                       "metric report path (default metric_report.json)");
  evaluate->add_option("--config", evaluate_args.config_path, "JSON config file");

  JudgeArgs judge_args;
  auto* judge = app.add_subcommand(
      "judge", "score semantic analyses with three independent rubric queries");
  judge->add_option("--input", judge_args.input_path, "analyses JSONL file")->required();
  judge->add_option("--out", judge_args.out_path, "verdicts JSONL output path")->required();
  judge->add_option("--report", judge_args.report_path, "JSON report path");
  judge->add_option("--transport", judge_args.transport, "'http' or 'mock:<fixture dir>'");
  judge->add_option("--config", judge_args.config_path, "JSON config file");

  AssembleArgs assemble_args;
  auto* assemble = app.add_subcommand(
      "assemble", "synthesize accepted edits and splice them into dialogue audio");
  assemble->add_option("--edits", assemble_args.edits_path, "edits JSONL from curate")
      ->required();
  assemble
      ->add_option("--dialogues", assemble_args.dialogues_dir, "dialogue root directory")
      ->required();
  assemble->add_option("--out-dir", assemble_args.out_dir, "directory for spliced WAVs")
      ->required();
  assemble->add_option("--manifest-out", assemble_args.manifest_out,
                       "output manifest path (default: assembled_manifest.jsonl in "
                       "--out-dir)");
  assemble->add_option("--tag", assemble_args.tag, "dataset tag for the manifest");
  assemble->add_option("--language", assemble_args.language, "language tag");
  assemble->add_option("--report", assemble_args.report_path, "JSON report path");
  assemble->add_option("--transport", assemble_args.transport,
                       "'http' or 'mock:<fixture dir>'");
  assemble->add_option("--config", assemble_args.config_path, "JSON config file");

  DoraArgs dora_args;
  auto* dora = app.add_subcommand(
      "dora-check", "merge low-rank adapter parameters and verify the result");
  dora->add_option("--params", dora_args.params_path, "adapter parameters JSON file")
      ->required();
  dora->add_option("--expected", dora_args.expected_path,
                   "expected merged matrix JSON file");
  dora->add_option("--tolerance", dora_args.tolerance,
                   "max abs elementwise difference (default 1e-9)");
  dora->add_option("--out", dora_args.out_path, "write the merged matrix JSON here");
  dora->add_option("--report", dora_args.report_path,
                   "JSON report path (default dora_report.json)");
  dora->add_option("--config", dora_args.config_path, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (mix_seed_opt->count() > 0) mix_args.seed = mix_seed;
    if (curate->parsed()) return cmd_curate(curate_args);
    if (mix->parsed()) return cmd_mix(mix_args);
    if (evaluate->parsed()) return cmd_evaluate(evaluate_args);
    if (judge->parsed()) return cmd_judge(judge_args);
    if (assemble->parsed()) return cmd_assemble(assemble_args);
    if (dora->parsed()) return cmd_dora_check(dora_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
