#include "holispoof/curation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "holispoof/errors.hpp"
#include "json.hpp"

namespace holispoof {

namespace {

std::string trimmed(const std::string& text) {
  size_t begin = 0, end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])))
    ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
    --end;
  return text.substr(begin, end - begin);
}

ProposedEdit proposal_from_object(const nlohmann::json& object,
                                  size_t utterance_count) {
  const nlohmann::json& idx = object.at("target_utterance_idx");
  if (!idx.is_number_integer() && !idx.is_number_unsigned())
    raise(ErrorCode::StructuredOutputFailure,
          "target_utterance_idx must be an integer, got " + idx.dump());
  const std::int64_t value = idx.get<std::int64_t>();
  if (value < 0 || static_cast<size_t>(value) >= utterance_count)
    raise(ErrorCode::IndexOutOfRange,
          "writer chose utterance " + std::to_string(value) +
              " of a dialogue with " + std::to_string(utterance_count) +
              " utterances");
  const nlohmann::json& text = object.at("modified_text");
  if (!text.is_string() || text.get<std::string>().empty())
    raise(ErrorCode::StructuredOutputFailure,
          "modified_text must be a non-empty string");
  return {static_cast<size_t>(value), text.get<std::string>()};
}

ProposedEdit propose_over_messages(std::vector<ChatMessage>& conversation,
                                   const Dialogue& dialogue,
                                   GatewayClient& gateway,
                                   const CurationModels& models) {
  ChatRequest request;
  request.model_name = models.writer_model;
  request.temperature = models.writer_temperature;
  request.messages = conversation;
  const nlohmann::json object = gateway.complete_json(
      request, {"target_utterance_idx", "modified_text"});
  // The parsed proposal, re-serialized, becomes the assistant turn the
  // checker feedback will follow.
  conversation.push_back({"assistant", object.dump()});
  return proposal_from_object(object, dialogue.utterances.size());
}

bool coerce_passed(const nlohmann::json& value) {
  if (value.is_boolean()) return value.get<bool>();
  if (value.is_number_integer() || value.is_number_unsigned()) {
    const std::int64_t n = value.get<std::int64_t>();
    if (n == 1) return true;
    if (n == 0) return false;
  }
  if (value.is_string()) {
    std::string s = trimmed(value.get<std::string>());
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
  }
  raise(ErrorCode::StructuredOutputFailure,
        "checker \"passed\" value " + value.dump() + " is not a boolean");
}

}  // namespace

std::string to_string(EditVerdict verdict) {
  return verdict == EditVerdict::accepted ? "accepted" : "discarded";
}

ProposedEdit propose_edit(const Dialogue& dialogue, GatewayClient& gateway,
                          const CurationModels& models) {
  if (dialogue.utterances.size() < 2)
    raise(ErrorCode::ConfigError,
          "dialogue " + dialogue.dialogue_id + " needs at least 2 utterances");
  std::vector<ChatMessage> conversation{
      {"user", render_writer_prompt(dialogue)}};
  return propose_over_messages(conversation, dialogue, gateway, models);
}

CheckResult check_edit(const Dialogue& dialogue, const ProposedEdit& candidate,
                       GatewayClient& gateway, const CurationModels& models) {
  ChatRequest request;
  request.model_name = models.checker_model;
  request.temperature = models.checker_temperature;
  request.messages = {{"user",
                       render_checker_prompt(dialogue,
                                             candidate.target_utterance_idx,
                                             candidate.modified_text)}};
  const nlohmann::json object =
      gateway.complete_json(request, {"passed", "reason"});
  CheckResult result;
  result.passed = coerce_passed(object.at("passed"));
  const nlohmann::json& reason = object.at("reason");
  result.reason = reason.is_string() ? reason.get<std::string>() : reason.dump();
  return result;
}

SpoofEdit run_edit_loop(const Dialogue& dialogue, GatewayClient& gateway,
                        const CurationModels& models,
                        std::uint32_t max_iters) {
  if (dialogue.utterances.size() < 2)
    raise(ErrorCode::ConfigError,
          "dialogue " + dialogue.dialogue_id + " needs at least 2 utterances");
  if (max_iters == 0)
    raise(ErrorCode::ConfigError, "max_iters must be positive");

  SpoofEdit edit;
  edit.dialogue_id = dialogue.dialogue_id;
  try {
    std::vector<ChatMessage> conversation{
        {"user", render_writer_prompt(dialogue)}};
    for (std::uint32_t iteration = 1; iteration <= max_iters; ++iteration) {
      const ProposedEdit proposal =
          propose_over_messages(conversation, dialogue, gateway, models);
      const CheckResult check =
          check_edit(dialogue, proposal, gateway, models);
      edit.target_utterance_idx = proposal.target_utterance_idx;
      edit.modified_text = proposal.modified_text;
      edit.iterations_used = iteration;
      edit.checker_reason = check.reason;
      edit.checker_reasons.push_back(check.reason);
      if (check.passed) {
        edit.verdict = EditVerdict::accepted;
        return edit;
      }
      conversation.push_back(
          {"user", "checker rejected: " + check.reason});
    }
  } catch (const Error& e) {
    raise(e.code(), "dialogue " + dialogue.dialogue_id + ": " + e.what());
  }
  edit.verdict = EditVerdict::discarded;
  return edit;
}

std::string annotate_semantic_influence(const std::string& manipulated_content,
                                        const std::string& modified_span,
                                        SpanGranularity granularity,
                                        GatewayClient& gateway,
                                        const CurationModels& models) {
  if (manipulated_content.find(modified_span) == std::string::npos)
    raise(ErrorCode::SpanNotFound,
          "the modified span does not occur in the manipulated content");

  ChatRequest request;
  request.model_name = models.annotator_model;
  request.temperature = models.annotator_temperature;
  request.messages = {{"user", render_semantic_prompt(
                                   manipulated_content, modified_span,
                                   granularity)}};
  for (int ask = 0; ask < 3; ++ask) {
    const std::string reply = trimmed(gateway.complete(request));
    if (!reply.empty()) return reply;
    request.messages.push_back({"assistant", ""});
    request.messages.push_back(
        {"user",
         "Your previous reply was empty. Provide the concise textual "
         "analysis as plain text."});
  }
  raise(ErrorCode::StructuredOutputFailure,
        "the annotator replied with empty text 3 times");
}

namespace {

// A score reply must be nothing but an integer after whitespace stripping.
std::optional<int> parse_lone_score(const std::string& reply) {
  const std::string body = trimmed(reply);
  if (body.empty() || body.size() > 9) return std::nullopt;
  for (const char c : body)
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  const int value = std::stoi(body);
  if (value < 1 || value > 5) return std::nullopt;
  return value;
}

}  // namespace

JudgeVerdict judge_semantic_analysis(const std::string& original_text,
                                     const std::string& span_change,
                                     const std::string& model_analysis,
                                     GatewayClient& gateway,
                                     const CurationModels& models) {
  if (original_text.empty() || span_change.empty() || model_analysis.empty())
    raise(ErrorCode::EmptyInput,
          "judging needs the original text, the span change, and the "
          "analysis");
  const std::string prompt =
      render_judge_prompt(original_text, span_change, model_analysis);

  JudgeVerdict verdict;
  for (int query = 0; query < 3; ++query) {
    ChatRequest request;
    request.model_name = models.judge_model;
    request.temperature = models.judge_temperature;
    request.messages = {{"user", prompt}};

    std::string reply = gateway.complete(request);
    std::optional<int> score = parse_lone_score(reply);
    if (!score.has_value()) {
      request.messages.push_back({"assistant", reply});
      request.messages.push_back(
          {"user", "Output only the integer score (1-5) and nothing else."});
      reply = gateway.complete(request);
      score = parse_lone_score(reply);
    }
    if (score.has_value()) {
      verdict.scores.push_back(*score);
    } else {
      verdict.failures.push_back(
          std::string(error_code_name(ErrorCode::ScoreParseFailure)) +
          ": query " + std::to_string(query + 1) +
          " did not reply with a lone integer in [1, 5]");
    }
  }
  if (verdict.complete()) {
    double sum = 0.0;
    for (const int s : verdict.scores) sum += s;
    verdict.mean = sum / 3.0;
  }
  return verdict;
}

std::vector<PlanItem> assemble_icl_context(
    const std::vector<IclExample>& examples,
    const std::string& target_audio_ref) {
  if (examples.empty())
    raise(ErrorCode::InvalidExampleRecord,
          "in-context assembly needs at least one example");
  std::vector<PlanItem> plan;
  plan.reserve(2 * examples.size() + 2);
  for (size_t i = 0; i < examples.size(); ++i) {
    std::string serialized;
    try {
      serialized = serialize_analysis(examples[i].record);
    } catch (const Error& e) {
      raise(ErrorCode::InvalidExampleRecord,
            "example " + std::to_string(i) + ": " + e.what());
    }
    plan.push_back({PlanItemKind::example_audio, examples[i].audio_ref});
    plan.push_back({PlanItemKind::example_annotation, std::move(serialized)});
  }
  plan.push_back({PlanItemKind::target_audio, target_audio_ref});
  plan.push_back(
      {PlanItemKind::instruction,
       "Analyze the target audio and output the structured spoofing "
       "analysis as a single JSON object."});
  return plan;
}

// --- edits JSONL ------------------------------------------------------------

std::string spoof_edit_to_json(const SpoofEdit& edit) {
  nlohmann::ordered_json obj;
  obj["dialogue_id"] = edit.dialogue_id;
  obj["target_utterance_idx"] = edit.target_utterance_idx;
  obj["modified_text"] = edit.modified_text;
  obj["iterations_used"] = edit.iterations_used;
  obj["verdict"] = to_string(edit.verdict);
  obj["checker_reason"] = edit.checker_reason;
  obj["checker_reasons"] = edit.checker_reasons;
  if (edit.semantic_influence.has_value())
    obj["semantic_influence"] = *edit.semantic_influence;
  return obj.dump();
}

SpoofEdit spoof_edit_from_json(const std::string& line) {
  const nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object())
    raise(ErrorCode::InconsistentRecord, "edit line is not a JSON object");
  SpoofEdit edit;
  try {
    edit.dialogue_id = obj.at("dialogue_id").get<std::string>();
    edit.target_utterance_idx = obj.at("target_utterance_idx").get<size_t>();
    edit.modified_text = obj.at("modified_text").get<std::string>();
    edit.iterations_used = obj.at("iterations_used").get<std::uint32_t>();
    const std::string verdict = obj.at("verdict").get<std::string>();
    if (verdict == "accepted")
      edit.verdict = EditVerdict::accepted;
    else if (verdict == "discarded")
      edit.verdict = EditVerdict::discarded;
    else
      raise(ErrorCode::InconsistentRecord, "unknown verdict " + verdict);
    edit.checker_reason = obj.at("checker_reason").get<std::string>();
    if (obj.contains("checker_reasons"))
      edit.checker_reasons =
          obj.at("checker_reasons").get<std::vector<std::string>>();
    if (obj.contains("semantic_influence") &&
        obj.at("semantic_influence").is_string())
      edit.semantic_influence =
          obj.at("semantic_influence").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::InconsistentRecord,
          std::string("edit line is missing a field: ") + e.what());
  }
  return edit;
}

void write_edits(const std::string& path,
                 const std::vector<SpoofEdit>& edits) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    raise(ErrorCode::ManifestNotFound, "cannot open " + path + " for writing");
  for (const SpoofEdit& edit : edits) {
    out << spoof_edit_to_json(edit) << "\n";
    out.flush();
  }
}

std::vector<SpoofEdit> read_edits(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::ManifestNotFound, "cannot open " + path);
  std::vector<SpoofEdit> edits;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    try {
      edits.push_back(spoof_edit_from_json(line));
    } catch (const Error& e) {
      raise(e.code(), path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return edits;
}

}  // namespace holispoof
