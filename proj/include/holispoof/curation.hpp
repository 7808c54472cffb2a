#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holispoof/annotation.hpp"
#include "holispoof/dialogue.hpp"
#include "holispoof/llm_gateway.hpp"
#include "holispoof/prompts.hpp"

namespace holispoof {

// Model names and sampling temperatures for the four service roles. The
// writer wants a reasoning-capable model; the checker and judge run cold.
struct CurationModels {
  std::string writer_model = "gemini-2.5-flash-thinking";
  std::string checker_model = "gemini-2.5-flash";
  std::string annotator_model = "gemini-2.5-flash-thinking";
  std::string judge_model = "gemini-3-flash";
  double writer_temperature = 0.8;
  double checker_temperature = 0.0;
  double annotator_temperature = 0.0;
  double judge_temperature = 0.0;
};

struct ProposedEdit {
  size_t target_utterance_idx = 0;
  std::string modified_text;
};

enum class EditVerdict { accepted, discarded };

std::string to_string(EditVerdict verdict);

// Outcome of the writer/checker loop for one dialogue. checker_reasons
// keeps one entry per iteration so discarded dialogues leave an audit
// trail; checker_reason repeats the final one.
struct SpoofEdit {
  std::string dialogue_id;
  size_t target_utterance_idx = 0;
  std::string modified_text;
  std::uint32_t iterations_used = 0;
  EditVerdict verdict = EditVerdict::discarded;
  std::string checker_reason;
  std::vector<std::string> checker_reasons;
  std::optional<std::string> semantic_influence;

  bool operator==(const SpoofEdit&) const = default;
};

struct CheckResult {
  bool passed = false;
  std::string reason;
};

// Scores of the three independent judge queries, in query order. mean is
// present only when all three parsed; failures records per-query parse
// problems.
struct JudgeVerdict {
  std::vector<int> scores;
  std::optional<double> mean;
  std::vector<std::string> failures;

  bool complete() const { return scores.size() == 3; }
};

// One writer proposal: renders the writer prompt, asks for
// {target_utterance_idx, modified_text}, and validates the index range.
// Throws StructuredOutputFailure (bad shape after re-asks), IndexOutOfRange,
// ConfigError (fewer than 2 utterances).
ProposedEdit propose_edit(const Dialogue& dialogue, GatewayClient& gateway,
                          const CurationModels& models);

// One checker verdict over the candidate. A non-boolean "passed" value is
// coerced over the alias table true/yes/1 and false/no/0; anything else is
// StructuredOutputFailure.
CheckResult check_edit(const Dialogue& dialogue, const ProposedEdit& candidate,
                       GatewayClient& gateway, const CurationModels& models);

// Propose/check loop with at most max_iters rounds. On a pass the edit is
// accepted with iterations_used set; otherwise it is discarded after
// max_iters rounds. Each retry feeds the previous checker reason back to
// the writer as an additional user message. Gateway errors propagate with
// the dialogue id attached.
SpoofEdit run_edit_loop(const Dialogue& dialogue, GatewayClient& gateway,
                        const CurationModels& models,
                        std::uint32_t max_iters = 3);

// Free-text analysis of how the modified span changes the content. The
// span must occur in the content (SpanNotFound otherwise); an empty reply
// is re-asked up to twice, then StructuredOutputFailure.
std::string annotate_semantic_influence(const std::string& manipulated_content,
                                        const std::string& modified_span,
                                        SpanGranularity granularity,
                                        GatewayClient& gateway,
                                        const CurationModels& models);

// Three independent judge queries over the rendered judge prompt. Each
// reply must be a lone integer 1-5 after whitespace stripping; a
// non-conforming reply gets one corrective re-ask, then the failure is
// recorded in the verdict. Throws EmptyInput when any of the three texts
// is empty.
JudgeVerdict judge_semantic_analysis(const std::string& original_text,
                                     const std::string& span_change,
                                     const std::string& model_analysis,
                                     GatewayClient& gateway,
                                     const CurationModels& models);

// --- in-context example assembly -------------------------------------------

struct IclExample {
  std::string audio_ref;
  AnalysisRecord record;
};

enum class PlanItemKind {
  example_audio,
  example_annotation,
  target_audio,
  instruction,
};

struct PlanItem {
  PlanItemKind kind;
  std::string payload;
};

// Interleaves each example's audio reference with its serialized
// annotation, then the target audio reference and the task instruction.
// Duplicate audio refs are allowed and kept in order. Throws
// InvalidExampleRecord on an empty example list or an inconsistent record.
std::vector<PlanItem> assemble_icl_context(
    const std::vector<IclExample>& examples,
    const std::string& target_audio_ref);

// --- edits JSONL ------------------------------------------------------------

std::string spoof_edit_to_json(const SpoofEdit& edit);
SpoofEdit spoof_edit_from_json(const std::string& line);
void write_edits(const std::string& path, const std::vector<SpoofEdit>& edits);
std::vector<SpoofEdit> read_edits(const std::string& path);

}  // namespace holispoof
