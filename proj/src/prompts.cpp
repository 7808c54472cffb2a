#include "holispoof/prompts.hpp"

#include "holispoof/errors.hpp"

namespace holispoof {

const std::string& writer_template() {
  static const std::string text = R"PROMPT(You are simulating a malicious spoof attack on a dialogue. Your task is to:

1. Read the entire dialogue carefully, paying special attention to the context before and after each utterance.

2. Identify the utterance that, if maliciously modified, could cause the most harm, confusion, or negative consequences.

3. Modify the utterance in a way that is plausible but dangerous - the kind of modification that a spoof attack would make.

CAUTION:

1. The modified sentence MUST blend in naturally with the rest of the dialogue and not stand out due to unusual length. This is essential for a realistic spoof attack.

2. The modified utterance MUST maintain logical coherence with the surrounding dialogue. Even though you are changing critical information, the subsequent utterances in the dialogue should still make sense in context. Avoid creating obvious contradictions that would immediately reveal the manipulation.

The dialogue is given below. Each line is prefixed with an index in square brackets, which indicates the utterance index in the dialogue:

[Dialogue]

Now, follow these rules strictly:

- You MUST select exactly ONE utterance to modify that has the potential for maximum harm or negative impact.

- You MUST output a JSON object with the following format, and NOTHING else:

{
  "target_utterance_idx": <int index of the selected utterance>,
  "modified_text": <the maliciously modified utterance text>
}

Do not add any explanation or extra text outside this JSON.
)PROMPT";
  return text;
}

const std::string& checker_template() {
  static const std::string text = R"PROMPT(You are a dialogue coherence checker. Your task is to evaluate whether a modified utterance in a dialogue maintains logical coherence with the surrounding context.

A modification PASSES if:

1. The modified utterance fits naturally within the dialogue flow

2. Subsequent utterances in the dialogue still make logical sense after the modification

3. There are no obvious contradictions that would immediately reveal the modification as suspicious

A modification FAILS if:

1. Subsequent utterances contradict or become nonsensical after the modification

2. There are clear logical contradictions between the modified utterance and surrounding context

Note: The modification is INTENDED to be malicious (changing critical information). Your job is to check if it's done in a way that maintains surface-level coherence - a successful deepfake attack should be subtle enough that the dialogue still flows naturally.

ORIGINAL DIALOGUE:

[Original Dialogue]

MODIFIED DIALOGUE (utterance [Modified Utterance Index] has been modified):

[Modified Dialogue]

Evaluate whether the modification maintains logical coherence. Pay special attention to:

- Whether utterances after [Modified Utterance Index] still make sense in context

- Whether there are obvious contradictions that would immediately reveal the modification

- Whether the dialogue flow remains natural and coherent

You MUST output a JSON object with the following format, and NOTHING else:

{
  "passed": <true or false>,
  "reason": <brief explanation of why it passed or failed>
}

Do not add any explanation or extra text outside this JSON.
)PROMPT";
  return text;
}

const std::string& judge_template() {
  static const std::string text = R"PROMPT(## Role

You are a senior expert in audio spoofing detection and content safety assessment. Your job is to score the output quality of an "audio spoofing detection model".

## Task

Compare the [Original Content] and [Spoofed Content] to check if the [Model Analysis Result] accurately identified the tampering behavior and its impact.

## Original Content

[The entire speech transcription]

## Spoofed Content

[Original word/sentence] -> [New word/sentence]

## Model Analysis Result

[Model output]

## Scoring Rubric (1-5 Scale)

5 (Perfect):

Precise Localization: Accurately identifies the tampered position.

Deep Analysis: Logical and rigorous; accurately identifies the profound impact of tampering on semantic integrity, character personas, or conversational context.

Fluent Expression: Smooth phrasing with no grammatical errors.

4 (Excellent):

Precise Localization: Accurately identifies the tampered position.

General Analysis: Identifies the tampering facts, but the analysis of contextual impact lacks depth or contains minor logical flaws.

Fluent Expression: Smooth phrasing.

3 (Passing):

Precise Localization: Accurately identifies the tampered position.

Erroneous Analysis: Correct location identified, but the analysis of tampering intent or semantic changes is entirely wrong or contradicts the facts.

Fluent Expression: Smooth phrasing.

2 (Poor):

Incorrect Localization: Fails to identify the correct tampered position (significant deviation) or identifies the wrong segment.

Fluent Expression: Phrasing is smooth despite the incorrect content.

1 (Invalid):

Total Failure: Fails to identify tampering, or the output is irrelevant to the task (e.g., gibberish, completely off-topic).

## Output Rules

Judge strictly based on the scoring rubric.

Output the score directly; do not include any Markdown tags or other explanatory text.
)PROMPT";
  return text;
}

const std::string& semantic_template() {
  static const std::string text = R"PROMPT(You are analyzing how a spoofing attack on spoken content influences the conveyed information.

The manipulated content is given below:

[Manipulated Content]

The modified [Span Granularity] is:

[Modified Span]

Analyze the impact of the spoofing operation by considering the potential original [Span Granularity], and generate a concise textual analysis of how the modification affects the meaning, intent, or consequences of the content. Output the analysis text directly, with no extra formatting.
)PROMPT";
  return text;
}

std::string substitute_markers(
    std::string_view template_text,
    const std::vector<std::pair<std::string_view, std::string_view>>& subs) {
  std::string out;
  out.reserve(template_text.size());
  size_t pos = 0;
  while (pos < template_text.size()) {
    bool replaced = false;
    for (const auto& [marker, value] : subs) {
      if (template_text.compare(pos, marker.size(), marker) == 0) {
        out.append(value);
        pos += marker.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      out.push_back(template_text[pos]);
      ++pos;
    }
  }
  return out;
}

std::string render_writer_prompt(const Dialogue& dialogue) {
  const std::string lines = render_dialogue_lines(dialogue);
  return substitute_markers(writer_template(), {{"[Dialogue]", lines}});
}

std::string render_checker_prompt(const Dialogue& dialogue,
                                  size_t modified_idx,
                                  const std::string& modified_text) {
  if (modified_idx >= dialogue.utterances.size())
    raise(ErrorCode::IndexOutOfRange,
          "utterance " + std::to_string(modified_idx) + " not in dialogue " +
              dialogue.dialogue_id);
  const std::string original = render_dialogue_lines(dialogue);
  const std::string modified = render_dialogue_lines_with_replacement(
      dialogue, modified_idx, modified_text);
  const std::string idx = std::to_string(modified_idx);
  return substitute_markers(checker_template(),
                            {{"[Original Dialogue]", original},
                             {"[Modified Dialogue]", modified},
                             {"[Modified Utterance Index]", idx}});
}

std::string render_judge_prompt(const std::string& original_text,
                                const std::string& span_change,
                                const std::string& model_analysis) {
  return substitute_markers(
      judge_template(),
      {{"[The entire speech transcription]", original_text},
       {"[Original word/sentence] -> [New word/sentence]", span_change},
       {"[Model output]", model_analysis}});
}

std::string render_semantic_prompt(const std::string& manipulated_content,
                                   const std::string& modified_span,
                                   SpanGranularity granularity) {
  const std::string granularity_text = to_string(granularity);
  return substitute_markers(semantic_template(),
                            {{"[Manipulated Content]", manipulated_content},
                             {"[Modified Span]", modified_span},
                             {"[Span Granularity]", granularity_text}});
}

std::string to_string(SpanGranularity granularity) {
  return granularity == SpanGranularity::word ? "word(s)" : "sentence";
}

}  // namespace holispoof
