#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "holispoof/dialogue.hpp"

namespace holispoof {

// Span size of the manipulated unit: word-level edits on plain text,
// sentence-level edits on dialogues.
enum class SpanGranularity { word, sentence };

// Raw template texts. Substitution sites are the bracketed markers in the
// text (e.g. "[Dialogue]"); everything else is fixed bytes, ending with a
// single trailing newline.
const std::string& writer_template();
const std::string& checker_template();
const std::string& judge_template();
const std::string& semantic_template();

// Replaces every occurrence of each marker with its value in one pass over
// the template; substituted values are never rescanned.
std::string substitute_markers(
    std::string_view template_text,
    const std::vector<std::pair<std::string_view, std::string_view>>& subs);

// Writer prompt over the indexed dialogue rendering ("[0] text" lines).
std::string render_writer_prompt(const Dialogue& dialogue);

// Checker prompt over the original and modified renderings; the modified
// utterance index is substituted bare (e.g. "3").
std::string render_checker_prompt(const Dialogue& dialogue,
                                  size_t modified_idx,
                                  const std::string& modified_text);

// Judge prompt. span_change is the whole "original -> new" line.
std::string render_judge_prompt(const std::string& original_text,
                                const std::string& span_change,
                                const std::string& model_analysis);

// Semantic-influence prompt over the manipulated content and the modified
// span.
std::string render_semantic_prompt(const std::string& manipulated_content,
                                   const std::string& modified_span,
                                   SpanGranularity granularity);

std::string to_string(SpanGranularity granularity);

}  // namespace holispoof
