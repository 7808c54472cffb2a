#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "json.hpp"

namespace holispoof {

struct JsonScanResult {
  // First balanced object for which the predicate returned true.
  std::optional<nlohmann::json> object;
  // Whether any balanced, parseable JSON object was seen at all.
  bool saw_object = false;
};

// Scans raw text (model output, possibly with prose or code fences around it)
// for balanced {...} blocks, in order of their opening brace. Brace counting
// is string-aware, so braces inside quoted strings do not open blocks.
JsonScanResult find_json_object(
    std::string_view text,
    const std::function<bool(const nlohmann::json&)>& predicate);

}  // namespace holispoof
