#include "holispoof/json_scan.hpp"

namespace holispoof {

namespace {

// Returns one past the closing brace of the balanced block opening at `begin`,
// or npos if the block never closes.
size_t balanced_end(std::string_view text, size_t begin) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (size_t i = begin; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      --depth;
      if (depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

}  // namespace

JsonScanResult find_json_object(
    std::string_view text,
    const std::function<bool(const nlohmann::json&)>& predicate) {
  JsonScanResult result;
  for (size_t i = text.find('{'); i != std::string_view::npos;
       i = text.find('{', i + 1)) {
    const size_t end = balanced_end(text, i);
    if (end == std::string_view::npos) continue;
    nlohmann::json parsed = nlohmann::json::parse(
        text.substr(i, end - i), /*cb=*/nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded() || !parsed.is_object()) continue;
    result.saw_object = true;
    if (predicate(parsed)) {
      result.object = std::move(parsed);
      return result;
    }
  }
  return result;
}

}  // namespace holispoof
