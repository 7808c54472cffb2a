#pragma once

#include <string>
#include <vector>

namespace holispoof {

struct Utterance {
  size_t index = 0;
  std::string speaker_id;
  std::string text;
  std::string audio_path;
  double duration_s = 0.0;
};

// A multi-turn transcript with per-utterance audio. Utterance indices are
// contiguous from 0.
struct Dialogue {
  std::string dialogue_id;
  std::vector<Utterance> utterances;
};

// Loads one dialogue directory laid out as
//   <dir>/<idx>_<speaker>_d<dialogue_id>.wav  plus a .txt transcript twin.
// The dialogue id is the directory basename; durations come from the WAV
// headers. Throws ConfigError on layout problems (missing transcript,
// non-contiguous indices, no utterances) and the WAV errors on bad audio.
Dialogue load_dialogue(const std::string& dir);

// Loads every immediate subdirectory of root as a dialogue, sorted by
// dialogue id (numeric ids sort numerically, others lexically). Throws
// ConfigError when root is not a directory or holds no dialogues.
std::vector<Dialogue> load_dialogue_dir(const std::string& root);

// "[0] first line\n[1] second line\n..." - the indexed rendering the
// prompts embed.
std::string render_dialogue_lines(const Dialogue& dialogue);

// Same rendering with utterance `idx` replaced by `replacement_text`.
std::string render_dialogue_lines_with_replacement(
    const Dialogue& dialogue, size_t idx, const std::string& replacement_text);

}  // namespace holispoof
