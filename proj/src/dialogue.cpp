#include "holispoof/dialogue.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>

#include "holispoof/audio.hpp"
#include "holispoof/errors.hpp"

namespace fs = std::filesystem;

namespace holispoof {

namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

std::string read_transcript(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    raise(ErrorCode::ConfigError, "missing transcript " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  while (!text.empty() &&
         std::isspace(static_cast<unsigned char>(text.back())))
    text.pop_back();
  if (text.empty())
    raise(ErrorCode::ConfigError, "empty transcript " + path.string());
  return text;
}

}  // namespace

Dialogue load_dialogue(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root))
    raise(ErrorCode::ConfigError, dir + " is not a dialogue directory");

  Dialogue dialogue;
  dialogue.dialogue_id = root.filename().string();

  for (const fs::directory_entry& entry : fs::directory_iterator(root)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".wav")
      continue;
    const std::string stem = entry.path().stem().string();

    // <idx>_<speaker>_d<dialogue_id>
    const size_t first = stem.find('_');
    const size_t second =
        first == std::string::npos ? std::string::npos
                                   : stem.find('_', first + 1);
    if (second == std::string::npos)
      raise(ErrorCode::ConfigError,
            "utterance file name " + stem + " is not <idx>_<speaker>_d<id>");
    const std::string idx_part = stem.substr(0, first);
    const std::string speaker = stem.substr(first + 1, second - first - 1);
    const std::string tail = stem.substr(second + 1);
    if (!all_digits(idx_part) || speaker.empty() ||
        tail != "d" + dialogue.dialogue_id)
      raise(ErrorCode::ConfigError,
            "utterance file name " + stem + " does not match dialogue " +
                dialogue.dialogue_id);

    Utterance utterance;
    utterance.index = static_cast<size_t>(std::stoull(idx_part));
    utterance.speaker_id = speaker;
    utterance.audio_path = entry.path().string();
    utterance.text =
        read_transcript(fs::path(entry.path()).replace_extension(".txt"));
    utterance.duration_s = read_wav(utterance.audio_path).duration_s();
    dialogue.utterances.push_back(std::move(utterance));
  }

  if (dialogue.utterances.empty())
    raise(ErrorCode::ConfigError, dir + " holds no utterance WAV files");
  std::sort(dialogue.utterances.begin(), dialogue.utterances.end(),
            [](const Utterance& a, const Utterance& b) {
              return a.index < b.index;
            });
  for (size_t i = 0; i < dialogue.utterances.size(); ++i) {
    if (dialogue.utterances[i].index != i)
      raise(ErrorCode::ConfigError,
            "dialogue " + dialogue.dialogue_id +
                " utterance indices are not contiguous from 0");
  }
  return dialogue;
}

std::vector<Dialogue> load_dialogue_dir(const std::string& root) {
  if (!fs::is_directory(root))
    raise(ErrorCode::ConfigError, root + " is not a directory");
  std::vector<std::string> names;
  for (const fs::directory_entry& entry : fs::directory_iterator(root)) {
    if (entry.is_directory())
      names.push_back(entry.path().filename().string());
  }
  if (names.empty())
    raise(ErrorCode::ConfigError, root + " holds no dialogue directories");
  std::sort(names.begin(), names.end(),
            [](const std::string& a, const std::string& b) {
              if (all_digits(a) && all_digits(b)) {
                if (a.size() != b.size()) return a.size() < b.size();
              }
              return a < b;
            });
  std::vector<Dialogue> dialogues;
  dialogues.reserve(names.size());
  for (const std::string& name : names)
    dialogues.push_back(load_dialogue((fs::path(root) / name).string()));
  return dialogues;
}

std::string render_dialogue_lines(const Dialogue& dialogue) {
  std::string out;
  for (const Utterance& u : dialogue.utterances) {
    if (!out.empty()) out += '\n';
    out += '[' + std::to_string(u.index) + "] " + u.text;
  }
  return out;
}

std::string render_dialogue_lines_with_replacement(
    const Dialogue& dialogue, size_t idx,
    const std::string& replacement_text) {
  if (idx >= dialogue.utterances.size())
    raise(ErrorCode::IndexOutOfRange,
          "utterance " + std::to_string(idx) + " not in dialogue " +
              dialogue.dialogue_id);
  std::string out;
  for (const Utterance& u : dialogue.utterances) {
    if (!out.empty()) out += '\n';
    out += '[' + std::to_string(u.index) + "] " +
           (u.index == idx ? replacement_text : u.text);
  }
  return out;
}

}  // namespace holispoof
