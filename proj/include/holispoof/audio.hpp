#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holispoof/annotation.hpp"
#include "holispoof/dialogue.hpp"

namespace holispoof {

// Mono 16-bit PCM audio.
struct Waveform {
  std::uint32_t sample_rate_hz = 0;
  std::vector<std::int16_t> samples;

  double duration_s() const {
    return sample_rate_hz == 0
               ? 0.0
               : static_cast<double>(samples.size()) / sample_rate_hz;
  }

  bool operator==(const Waveform&) const = default;
};

// RIFF/WAVE codec, PCM format code 1, 16-bit, mono only. decode walks the
// chunk list (respecting odd-size padding) and validates declared sizes
// against the buffer; encode emits the canonical 44-byte-header layout.
// Errors: BadMagic (not RIFF/WAVE), TruncatedFile (declared bytes missing),
// UnsupportedFormat (format code, bit depth, or channel count).
Waveform decode_wav(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_wav(const Waveform& wave);

// File wrappers. read_wav raises TruncatedFile when the file cannot be
// opened or read.
Waveform read_wav(const std::string& path);
void write_wav(const std::string& path, const Waveform& wave);

// Which utterance's audio to hand the voice-cloning service as the speech
// prompt for re-synthesizing utterance target_idx: the target itself when
// its duration strictly exceeds 2 seconds, otherwise the longest other
// utterance by the same speaker (ties to the lowest index). When the
// speaker has no other utterance the target is returned with
// forced_fallback set. Throws IndexOutOfRange.
struct PromptSelection {
  size_t utterance_idx = 0;
  bool forced_fallback = false;
};
PromptSelection select_prompt_utterance(const Dialogue& dialogue,
                                        size_t target_idx);

struct SpliceResult {
  Waveform waveform;
  std::vector<TimeInterval> spoofed_regions;
  size_t replaced_utterance_idx = 0;
};

// Concatenates the per-utterance waveforms in order with new_wave
// substituted at target_idx. The spoofed region is the inserted span in
// output seconds, boundaries computed from exact sample counts. All
// waveforms must share one sample rate. Throws RateMismatch,
// IndexOutOfRange, EmptyInput.
SpliceResult splice_replace(const std::vector<Waveform>& dialogue_audio,
                            size_t target_idx, const Waveform& new_wave);

}  // namespace holispoof
