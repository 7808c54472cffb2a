#include "holispoof/audio.hpp"

#include <cstring>
#include <fstream>

#include "holispoof/errors.hpp"

namespace holispoof {

namespace {

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

bool tag_is(const std::uint8_t* p, const char* tag) {
  return std::memcmp(p, tag, 4) == 0;
}

}  // namespace

Waveform decode_wav(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || !tag_is(bytes.data(), "RIFF"))
    raise(ErrorCode::BadMagic, "missing RIFF header");
  if (bytes.size() < 12)
    raise(ErrorCode::TruncatedFile, "RIFF header cut short");
  if (!tag_is(bytes.data() + 8, "WAVE"))
    raise(ErrorCode::BadMagic, "RIFF form type is not WAVE");
  const std::uint32_t declared = read_u32(bytes.data() + 4);
  if (static_cast<size_t>(declared) + 8 > bytes.size())
    raise(ErrorCode::TruncatedFile,
          "RIFF declares " + std::to_string(declared) +
              " bytes but the file holds fewer");

  bool have_fmt = false;
  std::uint32_t sample_rate = 0;
  const std::uint8_t* data_ptr = nullptr;
  std::uint32_t data_size = 0;

  size_t offset = 12;
  while (offset < bytes.size()) {
    if (offset + 8 > bytes.size())
      raise(ErrorCode::TruncatedFile, "chunk header cut short");
    const std::uint8_t* header = bytes.data() + offset;
    const std::uint32_t chunk_size = read_u32(header + 4);
    const size_t body = offset + 8;
    if (body + chunk_size > bytes.size())
      raise(ErrorCode::TruncatedFile,
            "chunk '" + std::string(header, header + 4) + "' declares " +
                std::to_string(chunk_size) + " bytes past end of file");

    if (tag_is(header, "fmt ")) {
      if (chunk_size < 16)
        raise(ErrorCode::TruncatedFile, "fmt chunk shorter than 16 bytes");
      const std::uint16_t format = read_u16(bytes.data() + body);
      const std::uint16_t channels = read_u16(bytes.data() + body + 2);
      sample_rate = read_u32(bytes.data() + body + 4);
      const std::uint16_t bits = read_u16(bytes.data() + body + 14);
      if (format != 1)
        raise(ErrorCode::UnsupportedFormat,
              "PCM format code 1 required, got " + std::to_string(format));
      if (channels != 1)
        raise(ErrorCode::UnsupportedFormat,
              "mono required, got " + std::to_string(channels) + " channels");
      if (bits != 16)
        raise(ErrorCode::UnsupportedFormat,
              "16-bit samples required, got " + std::to_string(bits));
      if (sample_rate == 0)
        raise(ErrorCode::UnsupportedFormat, "sample rate is zero");
      have_fmt = true;
    } else if (tag_is(header, "data")) {
      data_ptr = bytes.data() + body;
      data_size = chunk_size;
    }
    offset = body + chunk_size + (chunk_size & 1);
  }

  if (!have_fmt)
    raise(ErrorCode::UnsupportedFormat, "stream has no fmt chunk");
  if (data_ptr == nullptr)
    raise(ErrorCode::UnsupportedFormat, "stream has no data chunk");
  if (data_size % 2 != 0)
    raise(ErrorCode::TruncatedFile, "data chunk ends mid-sample");

  Waveform wave;
  wave.sample_rate_hz = sample_rate;
  wave.samples.resize(data_size / 2);
  for (size_t i = 0; i < wave.samples.size(); ++i)
    wave.samples[i] =
        static_cast<std::int16_t>(read_u16(data_ptr + 2 * i));
  return wave;
}

std::vector<std::uint8_t> encode_wav(const Waveform& wave) {
  if (wave.sample_rate_hz == 0)
    raise(ErrorCode::UnsupportedFormat, "sample rate is zero");
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(wave.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_size);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, wave.sample_rate_hz);
  put_u32(out, wave.sample_rate_hz * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_size);
  for (const std::int16_t sample : wave.samples)
    put_u16(out, static_cast<std::uint16_t>(sample));
  return out;
}

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::TruncatedFile, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_wav(bytes);
  } catch (const Error& e) {
    raise(e.code(), path + ": " + e.what());
  }
}

void write_wav(const std::string& path, const Waveform& wave) {
  const std::vector<std::uint8_t> bytes = encode_wav(wave);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::TruncatedFile, "cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) raise(ErrorCode::TruncatedFile, "short write to " + path);
}

PromptSelection select_prompt_utterance(const Dialogue& dialogue,
                                        size_t target_idx) {
  if (target_idx >= dialogue.utterances.size())
    raise(ErrorCode::IndexOutOfRange,
          "utterance " + std::to_string(target_idx) + " not in dialogue " +
              dialogue.dialogue_id);
  const Utterance& target = dialogue.utterances[target_idx];
  if (target.duration_s > 2.0) return {target_idx, false};

  // Longest other utterance from the same speaker, ties to the lowest
  // index.
  size_t best = target_idx;
  double best_duration = -1.0;
  for (size_t i = 0; i < dialogue.utterances.size(); ++i) {
    if (i == target_idx) continue;
    const Utterance& u = dialogue.utterances[i];
    if (u.speaker_id != target.speaker_id) continue;
    if (u.duration_s > best_duration) {
      best = i;
      best_duration = u.duration_s;
    }
  }
  if (best == target_idx) return {target_idx, true};
  return {best, false};
}

SpliceResult splice_replace(const std::vector<Waveform>& dialogue_audio,
                            size_t target_idx, const Waveform& new_wave) {
  if (dialogue_audio.empty())
    raise(ErrorCode::EmptyInput, "no utterance audio to splice");
  if (target_idx >= dialogue_audio.size())
    raise(ErrorCode::IndexOutOfRange,
          "utterance " + std::to_string(target_idx) + " not in dialogue of " +
              std::to_string(dialogue_audio.size()));
  if (new_wave.samples.empty())
    raise(ErrorCode::EmptyInput, "replacement waveform has no samples");
  const std::uint32_t rate = dialogue_audio.front().sample_rate_hz;
  for (const Waveform& w : dialogue_audio) {
    if (w.sample_rate_hz != rate)
      raise(ErrorCode::RateMismatch, "utterance sample rates disagree");
  }
  if (new_wave.sample_rate_hz != rate)
    raise(ErrorCode::RateMismatch,
          "replacement is " + std::to_string(new_wave.sample_rate_hz) +
              " Hz but the dialogue is " + std::to_string(rate) + " Hz");

  SpliceResult result;
  result.replaced_utterance_idx = target_idx;
  result.waveform.sample_rate_hz = rate;

  size_t start_sample = 0;
  for (size_t i = 0; i < target_idx; ++i)
    start_sample += dialogue_audio[i].samples.size();
  const size_t end_sample = start_sample + new_wave.samples.size();

  for (size_t i = 0; i < dialogue_audio.size(); ++i) {
    const Waveform& piece = i == target_idx ? new_wave : dialogue_audio[i];
    result.waveform.samples.insert(result.waveform.samples.end(),
                                   piece.samples.begin(), piece.samples.end());
  }
  result.spoofed_regions.push_back(
      {static_cast<double>(start_sample) / rate,
       static_cast<double>(end_sample) / rate});
  return result;
}

}  // namespace holispoof
