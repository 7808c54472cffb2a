#include "holispoof/base64.hpp"

#include <array>

#include "holispoof/errors.hpp"

namespace holispoof {

namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::array<std::int8_t, 256> decode_table() {
  std::array<std::int8_t, 256> table{};
  table.fill(-1);
  for (int i = 0; i < 64; ++i)
    table[static_cast<unsigned char>(kAlphabet[i])] = static_cast<std::int8_t>(i);
  return table;
}

}  // namespace

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t n =
        (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out.push_back(kAlphabet[(n >> 18) & 63]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out.push_back(kAlphabet[(n >> 6) & 63]);
    out.push_back(kAlphabet[n & 63]);
  }
  const size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t n = bytes[i] << 16;
    out.push_back(kAlphabet[(n >> 18) & 63]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out.append("==");
  } else if (rest == 2) {
    const std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out.push_back(kAlphabet[(n >> 18) & 63]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out.push_back(kAlphabet[(n >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  static const std::array<std::int8_t, 256> table = decode_table();
  if (text.size() % 4 != 0)
    raise(ErrorCode::MalformedResponse,
          "base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (size_t i = 0; i < text.size(); i += 4) {
    int values[4];
    int pads = 0;
    for (int j = 0; j < 4; ++j) {
      const char c = text[i + j];
      if (c == '=') {
        if (i + 4 != text.size() || j < 2)
          raise(ErrorCode::MalformedResponse, "misplaced base64 padding");
        values[j] = 0;
        ++pads;
      } else {
        if (pads > 0)
          raise(ErrorCode::MalformedResponse, "data after base64 padding");
        const std::int8_t v = table[static_cast<unsigned char>(c)];
        if (v < 0)
          raise(ErrorCode::MalformedResponse,
                "character outside the base64 alphabet");
        values[j] = v;
      }
    }
    const std::uint32_t n = (values[0] << 18) | (values[1] << 12) |
                            (values[2] << 6) | values[3];
    out.push_back(static_cast<std::uint8_t>((n >> 16) & 0xff));
    if (pads < 2) out.push_back(static_cast<std::uint8_t>((n >> 8) & 0xff));
    if (pads < 1) out.push_back(static_cast<std::uint8_t>(n & 0xff));
  }
  return out;
}

}  // namespace holispoof
