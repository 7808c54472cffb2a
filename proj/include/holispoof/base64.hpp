#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace holispoof {

// RFC 4648 base64 with padding.
std::string base64_encode(const std::vector<std::uint8_t>& bytes);

// Throws MalformedResponse on characters outside the alphabet or bad
// padding.
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace holispoof
