// Copyright 2026 The chartail Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHARTAIL_DETAIL_UTF8_HPP_
#define CHARTAIL_DETAIL_UTF8_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "chartail/error.hpp"

namespace chartail {
namespace detail {

// Decodes one scalar starting at `pos`. Returns the number of bytes
// consumed, or 0 on malformed input (truncated, overlong, surrogate,
// out of range).
inline std::size_t decode_one_utf8(std::string_view s, std::size_t pos,
                                   char32_t* out) {
  const auto byte = [&](std::size_t i) -> std::uint32_t {
    return static_cast<std::uint8_t>(s[i]);
  };
  const std::uint32_t b0 = byte(pos);
  if (b0 < 0x80) {
    *out = static_cast<char32_t>(b0);
    return 1;
  }
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return 0;
  }
  if (pos + len > s.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    const std::uint32_t b = byte(pos + i);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr std::uint32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len]) return 0;                    // overlong
  if (cp >= 0xD800 && cp <= 0xDFFF) return 0;      // surrogate
  if (cp > 0x10FFFF) return 0;
  *out = static_cast<char32_t>(cp);
  return len;
}

}  // namespace detail

inline bool is_unicode_scalar(char32_t c) {
  const std::uint32_t cp = static_cast<std::uint32_t>(c);
  return cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
}

/// Decodes UTF-8 into one char32_t per Unicode scalar. Throws Error with
/// the byte offset of the first malformed sequence.
inline std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    char32_t c = 0;
    const std::size_t n = detail::decode_one_utf8(s, pos, &c);
    if (n == 0) fail("invalid UTF-8 at byte offset ", pos);
    out.push_back(c);
    pos += n;
  }
  return out;
}

inline void encode_utf8(char32_t c, std::string* out) {
  const std::uint32_t cp = static_cast<std::uint32_t>(c);
  if (!is_unicode_scalar(c)) {
    throw InternalError("encode_utf8: not a Unicode scalar");
  }
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode_utf8(char32_t c) {
  std::string out;
  encode_utf8(c, &out);
  return out;
}

inline std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) encode_utf8(c, &out);
  return out;
}

}  // namespace chartail

#endif  // CHARTAIL_DETAIL_UTF8_HPP_
