// Copyright 2026 The segcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.


// segcorr/text.cc

#include "segcorr/text.h"

#include <cstdint>

namespace segcorr {

namespace {

size_t Utf8Length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xe) return 3;
  if ((lead >> 3) == 0x1e) return 4;
  return 1;
}

// Decodes one code point at text[pos]; returns 0xFFFFFFFF on malformed input.
uint32_t Decode(std::string_view text, size_t pos, size_t *len) {
  unsigned char lead = static_cast<unsigned char>(text[pos]);
  size_t n = Utf8Length(lead);
  if (pos + n > text.size()) n = 1;
  *len = n;
  if (n == 1) return lead < 0x80 ? lead : 0xFFFFFFFFu;
  uint32_t cp = lead & (0xff >> (n + 1));
  for (size_t i = 1; i < n; ++i) {
    unsigned char c = static_cast<unsigned char>(text[pos + i]);
    if ((c >> 6) != 0x2) {
      *len = 1;
      return 0xFFFFFFFFu;
    }
    cp = (cp << 6) | (c & 0x3f);
  }
  return cp;
}

void Encode(uint32_t cp, std::string *out) {
  if (cp < 0x80) {
    out->push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out->push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out->push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out->push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out->push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out->push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

uint32_t LowerCodePoint(uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  // Latin-1 supplement, skipping the multiplication sign.
  if (cp >= 0xc0 && cp <= 0xde && cp != 0xd7) return cp + 32;
  // Latin Extended-A: mostly alternating upper/lower pairs.
  if (cp >= 0x100 && cp <= 0x137 && cp % 2 == 0) return cp + 1;
  if (cp >= 0x139 && cp <= 0x148 && cp % 2 == 1) return cp + 1;
  if (cp >= 0x14a && cp <= 0x177 && cp % 2 == 0) return cp + 1;
  if (cp == 0x178) return 0xff;
  if (cp >= 0x179 && cp <= 0x17e && cp % 2 == 1) return cp + 1;
  // Greek.
  if (cp >= 0x391 && cp <= 0x3ab && cp != 0x3a2) return cp + 32;
  // Cyrillic.
  if (cp >= 0x400 && cp <= 0x40f) return cp + 80;
  if (cp >= 0x410 && cp <= 0x42f) return cp + 32;
  return cp;
}

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::vector<std::string> Utf8Chars(std::string_view text) {
  std::vector<std::string> chars;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t len = 1;
    Decode(text, pos, &len);
    chars.emplace_back(text.substr(pos, len));
    pos += len;
  }
  return chars;
}

std::string Utf8Lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  while (pos < text.size()) {
    size_t len = 1;
    uint32_t cp = Decode(text, pos, &len);
    if (cp == 0xFFFFFFFFu)
      out.append(text.substr(pos, len));
    else
      Encode(LowerCodePoint(cp), &out);
    pos += len;
  }
  return out;
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> pieces;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > start) pieces.emplace_back(text.substr(start, i - start));
  }
  return pieces;
}

std::string Join(const std::vector<std::string> &pieces, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(pieces[i]);
  }
  return out;
}

size_t CountAlnumChars(std::string_view text) {
  size_t count = 0, pos = 0;
  while (pos < text.size()) {
    size_t len = 1;
    uint32_t cp = Decode(text, pos, &len);
    pos += len;
    if (cp < 0x80) {
      if ((cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
          (cp >= 'A' && cp <= 'Z'))
        ++count;
    } else if (cp != 0xFFFFFFFFu && !(cp >= 0x2000 && cp <= 0x206f) &&
               !(cp >= 0xa0 && cp <= 0xbf) && cp != 0xd7 && cp != 0xf7) {
      ++count;
    }
  }
  return count;
}

}  // namespace segcorr
