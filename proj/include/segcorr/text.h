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


// segcorr/text.h

#ifndef SEGCORR_TEXT_H_
#define SEGCORR_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace segcorr {

/// Splits a UTF-8 string into its characters, each returned as the byte
/// sequence of one code point. Invalid bytes come back as single-byte pieces.
std::vector<std::string> Utf8Chars(std::string_view text);

/// Lowercases ASCII, Latin-1, Latin Extended-A, Greek and Cyrillic letters.
/// Everything else passes through unchanged.
std::string Utf8Lower(std::string_view text);

/// Splits on ASCII whitespace; empty pieces are dropped.
std::vector<std::string> SplitWhitespace(std::string_view text);

std::string Join(const std::vector<std::string> &pieces, std::string_view sep);

/// Counts letters and digits. Non-ASCII code points count as letters unless
/// they are Latin-1 symbols or fall in the General Punctuation block.
size_t CountAlnumChars(std::string_view text);

}  // namespace segcorr

#endif  // SEGCORR_TEXT_H_
