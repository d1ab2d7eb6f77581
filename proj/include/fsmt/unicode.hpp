// Copyright 2026 The FSMT Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FSMT_UNICODE_HPP_
#define FSMT_UNICODE_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace fsmt::unicode {

// NFC-normalizes UTF-8 text. Invalid sequences are replaced with U+FFFD.
std::string nfc(std::string_view text);

bool is_nfc(std::string_view text);

// Splits UTF-8 text into one string per Unicode scalar value.
std::vector<std::string> split_scalars(std::string_view text);

// Decodes the scalar starting at text[pos]; advances pos. Returns U+FFFD on
// malformed input (consuming one byte).
char32_t decode_at(std::string_view text, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

bool is_punctuation(char32_t cp);
bool is_whitespace(char32_t cp);

// Drops trailing punctuation and whitespace scalars.
std::string_view strip_trailing_punct_space(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace fsmt::unicode

#endif  // FSMT_UNICODE_HPP_
