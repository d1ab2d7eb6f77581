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

#include "fsmt/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <stdexcept>

#include "fsmt/error.hpp"

namespace fsmt {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kMalformedRecord: return "MalformedRecord";
    case ErrorKind::kUnbalancedMarkup: return "UnbalancedMarkup";
    case ErrorKind::kEmptyField: return "EmptyField";
    case ErrorKind::kDuplicateId: return "DuplicateId";
    case ErrorKind::kEmptyCorpus: return "EmptyCorpus";
    case ErrorKind::kInvalidUnit: return "InvalidUnit";
    case ErrorKind::kLeadingOrTrailingSeparator: return "LeadingOrTrailingSeparator";
    case ErrorKind::kAdjacentSeparators: return "AdjacentSeparators";
    case ErrorKind::kModelFormat: return "ModelFormat";
    case ErrorKind::kSchema: return "SchemaError";
    case ErrorKind::kDuplicateRule: return "DuplicateRule";
    case ErrorKind::kEmptySide: return "EmptySide";
    case ErrorKind::kNTooLarge: return "NTooLarge";
    case ErrorKind::kMissingPlaceholder: return "MissingPlaceholder";
    case ErrorKind::kPoolFormalityMismatch: return "PoolFormalityMismatch";
    case ErrorKind::kAttemptOutOfRange: return "AttemptOutOfRange";
    case ErrorKind::kExhaustedRetries: return "ExhaustedRetries";
    case ErrorKind::kNonRetryableStatus: return "NonRetryableStatus";
    case ErrorKind::kMalformedResponse: return "MalformedResponse";
    case ErrorKind::kEmptyCandidate: return "EmptyCandidate";
    case ErrorKind::kInvalidRequest: return "InvalidRequest";
    case ErrorKind::kAbortThreshold: return "AbortThreshold";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kNoAnnotatedSegments: return "NoAnnotatedSegments";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kDuplicateRowKey: return "DuplicateRowKey";
    case ErrorKind::kUnmatchedCometRow: return "UnmatchedCometRow";
    case ErrorKind::kUsage: return "UsageError";
  }
  return "Unknown";
}

namespace unicode {
namespace {

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  return *n;
}

}  // namespace

std::string nfc(std::string_view text) {
  const auto& norm = nfc_instance();
  auto src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  UErrorCode status = U_ZERO_ERROR;
  if (norm.isNormalized(src, status) && U_SUCCESS(status)) {
    std::string back;
    src.toUTF8String(back);
    return back;
  }
  status = U_ZERO_ERROR;
  icu::UnicodeString out = norm.normalize(src, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  std::string result;
  out.toUTF8String(result);
  return result;
}

bool is_nfc(std::string_view text) { return nfc(text) == text; }

char32_t decode_at(std::string_view text, std::size_t& pos) {
  UChar32 c = 0;
  int32_t i = static_cast<int32_t>(pos);
  U8_NEXT(reinterpret_cast<const uint8_t*>(text.data()), i,
          static_cast<int32_t>(text.size()), c);
  pos = static_cast<std::size_t>(i);
  return c < 0 ? U'�' : static_cast<char32_t>(c);
}

void append_utf8(std::string& out, char32_t cp) {
  uint8_t buf[4];
  int32_t len = 0;
  UBool err = false;
  U8_APPEND(buf, len, 4, static_cast<UChar32>(cp), err);
  if (err) {
    append_utf8(out, U'�');
    return;
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

std::vector<std::string> split_scalars(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t start = pos;
    decode_at(text, pos);
    out.emplace_back(text.substr(start, pos - start));
  }
  return out;
}

bool is_punctuation(char32_t cp) { return u_ispunct(static_cast<UChar32>(cp)); }

bool is_whitespace(char32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp));
}

std::string_view strip_trailing_punct_space(std::string_view text) {
  int32_t end = static_cast<int32_t>(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  while (end > 0) {
    int32_t i = end;
    UChar32 c = 0;
    U8_PREV(s, 0, i, c);
    if (c < 0 || !(is_punctuation(static_cast<char32_t>(c)) ||
                   is_whitespace(static_cast<char32_t>(c)))) {
      break;
    }
    end = i;
  }
  return text.substr(0, static_cast<std::size_t>(end));
}

std::string_view trim(std::string_view text) {
  std::size_t begin = 0;
  while (begin < text.size()) {
    std::size_t next = begin;
    if (!is_whitespace(decode_at(text, next))) break;
    begin = next;
  }
  text.remove_prefix(begin);
  int32_t end = static_cast<int32_t>(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  while (end > 0) {
    int32_t i = end;
    UChar32 c = 0;
    U8_PREV(s, 0, i, c);
    if (c < 0 || !is_whitespace(static_cast<char32_t>(c))) break;
    end = i;
  }
  return text.substr(0, static_cast<std::size_t>(end));
}

}  // namespace unicode
}  // namespace fsmt
