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

#ifndef FSMT_CORPUS_HPP_
#define FSMT_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace fsmt {

enum class LangPair { kEnKo, kEnVi, kEnPt, kEnRu };

inline constexpr LangPair kAllLangPairs[] = {LangPair::kEnKo, LangPair::kEnVi,
                                             LangPair::kEnPt, LangPair::kEnRu};

// Accepts "en-ko" and "EN-KO" spellings. Throws Error(kInvalidConfig).
LangPair parse_lang_pair(std::string_view text);
// "en-ko"
std::string_view lang_pair_code(LangPair pair);
// "EN-KO"
std::string_view lang_pair_label(LangPair pair);
// "ko"
std::string_view target_lang_code(LangPair pair);
// "Korean"
std::string_view target_lang_name(LangPair pair);

enum class Split { kTrain, kTest };

Split parse_split(std::string_view text);

struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

// Target text with its formality-marking phrases. Offsets are bytes into
// `plain`; spans are sorted, disjoint and non-empty.
struct AnnotatedReference {
  std::string raw;
  std::string plain;
  std::vector<std::string> phrases;
  std::vector<Span> spans;

  bool has_annotations() const { return !phrases.empty(); }

  friend bool operator==(const AnnotatedReference&,
                         const AnnotatedReference&) = default;
};

inline constexpr std::string_view kOpenMarker = "[F]";
inline constexpr std::string_view kCloseMarker = "[/F]";

// Removes [F]/[/F] markers. Throws Error(kUnbalancedMarkup) on a stray
// closer, nesting, an unclosed opener or an empty annotation.
AnnotatedReference strip_markup(std::string_view raw);

// Inverse of strip_markup: wraps every span of `plain` in markers.
std::string insert_markup(std::string_view plain, const std::vector<Span>& spans);

struct Segment {
  std::string id;
  LangPair lang_pair = LangPair::kEnKo;
  std::string source;
  AnnotatedReference formal_ref;
  AnnotatedReference informal_ref;

  friend bool operator==(const Segment&, const Segment&) = default;
};

// One TSV record: id, source, formal target, informal target. Fields are
// NFC-normalized before markup is stripped.
Segment parse_annotated_line(std::string_view line, LangPair lang_pair);

struct Corpus {
  LangPair lang_pair = LangPair::kEnKo;
  Split split = Split::kTest;
  std::vector<Segment> segments;

  std::size_t size() const { return segments.size(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// `origin` prefixes error messages ("<origin>:<line>: ...").
Corpus read_corpus(std::istream& in, LangPair lang_pair, Split split,
                   std::string_view origin = "<stream>");
Corpus load_corpus(const std::filesystem::path& path, LangPair lang_pair,
                   Split split);

struct SourcePool {
  LangPair lang_pair = LangPair::kEnKo;
  std::vector<std::string> sources;

  friend bool operator==(const SourcePool&, const SourcePool&) = default;
};

// One English sentence per line; entries are trimmed and NFC-normalized.
// A blank line is an error.
SourcePool read_source_pool(std::istream& in, LangPair lang_pair,
                            std::string_view origin = "<stream>");
SourcePool load_source_pool(const std::filesystem::path& path,
                            LangPair lang_pair);

// Reads a whole file; throws Error(kIo) naming the path.
std::string read_file(const std::filesystem::path& path);
// Reads LF-separated lines. A final LF does not start an extra line.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace fsmt

#endif  // FSMT_CORPUS_HPP_
