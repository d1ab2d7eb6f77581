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

#include "fsmt/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "fsmt/error.hpp"
#include "fsmt/unicode.hpp"

namespace fsmt {

LangPair parse_lang_pair(std::string_view text) {
  for (LangPair p : kAllLangPairs) {
    if (text == lang_pair_code(p) || text == lang_pair_label(p)) return p;
  }
  throw Error(ErrorKind::kInvalidConfig,
              "unknown language pair '" + std::string(text) +
                  "' (expected en-ko, en-vi, en-pt or en-ru)");
}

std::string_view lang_pair_code(LangPair pair) {
  switch (pair) {
    case LangPair::kEnKo: return "en-ko";
    case LangPair::kEnVi: return "en-vi";
    case LangPair::kEnPt: return "en-pt";
    case LangPair::kEnRu: return "en-ru";
  }
  return "";
}

std::string_view lang_pair_label(LangPair pair) {
  switch (pair) {
    case LangPair::kEnKo: return "EN-KO";
    case LangPair::kEnVi: return "EN-VI";
    case LangPair::kEnPt: return "EN-PT";
    case LangPair::kEnRu: return "EN-RU";
  }
  return "";
}

std::string_view target_lang_code(LangPair pair) {
  return lang_pair_code(pair).substr(3);
}

std::string_view target_lang_name(LangPair pair) {
  switch (pair) {
    case LangPair::kEnKo: return "Korean";
    case LangPair::kEnVi: return "Vietnamese";
    case LangPair::kEnPt: return "Portuguese";
    case LangPair::kEnRu: return "Russian";
  }
  return "";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "test") return Split::kTest;
  throw Error(ErrorKind::kInvalidConfig,
              "unknown split '" + std::string(text) + "'");
}

AnnotatedReference strip_markup(std::string_view raw) {
  AnnotatedReference ref;
  ref.raw = std::string(raw);
  ref.plain.reserve(raw.size());
  bool inside = false;
  std::size_t open_at = 0;
  std::size_t i = 0;
  while (i < raw.size()) {
    std::string_view rest = raw.substr(i);
    if (rest.starts_with(kOpenMarker)) {
      if (inside) {
        throw Error(ErrorKind::kUnbalancedMarkup,
                    "nested [F] at byte " + std::to_string(i));
      }
      inside = true;
      open_at = ref.plain.size();
      i += kOpenMarker.size();
    } else if (rest.starts_with(kCloseMarker)) {
      if (!inside) {
        throw Error(ErrorKind::kUnbalancedMarkup,
                    "[/F] without opening [F] at byte " + std::to_string(i));
      }
      if (ref.plain.size() == open_at) {
        throw Error(ErrorKind::kUnbalancedMarkup,
                    "empty [F][/F] annotation at byte " + std::to_string(i));
      }
      inside = false;
      ref.spans.push_back({open_at, ref.plain.size()});
      ref.phrases.push_back(ref.plain.substr(open_at));
      i += kCloseMarker.size();
    } else {
      ref.plain.push_back(raw[i]);
      ++i;
    }
  }
  if (inside) {
    throw Error(ErrorKind::kUnbalancedMarkup, "[F] is never closed");
  }
  return ref;
}

std::string insert_markup(std::string_view plain,
                          const std::vector<Span>& spans) {
  std::string out;
  out.reserve(plain.size() + spans.size() * 7);
  std::size_t pos = 0;
  for (const Span& s : spans) {
    out.append(plain.substr(pos, s.start - pos));
    out.append(kOpenMarker);
    out.append(plain.substr(s.start, s.end - s.start));
    out.append(kCloseMarker);
    pos = s.end;
  }
  out.append(plain.substr(pos));
  return out;
}

Segment parse_annotated_line(std::string_view line, LangPair lang_pair) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (fields.size() != 4) {
    throw Error(ErrorKind::kMalformedRecord,
                "expected 4 tab-separated fields, got " +
                    std::to_string(fields.size()));
  }
  if (line.find('\r') != std::string_view::npos) {
    throw Error(ErrorKind::kMalformedRecord,
                "carriage return in record (LF line endings required)");
  }
  static constexpr const char* kNames[] = {"id", "source", "formal target",
                                           "informal target"};
  for (std::size_t f = 0; f < 4; ++f) {
    if (unicode::trim(fields[f]).empty()) {
      throw Error(ErrorKind::kEmptyField,
                  std::string("empty ") + kNames[f] + " field");
    }
  }

  Segment seg;
  seg.id = std::string(fields[0]);
  seg.lang_pair = lang_pair;
  seg.source = unicode::nfc(fields[1]);
  seg.formal_ref = strip_markup(unicode::nfc(fields[2]));
  seg.informal_ref = strip_markup(unicode::nfc(fields[3]));
  if (seg.formal_ref.plain.empty() || seg.informal_ref.plain.empty()) {
    throw Error(ErrorKind::kEmptyField, "target is empty once markup is removed");
  }
  return seg;
}

namespace {

// Splits on LF; a trailing LF does not produce an empty last line.
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    fn(line, number);
  }
}

std::string located(std::string_view origin, std::size_t line,
                    const std::string& what) {
  return std::string(origin) + ":" + std::to_string(line) + ": " + what;
}

}  // namespace

Corpus read_corpus(std::istream& in, LangPair lang_pair, Split split,
                   std::string_view origin) {
  Corpus corpus;
  corpus.lang_pair = lang_pair;
  corpus.split = split;
  std::unordered_map<std::string, std::size_t> seen;
  for_each_line(in, [&](const std::string& line, std::size_t number) {
    Segment seg;
    try {
      seg = parse_annotated_line(line, lang_pair);
    } catch (const Error& e) {
      throw Error(e.kind(), located(origin, number, e.what()));
    }
    auto [it, inserted] = seen.emplace(seg.id, number);
    if (!inserted) {
      throw Error(ErrorKind::kDuplicateId,
                  located(origin, number,
                          "duplicate id \"" + seg.id + "\" (first seen on line " +
                              std::to_string(it->second) + ")"));
    }
    corpus.segments.push_back(std::move(seg));
  });
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, LangPair lang_pair,
                   Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open corpus file " + path.string());
  }
  return read_corpus(in, lang_pair, split, path.string());
}

SourcePool read_source_pool(std::istream& in, LangPair lang_pair,
                            std::string_view origin) {
  SourcePool pool;
  pool.lang_pair = lang_pair;
  for_each_line(in, [&](const std::string& line, std::size_t number) {
    std::string_view text = unicode::trim(line);
    if (text.empty()) {
      throw Error(ErrorKind::kEmptyField,
                  located(origin, number, "blank source sentence"));
    }
    pool.sources.push_back(unicode::nfc(text));
  });
  return pool;
}

SourcePool load_source_pool(const std::filesystem::path& path,
                            LangPair lang_pair) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open source pool " + path.string());
  }
  return read_source_pool(in, lang_pair, path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<std::string> lines;
  for_each_line(in, [&](const std::string& line, std::size_t) {
    lines.push_back(line);
  });
  return lines;
}

}  // namespace fsmt
