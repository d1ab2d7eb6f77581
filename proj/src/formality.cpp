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

#include "fsmt/formality.hpp"

#include <limits>
#include <optional>
#include <set>
#include <tuple>

#include <json.hpp>

#include "fsmt/corpus.hpp"
#include "fsmt/error.hpp"
#include "fsmt/unicode.hpp"

namespace fsmt {

Formality parse_formality(std::string_view text) {
  if (text == "formal") return Formality::kFormal;
  if (text == "informal") return Formality::kInformal;
  throw Error(ErrorKind::kInvalidConfig,
              "unknown formality '" + std::string(text) +
                  "' (expected formal or informal)");
}

FormalityLabel parse_formality_label(std::string_view text) {
  if (text == "neutral") return FormalityLabel::kNeutral;
  return to_label(parse_formality(text));
}

std::string_view formality_name(Formality f) {
  return f == Formality::kFormal ? "formal" : "informal";
}

std::string_view formality_label_name(FormalityLabel label) {
  switch (label) {
    case FormalityLabel::kFormal: return "formal";
    case FormalityLabel::kInformal: return "informal";
    case FormalityLabel::kNeutral: return "neutral";
  }
  return "";
}

Lexicon::Lexicon(std::string lang, std::vector<MarkerRule> rules)
    : lang_(std::move(lang)), rules_(std::move(rules)) {
  std::set<std::tuple<Formality, MatchKind, std::string>> seen;
  bool has_formal = false;
  bool has_informal = false;
  for (auto& rule : rules_) {
    if (rule.pattern.empty()) {
      throw Error(ErrorKind::kSchema, "marker pattern must be non-empty");
    }
    rule.pattern = unicode::nfc(rule.pattern);
    if (!seen.emplace(rule.label, rule.kind, rule.pattern).second) {
      throw Error(ErrorKind::kDuplicateRule,
                  "duplicate rule " + std::string(formality_name(rule.label)) +
                      "/" + (rule.kind == MatchKind::kSuffix ? "suffix" : "substring") +
                      "/\"" + rule.pattern + "\"");
    }
    (rule.label == Formality::kFormal ? has_formal : has_informal) = true;
  }
  if (!has_formal || !has_informal) {
    throw Error(ErrorKind::kEmptySide,
                std::string("lexicon has no ") +
                    (has_formal ? "informal" : "formal") + " rules");
  }
}

Lexicon parse_lexicon(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kSchema, std::string("lexicon is not JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw Error(ErrorKind::kSchema, "lexicon must be a JSON array");
  }
  std::optional<std::string> lang;
  std::vector<MarkerRule> rules;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& entry = doc[i];
    auto bad = [i](const std::string& what) {
      return Error(ErrorKind::kSchema,
                   "lexicon entry " + std::to_string(i) + ": " + what);
    };
    if (!entry.is_object()) throw bad("not an object");
    for (const char* key : {"lang", "label", "kind", "pattern"}) {
      if (!entry.contains(key) || !entry[key].is_string()) {
        throw bad(std::string("missing string field \"") + key + "\"");
      }
    }
    if (!entry.contains("priority") || !entry["priority"].is_number_integer()) {
      throw bad("missing integer field \"priority\"");
    }
    auto entry_lang = entry["lang"].get<std::string>();
    if (lang && *lang != entry_lang) {
      throw bad("lang \"" + entry_lang + "\" differs from \"" + *lang + "\"");
    }
    lang = entry_lang;

    MarkerRule rule;
    auto label = entry["label"].get<std::string>();
    if (label == "formal") {
      rule.label = Formality::kFormal;
    } else if (label == "informal") {
      rule.label = Formality::kInformal;
    } else {
      throw bad("label must be \"formal\" or \"informal\"");
    }
    auto kind = entry["kind"].get<std::string>();
    if (kind == "suffix") {
      rule.kind = MatchKind::kSuffix;
    } else if (kind == "substring") {
      rule.kind = MatchKind::kSubstring;
    } else {
      throw bad("kind must be \"suffix\" or \"substring\"");
    }
    rule.pattern = entry["pattern"].get<std::string>();
    if (rule.pattern.empty()) throw bad("empty pattern");
    auto priority = entry["priority"].get<long long>();
    if (priority < std::numeric_limits<int>::min() ||
        priority > std::numeric_limits<int>::max()) {
      throw bad("priority out of range");
    }
    rule.priority = static_cast<int>(priority);
    rules.push_back(std::move(rule));
  }
  return Lexicon(lang.value_or(""), std::move(rules));
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return parse_lexicon(text);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string normalize_for_classification(std::string_view sentence) {
  std::string text = unicode::nfc(sentence);
  text.resize(unicode::strip_trailing_punct_space(text).size());
  return text;
}

namespace {

constexpr char32_t kSyllableBase = 0xAC00;
constexpr char32_t kSyllableLast = 0xD7A3;
constexpr char32_t kLeadBase = 0x1100;
constexpr char32_t kVowelBase = 0x1161;
constexpr char32_t kTrailBase = 0x11A7;
constexpr char32_t kSilentLead = kLeadBase + 11;  // ㅇ

constexpr bool is_syllable(char32_t cp) {
  return cp >= kSyllableBase && cp <= kSyllableLast;
}

constexpr bool is_vowel_jamo(char32_t cp) { return cp >= 0x1161 && cp <= 0x1175; }

// Syllables become lead/vowel/trail jamo, with compound vowels split into
// their parts (ㅝ -> ㅜ ㅓ), so a fused ending shows up as a jamo suffix.
std::u32string to_jamo(std::string_view text) {
  static constexpr struct {
    int compound, first, second;
  } kSplits[] = {{9, 8, 0}, {10, 8, 1}, {11, 8, 20}, {14, 13, 4},
                 {15, 13, 5}, {16, 13, 20}, {19, 18, 20}};
  std::u32string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = unicode::decode_at(text, pos);
    if (!is_syllable(cp)) {
      out.push_back(cp);
      continue;
    }
    const int index = static_cast<int>(cp - kSyllableBase);
    const int lead = index / (21 * 28);
    const int vowel = (index % (21 * 28)) / 28;
    const int trail = index % 28;
    out.push_back(kLeadBase + lead);
    bool split = false;
    for (const auto& s : kSplits) {
      if (s.compound == vowel) {
        out.push_back(kVowelBase + s.first);
        out.push_back(kVowelBase + s.second);
        split = true;
      }
    }
    if (!split) out.push_back(kVowelBase + vowel);
    if (trail != 0) out.push_back(kTrailBase + trail);
  }
  return out;
}

// A Hangul ending that starts with a silent ㅇ fuses with a vowel-final stem:
// 고마우 + 어 -> 고마워, 보 + 아 -> 봐. Such a suffix pattern also matches
// when the text ends with the pattern minus its ㅇ right after a vowel.
bool contracted_suffix_match(std::string_view text, std::string_view pattern) {
  std::size_t first_end = 0;
  const char32_t first = unicode::decode_at(pattern, first_end);
  if (!is_syllable(first) ||
      (first - kSyllableBase) / (21 * 28) != kSilentLead - kLeadBase) {
    return false;
  }
  const std::u32string tail = to_jamo(pattern).substr(1);
  const std::u32string jamo = to_jamo(text);
  if (jamo.size() <= tail.size()) return false;
  if (jamo.compare(jamo.size() - tail.size(), tail.size(), tail) != 0) return false;
  return is_vowel_jamo(jamo[jamo.size() - tail.size() - 1]);
}

}  // namespace

bool rule_matches(const MarkerRule& rule, std::string_view normalized) {
  if (rule.kind == MatchKind::kSuffix) {
    return normalized.ends_with(rule.pattern) ||
           contracted_suffix_match(normalized, rule.pattern);
  }
  return normalized.find(rule.pattern) != std::string_view::npos;
}

FormalityLabel classify(const Lexicon& lexicon, std::string_view sentence) {
  const std::string text = normalize_for_classification(sentence);
  std::optional<int> formal_best;
  std::optional<int> informal_best;
  for (const auto& rule : lexicon.rules()) {
    if (!rule_matches(rule, text)) continue;
    auto& best = rule.label == Formality::kFormal ? formal_best : informal_best;
    if (!best || rule.priority > *best) best = rule.priority;
  }
  if (formal_best && !informal_best) return FormalityLabel::kFormal;
  if (informal_best && !formal_best) return FormalityLabel::kInformal;
  if (!formal_best) return FormalityLabel::kNeutral;
  if (*formal_best > *informal_best) return FormalityLabel::kFormal;
  if (*informal_best > *formal_best) return FormalityLabel::kInformal;
  return FormalityLabel::kNeutral;
}

}  // namespace fsmt
