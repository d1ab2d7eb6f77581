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

#ifndef FSMT_FORMALITY_HPP_
#define FSMT_FORMALITY_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fsmt {

// Requested register.
enum class Formality { kFormal, kInformal };
// Classifier verdict.
enum class FormalityLabel { kFormal, kInformal, kNeutral };

Formality parse_formality(std::string_view text);        // "formal" | "informal"
FormalityLabel parse_formality_label(std::string_view text);  // + "neutral"
std::string_view formality_name(Formality f);
std::string_view formality_label_name(FormalityLabel label);

constexpr FormalityLabel to_label(Formality f) {
  return f == Formality::kFormal ? FormalityLabel::kFormal
                                 : FormalityLabel::kInformal;
}

enum class MatchKind { kSuffix, kSubstring };

struct MarkerRule {
  Formality label = Formality::kFormal;
  MatchKind kind = MatchKind::kSuffix;
  std::string pattern;
  int priority = 0;

  friend bool operator==(const MarkerRule&, const MarkerRule&) = default;
};

class Lexicon {
 public:
  // Patterns are NFC-normalized. Throws Error(kSchema) for an empty pattern,
  // Error(kDuplicateRule) for a repeated (label, kind, pattern) and
  // Error(kEmptySide) when either label has no rules.
  Lexicon(std::string lang, std::vector<MarkerRule> rules);

  const std::string& lang() const { return lang_; }
  const std::vector<MarkerRule>& rules() const { return rules_; }

 private:
  std::string lang_;
  std::vector<MarkerRule> rules_;
};

// JSON array of {"lang", "label", "kind", "pattern", "priority"} objects.
// Every entry must name the same lang.
Lexicon parse_lexicon(std::string_view json_text);
Lexicon load_lexicon(const std::filesystem::path& path);

// NFC, then trailing punctuation and whitespace removed.
std::string normalize_for_classification(std::string_view sentence);

// Substring rules match anywhere. Suffix rules match a literal suffix, or a
// Hangul ending beginning with a silent ㅇ that has fused into the preceding
// vowel ("고마워" ends with "어").
bool rule_matches(const MarkerRule& rule, std::string_view normalized);

// One label matched -> that label. Both matched -> label of the strictly
// highest-priority matching rule, Neutral on a cross-label tie. Nothing
// matched -> Neutral.
FormalityLabel classify(const Lexicon& lexicon, std::string_view sentence);

}  // namespace fsmt

#endif  // FSMT_FORMALITY_HPP_
