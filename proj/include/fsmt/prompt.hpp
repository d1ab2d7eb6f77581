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

#ifndef FSMT_PROMPT_HPP_
#define FSMT_PROMPT_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsmt/corpus.hpp"
#include "fsmt/formality.hpp"

namespace fsmt {

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

struct SplitMixDraw {
  std::uint64_t value;
  std::uint64_t next_state;
};

constexpr std::uint64_t splitmix_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// SplitMix64 step. Unsigned arithmetic wraps mod 2^64.
constexpr SplitMixDraw splitmix_next(std::uint64_t state) {
  const std::uint64_t next = state + kSplitMixGamma;
  return {splitmix_mix(next), next};
}

// Value of draw number `index` (0-based) of the stream seeded with `seed`,
// without stepping through the earlier draws.
constexpr std::uint64_t splitmix_at(std::uint64_t seed, std::uint64_t index) {
  return splitmix_mix(seed + (index + 1) * kSplitMixGamma);
}

// Partial Fisher-Yates over [0, pool_size): draw i swaps position i with
// i + value % (pool_size - i). Throws Error(kNTooLarge) when n > pool_size.
std::vector<std::size_t> select_shots(std::size_t pool_size, std::size_t n,
                                      std::uint64_t seed);

struct Shot {
  std::string source;
  std::string target;
  Formality formality = Formality::kFormal;
  // Labels the target line of the shot block.
  LangPair lang_pair = LangPair::kEnKo;
};

// Projects a corpus to (source, plain reference of the chosen register).
std::vector<Shot> shots_from_corpus(const Corpus& corpus, Formality formality);

inline constexpr std::size_t kDefaultShots = 4;

struct PromptSpec {
  LangPair lang_pair = LangPair::kEnKo;
  Formality formality = Formality::kFormal;
  std::size_t num_shots = kDefaultShots;
  std::uint64_t seed = 0;
  std::string template_id = "default";
};

struct Prompt {
  std::string text;
  std::vector<std::size_t> shots_used;
};

inline constexpr std::string_view kPlaceholderFormality = "{FORMALITY}";
inline constexpr std::string_view kPlaceholderTargetLang = "{TARGET_LANG}";
inline constexpr std::string_view kPlaceholderShots = "{SHOTS}";
inline constexpr std::string_view kPlaceholderSource = "{SOURCE}";

// Built-in template; data/templates/default.txt carries the same text.
std::string_view default_template();

// Throws Error(kMissingPlaceholder) unless each placeholder occurs exactly
// once.
void validate_template(std::string_view tmpl);

// Substitutes placeholders in one pass, so substituted text is never
// rescanned. Each chosen shot becomes "EN: <source>\n<Language>: <target>\n".
Prompt render_prompt(const PromptSpec& spec, std::span<const Shot> pool,
                     std::string_view source, std::string_view tmpl);

}  // namespace fsmt

#endif  // FSMT_PROMPT_HPP_
