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

#include "fsmt/prompt.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "fsmt/error.hpp"

namespace fsmt {

std::vector<std::size_t> select_shots(std::size_t pool_size, std::size_t n,
                                      std::uint64_t seed) {
  if (n > pool_size) {
    throw Error(ErrorKind::kNTooLarge,
                "cannot select " + std::to_string(n) + " shots from a pool of " +
                    std::to_string(pool_size));
  }
  std::vector<std::size_t> indices(pool_size);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  std::uint64_t state = seed;
  for (std::size_t i = 0; i < n; ++i) {
    const SplitMixDraw draw = splitmix_next(state);
    state = draw.next_state;
    const std::size_t r =
        static_cast<std::size_t>(draw.value % static_cast<std::uint64_t>(pool_size - i));
    std::swap(indices[i], indices[i + r]);
  }
  indices.resize(n);
  return indices;
}

std::vector<Shot> shots_from_corpus(const Corpus& corpus, Formality formality) {
  std::vector<Shot> shots;
  shots.reserve(corpus.segments.size());
  for (const auto& seg : corpus.segments) {
    const auto& ref =
        formality == Formality::kFormal ? seg.formal_ref : seg.informal_ref;
    shots.push_back({seg.source, ref.plain, formality, seg.lang_pair});
  }
  return shots;
}

std::string_view default_template() {
  return "You are a professional translator. Translate the English sentence "
         "into {TARGET_LANG}. Use {FORMALITY} speech throughout and reply with "
         "the translation only.\n"
         "\n"
         "{SHOTS}EN: {SOURCE}\n"
         "Translation:\n";
}

namespace {

constexpr std::array<std::string_view, 4> kPlaceholders = {
    kPlaceholderFormality, kPlaceholderTargetLang, kPlaceholderShots,
    kPlaceholderSource};

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

}  // namespace

void validate_template(std::string_view tmpl) {
  for (std::string_view ph : kPlaceholders) {
    const std::size_t count = count_occurrences(tmpl, ph);
    if (count != 1) {
      throw Error(ErrorKind::kMissingPlaceholder,
                  "template must contain " + std::string(ph) +
                      " exactly once (found " + std::to_string(count) + ")");
    }
  }
}

Prompt render_prompt(const PromptSpec& spec, std::span<const Shot> pool,
                     std::string_view source, std::string_view tmpl) {
  validate_template(tmpl);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].formality != spec.formality) {
      throw Error(ErrorKind::kPoolFormalityMismatch,
                  "shot " + std::to_string(i) + " is " +
                      std::string(formality_name(pool[i].formality)) +
                      " but the prompt requests " +
                      std::string(formality_name(spec.formality)));
    }
  }

  Prompt prompt;
  prompt.shots_used = select_shots(pool.size(), spec.num_shots, spec.seed);

  std::string shots;
  for (std::size_t idx : prompt.shots_used) {
    const Shot& shot = pool[idx];
    shots += "EN: ";
    shots += shot.source;
    shots += '\n';
    shots += target_lang_name(shot.lang_pair);
    shots += ": ";
    shots += shot.target;
    shots += '\n';
  }

  struct Hit {
    std::size_t pos;
    std::string_view placeholder;
    std::string_view replacement;
  };
  std::array<Hit, 4> hits = {{
      {tmpl.find(kPlaceholderFormality), kPlaceholderFormality,
       formality_name(spec.formality)},
      {tmpl.find(kPlaceholderTargetLang), kPlaceholderTargetLang,
       target_lang_name(spec.lang_pair)},
      {tmpl.find(kPlaceholderShots), kPlaceholderShots, shots},
      {tmpl.find(kPlaceholderSource), kPlaceholderSource, source},
  }};
  std::sort(hits.begin(), hits.end(),
            [](const Hit& a, const Hit& b) { return a.pos < b.pos; });

  std::size_t cursor = 0;
  for (const Hit& h : hits) {
    prompt.text.append(tmpl.substr(cursor, h.pos - cursor));
    prompt.text.append(h.replacement);
    cursor = h.pos + h.placeholder.size();
  }
  prompt.text.append(tmpl.substr(cursor));
  return prompt;
}

}  // namespace fsmt
