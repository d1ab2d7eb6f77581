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

#include "fsmt/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fsmt/error.hpp"
#include "fsmt/unicode.hpp"

namespace fsmt {

TokenList bleu_tokenize(std::string_view text) {
  const std::string norm = unicode::nfc(text);
  TokenList tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  std::size_t pos = 0;
  while (pos < norm.size()) {
    const std::size_t start = pos;
    const char32_t cp = unicode::decode_at(norm, pos);
    if (unicode::is_whitespace(cp)) {
      flush();
    } else if (unicode::is_punctuation(cp)) {
      flush();
      tokens.emplace_back(norm.substr(start, pos - start));
    } else {
      current.append(norm, start, pos - start);
    }
  }
  flush();
  return tokens;
}

namespace {

struct NgramLess {
  bool operator()(std::span<const std::string> a,
                  std::span<const std::string> b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

using NgramCounts = std::map<std::span<const std::string>, std::uint64_t, NgramLess>;

NgramCounts count_ngrams(const TokenList& tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::span<const std::string>(tokens.data() + i, n)];
  }
  return counts;
}

}  // namespace

BleuStats bleu_stats(std::span<const TokenList> hypotheses,
                     std::span<const TokenList> references) {
  if (hypotheses.size() != references.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                std::to_string(hypotheses.size()) + " hypotheses vs " +
                    std::to_string(references.size()) + " references");
  }
  if (hypotheses.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "BLEU needs at least one segment");
  }
  BleuStats stats;
  for (std::size_t s = 0; s < hypotheses.size(); ++s) {
    const TokenList& hyp = hypotheses[s];
    const TokenList& ref = references[s];
    stats.hyp_length += hyp.size();
    stats.ref_length += ref.size();
    for (std::size_t n = 1; n <= kBleuOrder; ++n) {
      if (hyp.size() < n) continue;
      stats.totals[n - 1] += hyp.size() - n + 1;
      const NgramCounts ref_counts = count_ngrams(ref, n);
      for (const auto& [gram, count] : count_ngrams(hyp, n)) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) stats.matches[n - 1] += std::min(count, it->second);
      }
    }
  }
  return stats;
}

double BleuStats::score() const {
  double log_sum = 0;
  for (int n = 0; n < kBleuOrder; ++n) {
    if (totals[n] == 0 || matches[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matches[n]) /
                        static_cast<double>(totals[n]));
  }
  const double c = static_cast<double>(hyp_length);
  const double r = static_cast<double>(ref_length);
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return 100.0 * bp * std::exp(log_sum / kBleuOrder);
}

double corpus_bleu(std::span<const TokenList> hypotheses,
                   std::span<const TokenList> references) {
  return bleu_stats(hypotheses, references).score();
}

void EvalInput::validate() const {
  if (hypotheses.size() != corpus.segments.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                std::to_string(hypotheses.size()) + " hypotheses for " +
                    std::to_string(corpus.segments.size()) + " test segments");
  }
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    if (hypotheses[i].empty()) {
      throw Error(ErrorKind::kEmptyField,
                  "hypothesis " + std::to_string(i + 1) + " is empty");
    }
  }
}

namespace {

bool contains_any(std::string_view text, const std::vector<std::string>& phrases) {
  for (const auto& p : phrases) {
    if (text.find(p) != std::string_view::npos) return true;
  }
  return false;
}

}  // namespace

FormalityLabel phrase_label(const Segment& segment, std::string_view hypothesis) {
  const std::string text = unicode::nfc(hypothesis);
  const bool formal = contains_any(text, segment.formal_ref.phrases);
  const bool informal = contains_any(text, segment.informal_ref.phrases);
  if (formal && !informal) return FormalityLabel::kFormal;
  if (informal && !formal) return FormalityLabel::kInformal;
  return FormalityLabel::kNeutral;
}

double m_acc(const EvalInput& input) {
  input.validate();
  std::size_t counted = 0;
  std::size_t hits = 0;
  const FormalityLabel want = to_label(input.desired);
  for (std::size_t i = 0; i < input.hypotheses.size(); ++i) {
    const Segment& seg = input.corpus.segments[i];
    if (!seg.formal_ref.has_annotations() && !seg.informal_ref.has_annotations()) {
      continue;
    }
    ++counted;
    if (phrase_label(seg, input.hypotheses[i]) == want) ++hits;
  }
  if (counted == 0) {
    throw Error(ErrorKind::kNoAnnotatedSegments,
                "no test segment carries [F] phrase annotations");
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(counted);
}

double c_f_rate(std::span<const std::string> hypotheses, const Lexicon& lexicon,
                Formality desired) {
  if (hypotheses.empty()) {
    throw Error(ErrorKind::kEmptyInput, "no hypotheses to classify");
  }
  const FormalityLabel want = to_label(desired);
  std::size_t hits = 0;
  for (const auto& h : hypotheses) {
    if (classify(lexicon, h) == want) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(hypotheses.size());
}

MetricsRow evaluate_system(std::string system, const EvalInput& input,
                           const Lexicon& lexicon) {
  input.validate();
  std::vector<TokenList> hyps;
  std::vector<TokenList> refs;
  hyps.reserve(input.hypotheses.size());
  refs.reserve(input.hypotheses.size());
  for (std::size_t i = 0; i < input.hypotheses.size(); ++i) {
    const Segment& seg = input.corpus.segments[i];
    hyps.push_back(bleu_tokenize(input.hypotheses[i]));
    refs.push_back(bleu_tokenize(input.desired == Formality::kFormal
                                     ? seg.formal_ref.plain
                                     : seg.informal_ref.plain));
  }
  MetricsRow row;
  row.system = std::move(system);
  row.lang_pair = input.corpus.lang_pair;
  row.formality = input.desired;
  row.bleu = corpus_bleu(hyps, refs);
  row.m_acc_pct = m_acc(input);
  row.c_f_pct = c_f_rate(input.hypotheses, lexicon, input.desired);
  return row;
}

}  // namespace fsmt
