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

#ifndef FSMT_EVALUATION_HPP_
#define FSMT_EVALUATION_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsmt/corpus.hpp"
#include "fsmt/formality.hpp"

namespace fsmt {

using TokenList = std::vector<std::string>;

// NFC, spaces around every Unicode punctuation character, split on
// whitespace runs.
TokenList bleu_tokenize(std::string_view text);

inline constexpr int kBleuOrder = 4;

// Corpus-level sufficient statistics.
struct BleuStats {
  std::array<std::uint64_t, kBleuOrder> matches{};
  std::array<std::uint64_t, kBleuOrder> totals{};
  std::uint64_t hyp_length = 0;
  std::uint64_t ref_length = 0;

  double score() const;
};

// Throws Error(kLengthMismatch) / Error(kEmptyCorpus).
BleuStats bleu_stats(std::span<const TokenList> hypotheses,
                     std::span<const TokenList> references);

// 100 * BP * exp(mean log p_n), n = 1..4, single reference, no smoothing.
// Zero whenever some p_n or some n-gram denominator is zero.
double corpus_bleu(std::span<const TokenList> hypotheses,
                   std::span<const TokenList> references);

// A test corpus paired with one system's output.
struct EvalInput {
  const Corpus& corpus;
  std::span<const std::string> hypotheses;
  Formality desired = Formality::kFormal;

  // Throws Error(kLengthMismatch) or Error(kEmptyField).
  void validate() const;
};

// Formal when some formal-reference phrase occurs in the hypothesis and no
// informal one does; Informal symmetrically; Neutral otherwise.
FormalityLabel phrase_label(const Segment& segment, std::string_view hypothesis);

// Share of annotated segments whose phrase label equals the desired register.
// Segments without annotations on either reference are skipped.
// Throws Error(kNoAnnotatedSegments).
double m_acc(const EvalInput& input);

// Share of hypotheses the lexicon classifier labels with the desired register.
// Throws Error(kEmptyInput).
double c_f_rate(std::span<const std::string> hypotheses, const Lexicon& lexicon,
                Formality desired);

struct MetricsRow {
  std::string system;
  LangPair lang_pair = LangPair::kEnKo;
  Formality formality = Formality::kFormal;
  double bleu = 0;
  std::optional<double> comet;
  double m_acc_pct = 0;
  double c_f_pct = 0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

// BLEU against the desired-register references plus both formality metrics.
MetricsRow evaluate_system(std::string system, const EvalInput& input,
                           const Lexicon& lexicon);

}  // namespace fsmt

#endif  // FSMT_EVALUATION_HPP_
