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

#ifndef FSMT_SYNTH_PIPELINE_HPP_
#define FSMT_SYNTH_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsmt/corpus.hpp"
#include "fsmt/formality.hpp"
#include "fsmt/llm_client.hpp"
#include "fsmt/prompt.hpp"

namespace fsmt {

enum class PipelineMode { kSupervised, kZeroShot };

PipelineMode parse_pipeline_mode(std::string_view text);  // supervised | zero-shot
std::string_view pipeline_mode_name(PipelineMode mode);

// One source sentence taken through prompt -> reply -> classifier verdict.
// `error` is empty unless the item failed; failed items keep an empty
// candidate, a Neutral label and accepted=false.
struct GenerationRecord {
  std::size_t index = 0;
  std::string source;
  LangPair lang_pair = LangPair::kEnKo;
  Formality requested_formality = Formality::kFormal;
  std::string prompt_text;
  std::string raw_response;
  std::string candidate;
  FormalityLabel predicted_label = FormalityLabel::kNeutral;
  bool accepted = false;
  std::uint64_t seed = 0;
  std::string error;

  friend bool operator==(const GenerationRecord&,
                         const GenerationRecord&) = default;
};

struct AcceptanceStats {
  std::size_t total = 0;
  std::size_t accepted = 0;
  std::map<FormalityLabel, std::size_t> by_label;

  friend bool operator==(const AcceptanceStats&,
                         const AcceptanceStats&) = default;
};

AcceptanceStats compute_stats(std::span<const GenerationRecord> records);
// {"total":..,"accepted":..,"by_label":{"formal":..,"informal":..,"neutral":..}}
std::string stats_to_json(const AcceptanceStats& stats);

struct PipelineConfig {
  PipelineMode mode = PipelineMode::kSupervised;
  LangPair lang_pair = LangPair::kEnKo;
  Formality formality = Formality::kFormal;
  std::size_t n_shots = kDefaultShots;
  std::uint64_t seed = 0;
  std::string template_id = "default";
  std::string template_text = std::string(default_template());
  std::string model = "gpt-4";
  double temperature = 0.0;
  std::size_t workers = 1;
};

struct GenerationResult {
  std::vector<GenerationRecord> records;
  AcceptanceStats stats;
  std::size_t transport_failures = 0;
};

// Seed for item `index`: draw `index` of the SplitMix64 stream seeded with
// the run seed, so items are independent of scheduling.
constexpr std::uint64_t item_seed(std::uint64_t run_seed, std::size_t index) {
  return splitmix_at(run_seed, index);
}

// Supervised mode: sources come from the corpus. Shots are drawn from `shots`
// (all of config.formality). Throws Error(kInvalidConfig) on a mode or
// lexicon-language mismatch and Error(kAbortThreshold) when more than half
// the items fail at the transport level.
GenerationResult run_generation(const PipelineConfig& config, const Corpus& inputs,
                                std::span<const Shot> shots,
                                const Lexicon& lexicon, ChatClient& client);
// Zero-shot mode: sources come from a plain pool.
GenerationResult run_generation(const PipelineConfig& config,
                                const SourcePool& inputs,
                                std::span<const Shot> shots,
                                const Lexicon& lexicon, ChatClient& client);

std::vector<GenerationRecord> filter_records(
    std::span<const GenerationRecord> records);

// JSONL with a fixed key order.
std::string record_to_json(const GenerationRecord& record);
void write_records(std::span<const GenerationRecord> records, std::ostream& out);
void write_records(std::span<const GenerationRecord> records,
                   const std::filesystem::path& path);
// Throws Error(kSchema) naming the offending line.
std::vector<GenerationRecord> read_records(std::istream& in,
                                           std::string_view origin = "<stream>");
std::vector<GenerationRecord> read_records(const std::filesystem::path& path);

}  // namespace fsmt

#endif  // FSMT_SYNTH_PIPELINE_HPP_
