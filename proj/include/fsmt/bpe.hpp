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

#ifndef FSMT_BPE_HPP_
#define FSMT_BPE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fsmt {

// U+2581, emitted as its own token between morpheme units.
inline constexpr std::string_view kUnitSeparator = "\xE2\x96\x81";

// Text that an upstream morphological analyzer has already cut into units.
// Units are non-empty and never contain the separator, a tab or a newline.
struct MorphSegmentedText {
  std::vector<std::string> units;

  // Splits on Unicode whitespace: "감사 하 ㅂ니다" -> three units.
  static MorphSegmentedText from_whitespace(std::string_view line);

  // Throws Error(kInvalidUnit) when an invariant does not hold.
  void validate() const;

  friend bool operator==(const MorphSegmentedText&,
                         const MorphSegmentedText&) = default;
};

struct MergeRule {
  std::string left;
  std::string right;
  std::size_t rank = 0;

  friend bool operator==(const MergeRule&, const MergeRule&) = default;
};

inline constexpr std::size_t kDefaultMinFrequency = 2;

// Ordered merge list learned by train_bpe. Merges never cross a unit
// boundary because pair statistics are only ever collected inside a unit.
class BpeModel {
 public:
  BpeModel() = default;
  // Validates rank order: each side must be a single scalar or the output of
  // a lower-ranked merge, and (left, right) pairs must be unique. Ranks are
  // reassigned 0..n-1 from position. Throws Error(kModelFormat).
  BpeModel(std::vector<std::pair<std::string, std::string>> merges,
           std::size_t min_frequency);

  const std::vector<MergeRule>& merges() const { return merges_; }
  std::size_t min_frequency() const { return min_frequency_; }
  // Single scalars named by merges plus every merge output.
  const std::set<std::string>& vocab() const { return vocab_; }

  std::optional<std::size_t> rank_of(std::string_view left,
                                     std::string_view right) const;

  // Tokenizes each unit independently, then joins units with kUnitSeparator.
  std::vector<std::string> encode(const MorphSegmentedText& text) const;
  std::vector<std::string> encode_unit(std::string_view unit) const;

  // "bpe v1 min_frequency=<k>\n" followed by "<left>\t<right>\n" per merge.
  std::string serialize() const;
  static BpeModel parse(std::string_view text);

  void save(const std::filesystem::path& path) const;
  static BpeModel load(const std::filesystem::path& path);

  friend bool operator==(const BpeModel& a, const BpeModel& b) {
    return a.merges_ == b.merges_ && a.min_frequency_ == b.min_frequency_;
  }

 private:
  std::vector<MergeRule> merges_;
  std::size_t min_frequency_ = kDefaultMinFrequency;
  std::set<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> ranks_;
};

struct WeightedUnit {
  std::string unit;
  std::uint64_t count = 1;
};

// Greedy BPE: repeatedly merges the most frequent in-unit adjacent pair,
// frequency weighted by unit multiplicity. Ties go to the lexicographically
// smallest (left, right) by scalar value. Stops after num_merges merges or
// once the best frequency drops below min_frequency.
// Throws Error(kEmptyCorpus) / Error(kInvalidUnit).
BpeModel train_bpe(std::span<const WeightedUnit> units, std::size_t num_merges,
                   std::size_t min_frequency = kDefaultMinFrequency);
// Multiset form: every occurrence counts once.
BpeModel train_bpe(std::span<const std::string> units, std::size_t num_merges,
                   std::size_t min_frequency = kDefaultMinFrequency);

// Concatenates tokens between separators. Throws
// Error(kLeadingOrTrailingSeparator) / Error(kAdjacentSeparators).
MorphSegmentedText decode(std::span<const std::string> tokens);

}  // namespace fsmt

#endif  // FSMT_BPE_HPP_
