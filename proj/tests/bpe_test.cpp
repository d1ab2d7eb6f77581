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

#include "fsmt/bpe.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <random>

#include "fsmt/corpus.hpp"
#include "fsmt/error.hpp"

namespace fsmt {
namespace {

const std::string kSep(kUnitSeparator);

std::vector<WeightedUnit> textbook_corpus() {
  return {{"newest", 6}, {"widest", 3}, {"low", 5}, {"lower", 2}};
}

// Plain adjacent-pair count over weighted units, written out by hand.
std::map<std::pair<std::string, std::string>, std::uint64_t> hand_count(
    const std::vector<WeightedUnit>& units) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
  for (const auto& u : units) {
    for (std::size_t i = 0; i + 1 < u.unit.size(); ++i) {
      counts[{u.unit.substr(i, 1), u.unit.substr(i + 1, 1)}] += u.count;
    }
  }
  return counts;
}

TEST(TrainBpe, FirstMergeUsesLexicographicTieBreak) {
  const auto units = textbook_corpus();
  const auto counts = hand_count(units);
  EXPECT_EQ((counts.at({"e", "s"})), 9u);
  EXPECT_EQ((counts.at({"s", "t"})), 9u);
  for (const auto& [pair, n] : counts) EXPECT_LE(n, 9u);

  BpeModel model = train_bpe(std::span<const WeightedUnit>(units), 1, 2);
  ASSERT_EQ(model.merges().size(), 1u);
  EXPECT_EQ(model.merges()[0], (MergeRule{"e", "s", 0}));
}

TEST(TrainBpe, ZeroMergesIsCharacterLevel) {
  const auto units = textbook_corpus();
  BpeModel model = train_bpe(std::span<const WeightedUnit>(units), 0, 2);
  EXPECT_TRUE(model.merges().empty());
  MorphSegmentedText t{{"low"}};
  EXPECT_EQ(model.encode(t), (std::vector<std::string>{"l", "o", "w"}));
}

TEST(TrainBpe, MinFrequencyHalts) {
  std::vector<WeightedUnit> units = {{"ab", 1}};
  EXPECT_TRUE(train_bpe(std::span<const WeightedUnit>(units), 10, 2).merges().empty());
  EXPECT_EQ(train_bpe(std::span<const WeightedUnit>(units), 10, 1).merges().size(), 1u);
}

TEST(TrainBpe, Errors) {
  std::vector<std::string> none;
  EXPECT_THROW(train_bpe(std::span<const std::string>(none), 3), Error);
  try {
    train_bpe(std::span<const std::string>(none), 3);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyCorpus);
  }
  std::vector<std::string> bad = {"a" + kSep + "b"};
  try {
    train_bpe(std::span<const std::string>(bad), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidUnit);
  }
}

TEST(TrainBpe, NeverMergesAcrossUnits) {
  // "ab" spans units in every sentence but never occurs inside one.
  std::vector<std::string> units;
  for (int i = 0; i < 50; ++i) {
    units.push_back("xa");
    units.push_back("by");
  }
  BpeModel model = train_bpe(std::span<const std::string>(units), 10, 2);
  EXPECT_FALSE(model.rank_of("a", "b").has_value());
  EXPECT_EQ(model.merges().size(), 2u);
}

TEST(TrainBpe, HangulScalarsAreSymbols) {
  std::vector<std::string> units = {"합니다", "합니다", "갑니다"};
  BpeModel model = train_bpe(std::span<const std::string>(units), 1, 2);
  ASSERT_EQ(model.merges().size(), 1u);
  EXPECT_EQ(model.merges()[0].left, "니");
  EXPECT_EQ(model.merges()[0].right, "다");
}

TEST(Encode, AppliesMergesInRankOrder) {
  BpeModel model({{"e", "s"}, {"es", "t"}}, 2);
  EXPECT_EQ(model.encode(MorphSegmentedText{{"newest"}}),
            (std::vector<std::string>{"n", "e", "w", "est"}));
}

TEST(Encode, CharacterFallbackWithSeparators) {
  BpeModel model;
  EXPECT_EQ(model.encode(MorphSegmentedText{{"ab", "c"}}),
            (std::vector<std::string>{"a", "b", kSep, "c"}));
}

TEST(Encode, UntouchedUnit) {
  BpeModel model({{"e", "s"}}, 2);
  EXPECT_EQ(model.encode(MorphSegmentedText{{"x"}}), (std::vector<std::string>{"x"}));
}

TEST(Decode, Examples) {
  std::vector<std::string> a = {"n", "e", "w", "est"};
  EXPECT_EQ(decode(a).units, (std::vector<std::string>{"newest"}));
  std::vector<std::string> b = {"a", kSep, "b"};
  EXPECT_EQ(decode(b).units, (std::vector<std::string>{"a", "b"}));
  std::vector<std::string> empty;
  EXPECT_TRUE(decode(empty).units.empty());
}

TEST(Decode, SeparatorErrors) {
  auto kind = [](std::vector<std::string> tokens) {
    try {
      decode(tokens);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kUsage;
  };
  EXPECT_EQ(kind({kSep, "a"}), ErrorKind::kLeadingOrTrailingSeparator);
  EXPECT_EQ(kind({"a", kSep}), ErrorKind::kLeadingOrTrailingSeparator);
  EXPECT_EQ(kind({"a", kSep, kSep, "b"}), ErrorKind::kAdjacentSeparators);
}

MorphSegmentedText random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> alphabet = {"a", "b", "c", "e", "s", "t",
                                                    "하", "니", "다", "ạ", "ё"};
  MorphSegmentedText t;
  const int n_units = 1 + static_cast<int>(rng() % 5);
  for (int u = 0; u < n_units; ++u) {
    std::string unit;
    for (int k = 1 + static_cast<int>(rng() % 7); k > 0; --k) {
      unit += alphabet[rng() % alphabet.size()];
    }
    t.units.push_back(unit);
  }
  return t;
}

TEST(BpeProperties, RoundTripAndBoundarySafety) {
  std::mt19937_64 rng(99);
  std::vector<std::string> training;
  for (int i = 0; i < 300; ++i) {
    for (auto& u : random_text(rng).units) training.push_back(u);
  }
  BpeModel model = train_bpe(std::span<const std::string>(training), 60, 2);
  ASSERT_GT(model.merges().size(), 10u);
  for (int i = 0; i < 1000; ++i) {
    MorphSegmentedText t = random_text(rng);
    auto tokens = model.encode(t);
    EXPECT_EQ(decode(tokens), t);
    std::size_t unit = 0;
    std::string built;
    for (const auto& tok : tokens) {
      if (tok == kSep) {
        EXPECT_EQ(built, t.units[unit]);
        ++unit;
        built.clear();
        continue;
      }
      EXPECT_EQ(tok.find(kSep), std::string::npos);
      EXPECT_NE(t.units[unit].find(tok), std::string::npos);
      built += tok;
    }
    EXPECT_EQ(built, t.units[unit]);
  }
}

TEST(BpeProperties, DeterministicAndMonotone) {
  std::mt19937_64 rng(5);
  std::vector<std::string> training;
  for (int i = 0; i < 200; ++i) {
    for (auto& u : random_text(rng).units) training.push_back(u);
  }
  auto a = train_bpe(std::span<const std::string>(training), 40, 2);
  auto b = train_bpe(std::span<const std::string>(training), 40, 2);
  EXPECT_EQ(a.serialize(), b.serialize());
  for (std::size_t k = 0; k < 15; ++k) {
    auto shorter = train_bpe(std::span<const std::string>(training), k, 2);
    auto longer = train_bpe(std::span<const std::string>(training), k + 1, 2);
    ASSERT_LE(shorter.merges().size(), longer.merges().size());
    for (std::size_t i = 0; i < shorter.merges().size(); ++i) {
      EXPECT_EQ(shorter.merges()[i], longer.merges()[i]);
    }
  }
}

TEST(BpeModelFile, SaveLoadIsByteIdentical) {
  const auto units = textbook_corpus();
  BpeModel model = train_bpe(std::span<const WeightedUnit>(units), 10, 2);
  const std::string text = model.serialize();
  EXPECT_TRUE(text.starts_with("bpe v1 min_frequency=2\ne\ts\n"));
  EXPECT_EQ(BpeModel::parse(text).serialize(), text);

  const auto path = std::filesystem::temp_directory_path() / "fsmt_bpe_test.model";
  model.save(path);
  EXPECT_EQ(read_file(path), text);
  EXPECT_EQ(BpeModel::load(path), model);
  std::filesystem::remove(path);
}

TEST(BpeModelFile, RejectsMalformed) {
  for (const char* text : {"", "bpe v2 min_frequency=2\n", "bpe v1 min_frequency=0\n",
                           "bpe v1 min_frequency=2\na\tb",  // no final newline
                           "bpe v1 min_frequency=2\nab\tc\n",  // "ab" never produced
                           "bpe v1 min_frequency=2\na\tb\na\tb\n",
                           "bpe v1 min_frequency=2\na\tb\tc\n"}) {
    try {
      BpeModel::parse(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kModelFormat);
    }
  }
}

TEST(BpeModel, VocabHoldsMergeOutputs) {
  BpeModel model({{"e", "s"}, {"es", "t"}}, 2);
  EXPECT_TRUE(model.vocab().contains("est"));
  EXPECT_TRUE(model.vocab().contains("es"));
  EXPECT_TRUE(model.vocab().contains("t"));
}

TEST(MorphSegmentedText, FromWhitespace) {
  EXPECT_EQ(MorphSegmentedText::from_whitespace("  감사 하 ㅂ니다 ").units,
            (std::vector<std::string>{"감사", "하", "ㅂ니다"}));
}

}  // namespace
}  // namespace fsmt
