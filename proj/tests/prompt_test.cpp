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

#include <gtest/gtest.h>

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "fsmt/error.hpp"
#include "oracles.hpp"

namespace fsmt {
namespace {

// Values from tests/oracles/splitmix_oracle.py.
constexpr std::array<std::uint64_t, 10> kSeed0 = {
    0xE220A8397B1DCDAFULL, 0x6E789E6AA1B965F4ULL, 0x06C45D188009454FULL,
    0xF88BB8A8724C81ECULL, 0x1B39896A51A8749BULL, 0x53CB9F0C747EA2EAULL,
    0x2C829ABE1F4532E1ULL, 0xC584133AC916AB3CULL, 0x3EE5789041C98AC3ULL,
    0xF3B8488C368CB0A6ULL};
constexpr std::array<std::uint64_t, 10> kSeed1 = {
    0x910A2DEC89025CC1ULL, 0xBEEB8DA1658EEC67ULL, 0xF893A2EEFB32555EULL,
    0x71C18690EE42C90BULL, 0x71BB54D8D101B5B9ULL, 0xC34D0BFF90150280ULL,
    0xE099EC6CD7363CA5ULL, 0x85E7BB0F12278575ULL, 0x491718DE357E3DA8ULL,
    0xCB435C8E74616796ULL};
constexpr std::array<std::uint64_t, 10> kSeedMax = {
    0xE4D971771B652C20ULL, 0xE99FF867DBF682C9ULL, 0x382FF84CB27281E9ULL,
    0x6D1DB36CCBA982D2ULL, 0xB4A0472E578069AEULL, 0xD31DADBDA438BB33ULL,
    0xF14F2CF802083FA5ULL, 0x405DA438A39E8064ULL, 0xC4FEA708156E0C84ULL,
    0x031E50FE7BBD6E1CULL};

void expect_stream(std::uint64_t seed, const std::array<std::uint64_t, 10>& want) {
  std::uint64_t state = seed;
  for (std::size_t i = 0; i < want.size(); ++i) {
    const SplitMixDraw d = splitmix_next(state);
    EXPECT_EQ(d.value, want[i]) << "seed " << seed << " draw " << i;
    EXPECT_EQ(d.next_state, state + kSplitMixGamma);
    EXPECT_EQ(splitmix_at(seed, i), want[i]);
    state = d.next_state;
  }
}

TEST(SplitMix, MatchesReferenceStreams) {
  expect_stream(0, kSeed0);
  expect_stream(1, kSeed1);
  expect_stream(~std::uint64_t{0}, kSeedMax);
}

TEST(SplitMix, StateZeroFirstValue) {
  static_assert(splitmix_next(0).value == 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix_next(0).next_state, kSplitMixGamma);
}

TEST(SplitMix, AgreesWithHalfWordOracle) {
  for (std::uint64_t seed : {0ULL, 7ULL, 0xDEADBEEFULL, 0x8000000000000000ULL}) {
    std::uint64_t lib = seed;
    std::uint64_t ref = seed;
    for (int i = 0; i < 100; ++i) {
      const SplitMixDraw d = splitmix_next(lib);
      lib = d.next_state;
      EXPECT_EQ(d.value, oracle::splitmix_value_after(ref));
    }
  }
}

TEST(SelectShots, Examples) {
  EXPECT_TRUE(select_shots(5, 0, 42).empty());
  EXPECT_EQ(select_shots(1, 1, 12345), (std::vector<std::size_t>{0}));
  EXPECT_EQ(select_shots(5, 2, 42), (std::vector<std::size_t>{3, 4}));
  EXPECT_EQ(select_shots(10, 4, 7), (std::vector<std::size_t>{7, 0, 4, 6}));
}

TEST(SelectShots, NTooLarge) {
  try {
    select_shots(3, 4, 0);
    FAIL() << "expected NTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNTooLarge);
  }
}

TEST(SelectShots, MatchesOracleAndNeverRepeats) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const std::size_t pool = 1 + seed % 17;
    const std::size_t n = seed % (pool + 1);
    const auto got = select_shots(pool, n, seed * 0x9E37ULL);
    EXPECT_EQ(got, oracle::fisher_yates_prefix(pool, n, seed * 0x9E37ULL));
    EXPECT_EQ(std::set<std::size_t>(got.begin(), got.end()).size(), n);
    for (std::size_t idx : got) EXPECT_LT(idx, pool);
  }
}

TEST(SelectShots, RoughlyUniform) {
  std::array<int, 4> hits{};
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    ++hits[select_shots(4, 1, seed).front()];
  }
  for (int h : hits) {
    EXPECT_GE(h, 2000);
    EXPECT_LE(h, 3000);
  }
}

std::vector<Shot> ko_pool(Formality f) {
  std::vector<Shot> pool;
  for (int i = 0; i < 5; ++i) {
    pool.push_back({"src" + std::to_string(i), "tgt" + std::to_string(i), f,
                    LangPair::kEnKo});
  }
  return pool;
}

constexpr std::string_view kTemplate =
    "[{FORMALITY}|{TARGET_LANG}]\n{SHOTS}EN: {SOURCE}\n";

TEST(RenderPrompt, NoShotsLeavesShotSlotEmpty) {
  PromptSpec spec{LangPair::kEnKo, Formality::kFormal, 0, 42, "default"};
  const auto pool = ko_pool(Formality::kFormal);
  const Prompt p = render_prompt(spec, pool, "Hello.", kTemplate);
  EXPECT_EQ(p.text, "[formal|Korean]\nEN: Hello.\n");
  EXPECT_TRUE(p.shots_used.empty());
}

TEST(RenderPrompt, TwoShotsInSelectionOrder) {
  PromptSpec spec{LangPair::kEnKo, Formality::kInformal, 2, 42, "default"};
  const auto pool = ko_pool(Formality::kInformal);
  const Prompt p = render_prompt(spec, pool, "Hi.", kTemplate);
  EXPECT_EQ(p.shots_used, (std::vector<std::size_t>{3, 4}));
  EXPECT_EQ(p.text,
            "[informal|Korean]\n"
            "EN: src3\nKorean: tgt3\n"
            "EN: src4\nKorean: tgt4\n"
            "EN: Hi.\n");
}

TEST(RenderPrompt, SubstitutedTextIsNotRescanned) {
  PromptSpec spec{LangPair::kEnVi, Formality::kFormal, 0, 0, "default"};
  const Prompt p = render_prompt(spec, {}, "say {SHOTS} {FORMALITY}", kTemplate);
  EXPECT_EQ(p.text, "[formal|Vietnamese]\nEN: say {SHOTS} {FORMALITY}\n");
}

TEST(RenderPrompt, DefaultTemplateIsValidAndReproducible) {
  EXPECT_NO_THROW(validate_template(default_template()));
  PromptSpec spec{LangPair::kEnRu, Formality::kFormal, 3, 99, "default"};
  std::vector<Shot> pool = ko_pool(Formality::kFormal);
  for (auto& s : pool) s.lang_pair = LangPair::kEnRu;
  const Prompt a = render_prompt(spec, pool, "Thanks.", default_template());
  const Prompt b = render_prompt(spec, pool, "Thanks.", default_template());
  EXPECT_EQ(a.text, b.text);
  EXPECT_NE(a.text.find("into Russian."), std::string::npos);
  EXPECT_NE(a.text.find("Use formal speech"), std::string::npos);
}

TEST(RenderPrompt, PlaceholderErrors) {
  PromptSpec spec;
  spec.num_shots = 0;
  for (std::string_view bad :
       {std::string_view("{FORMALITY}{TARGET_LANG}{SHOTS}"),
        std::string_view("{FORMALITY}{TARGET_LANG}{SHOTS}{SOURCE}{SOURCE}"),
        std::string_view("")}) {
    try {
      render_prompt(spec, {}, "x", bad);
      FAIL() << "expected MissingPlaceholder for '" << bad << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kMissingPlaceholder);
    }
  }
}

TEST(RenderPrompt, PoolFormalityMismatch) {
  PromptSpec spec{LangPair::kEnKo, Formality::kFormal, 1, 0, "default"};
  auto pool = ko_pool(Formality::kFormal);
  pool[2].formality = Formality::kInformal;
  try {
    render_prompt(spec, pool, "x", kTemplate);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPoolFormalityMismatch);
  }
}

TEST(RenderPrompt, NTooLarge) {
  PromptSpec spec{LangPair::kEnKo, Formality::kFormal, 6, 0, "default"};
  const auto pool = ko_pool(Formality::kFormal);
  try {
    render_prompt(spec, pool, "x", kTemplate);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNTooLarge);
  }
}

}  // namespace
}  // namespace fsmt
