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

#include <charconv>
#include <fstream>
#include <map>

#include "fsmt/corpus.hpp"
#include "fsmt/error.hpp"
#include "fsmt/unicode.hpp"

namespace fsmt {
namespace {

constexpr std::string_view kHeaderPrefix = "bpe v1 min_frequency=";

bool is_single_scalar(std::string_view s) {
  if (s.empty()) return false;
  std::size_t pos = 0;
  unicode::decode_at(s, pos);
  return pos == s.size();
}

void check_unit(std::string_view unit) {
  if (unit.empty()) throw Error(ErrorKind::kInvalidUnit, "empty unit");
  if (unit.find(kUnitSeparator) != std::string_view::npos) {
    throw Error(ErrorKind::kInvalidUnit,
                "unit contains the U+2581 separator: " + std::string(unit));
  }
  if (unit.find_first_of("\t\n\r") != std::string_view::npos) {
    throw Error(ErrorKind::kInvalidUnit, "unit contains a tab or line break");
  }
}

std::string pair_key(std::string_view left, std::string_view right) {
  std::string key;
  key.reserve(left.size() + right.size() + 1);
  key.append(left);
  key.push_back('\t');
  key.append(right);
  return key;
}

}  // namespace

MorphSegmentedText MorphSegmentedText::from_whitespace(std::string_view line) {
  MorphSegmentedText text;
  std::size_t pos = 0;
  std::size_t unit_start = std::string_view::npos;
  while (pos < line.size()) {
    std::size_t at = pos;
    char32_t cp = unicode::decode_at(line, pos);
    if (unicode::is_whitespace(cp)) {
      if (unit_start != std::string_view::npos) {
        text.units.emplace_back(line.substr(unit_start, at - unit_start));
        unit_start = std::string_view::npos;
      }
    } else if (unit_start == std::string_view::npos) {
      unit_start = at;
    }
  }
  if (unit_start != std::string_view::npos) {
    text.units.emplace_back(line.substr(unit_start));
  }
  return text;
}

void MorphSegmentedText::validate() const {
  for (const auto& u : units) check_unit(u);
}

BpeModel::BpeModel(std::vector<std::pair<std::string, std::string>> merges,
                   std::size_t min_frequency)
    : min_frequency_(min_frequency) {
  if (min_frequency_ < 1) {
    throw Error(ErrorKind::kModelFormat, "min_frequency must be >= 1");
  }
  merges_.reserve(merges.size());
  for (auto& [left, right] : merges) {
    for (const std::string* side : {&left, &right}) {
      if (side->find_first_of("\t\n\r") != std::string::npos ||
          side->find(kUnitSeparator) != std::string::npos) {
        throw Error(ErrorKind::kModelFormat,
                    "merge symbol contains a forbidden character");
      }
      if (is_single_scalar(*side)) {
        vocab_.insert(*side);
      } else if (!vocab_.contains(*side)) {
        throw Error(ErrorKind::kModelFormat,
                    "merge " + std::to_string(merges_.size()) + " uses '" +
                        *side + "' before any merge produces it");
      }
    }
    std::string key = pair_key(left, right);
    if (ranks_.contains(key)) {
      throw Error(ErrorKind::kModelFormat,
                  "duplicate merge '" + left + "' '" + right + "'");
    }
    ranks_.emplace(std::move(key), merges_.size());
    vocab_.insert(left + right);
    merges_.push_back({std::move(left), std::move(right), merges_.size()});
  }
}

std::optional<std::size_t> BpeModel::rank_of(std::string_view left,
                                             std::string_view right) const {
  auto it = ranks_.find(pair_key(left, right));
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> BpeModel::encode_unit(std::string_view unit) const {
  std::vector<std::string> symbols = unicode::split_scalars(unit);
  while (symbols.size() > 1) {
    std::size_t best = merges_.size();
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      if (auto r = rank_of(symbols[i], symbols[i + 1]); r && *r < best) {
        best = *r;
      }
    }
    if (best == merges_.size()) break;
    const MergeRule& rule = merges_[best];
    std::vector<std::string> next;
    next.reserve(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      if (i + 1 < symbols.size() && symbols[i] == rule.left &&
          symbols[i + 1] == rule.right) {
        next.push_back(symbols[i] + symbols[i + 1]);
        ++i;
      } else {
        next.push_back(std::move(symbols[i]));
      }
    }
    symbols = std::move(next);
  }
  return symbols;
}

std::vector<std::string> BpeModel::encode(const MorphSegmentedText& text) const {
  text.validate();
  std::vector<std::string> tokens;
  for (std::size_t u = 0; u < text.units.size(); ++u) {
    if (u > 0) tokens.emplace_back(kUnitSeparator);
    for (auto& t : encode_unit(text.units[u])) tokens.push_back(std::move(t));
  }
  return tokens;
}

std::string BpeModel::serialize() const {
  std::string out(kHeaderPrefix);
  out += std::to_string(min_frequency_);
  out.push_back('\n');
  for (const auto& m : merges_) {
    out += m.left;
    out.push_back('\t');
    out += m.right;
    out.push_back('\n');
  }
  return out;
}

BpeModel BpeModel::parse(std::string_view text) {
  auto fail = [](std::size_t line, const std::string& what) -> Error {
    return Error(ErrorKind::kModelFormat,
                 "model line " + std::to_string(line) + ": " + what);
  };
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      throw fail(lines.size() + 1, "missing trailing newline");
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty() || !lines[0].starts_with(kHeaderPrefix)) {
    throw fail(1, "expected header 'bpe v1 min_frequency=<k>'");
  }
  std::string_view freq_text = lines[0].substr(kHeaderPrefix.size());
  std::size_t min_frequency = 0;
  auto [ptr, ec] = std::from_chars(freq_text.data(),
                                   freq_text.data() + freq_text.size(),
                                   min_frequency);
  if (ec != std::errc() || ptr != freq_text.data() + freq_text.size() ||
      freq_text.empty() || freq_text[0] == '0' || min_frequency < 1) {
    throw fail(1, "invalid min_frequency '" + std::string(freq_text) + "'");
  }
  std::vector<std::pair<std::string, std::string>> merges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
      throw fail(i + 1, "expected '<left>\\t<right>'");
    }
    std::string_view left = line.substr(0, tab);
    std::string_view right = line.substr(tab + 1);
    if (left.empty() || right.empty()) throw fail(i + 1, "empty merge symbol");
    merges.emplace_back(left, right);
  }
  try {
    return BpeModel(std::move(merges), min_frequency);
  } catch (const Error& e) {
    throw Error(ErrorKind::kModelFormat, e.what());
  }
}

void BpeModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << serialize();
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

BpeModel BpeModel::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

BpeModel train_bpe(std::span<const WeightedUnit> units, std::size_t num_merges,
                   std::size_t min_frequency) {
  if (min_frequency < 1) {
    throw Error(ErrorKind::kInvalidConfig, "min_frequency must be >= 1");
  }
  // Collapse duplicates; std::map keeps iteration order platform-independent.
  std::map<std::string, std::uint64_t> counts;
  for (const auto& wu : units) {
    check_unit(wu.unit);
    if (wu.count > 0) counts[wu.unit] += wu.count;
  }
  if (counts.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "no units to train on");
  }

  struct Word {
    std::vector<std::string> symbols;
    std::uint64_t count;
  };
  std::vector<Word> words;
  words.reserve(counts.size());
  for (const auto& [unit, count] : counts) {
    words.push_back({unicode::split_scalars(unit), count});
  }

  std::vector<std::pair<std::string, std::string>> learned;
  while (learned.size() < num_merges) {
    // Ordered map: the first entry with the max count is the lexicographic
    // tie-break winner. UTF-8 byte order equals scalar-value order.
    std::map<std::pair<std::string_view, std::string_view>, std::uint64_t> pairs;
    for (const Word& w : words) {
      for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
        pairs[{w.symbols[i], w.symbols[i + 1]}] += w.count;
      }
    }
    const std::pair<std::string_view, std::string_view>* best = nullptr;
    std::uint64_t best_count = 0;
    for (const auto& [pair, count] : pairs) {
      if (count > best_count) {
        best = &pair;
        best_count = count;
      }
    }
    if (best == nullptr || best_count < min_frequency) break;

    std::string left(best->first);
    std::string right(best->second);
    std::string merged = left + right;
    for (Word& w : words) {
      std::vector<std::string> next;
      next.reserve(w.symbols.size());
      for (std::size_t i = 0; i < w.symbols.size(); ++i) {
        if (i + 1 < w.symbols.size() && w.symbols[i] == left &&
            w.symbols[i + 1] == right) {
          next.push_back(merged);
          ++i;
        } else {
          next.push_back(std::move(w.symbols[i]));
        }
      }
      w.symbols = std::move(next);
    }
    learned.emplace_back(std::move(left), std::move(right));
  }
  return BpeModel(std::move(learned), min_frequency);
}

BpeModel train_bpe(std::span<const std::string> units, std::size_t num_merges,
                   std::size_t min_frequency) {
  std::vector<WeightedUnit> weighted;
  weighted.reserve(units.size());
  for (const auto& u : units) weighted.push_back({u, 1});
  return train_bpe(std::span<const WeightedUnit>(weighted), num_merges,
                   min_frequency);
}

MorphSegmentedText decode(std::span<const std::string> tokens) {
  MorphSegmentedText text;
  if (tokens.empty()) return text;
  if (tokens.front() == kUnitSeparator || tokens.back() == kUnitSeparator) {
    throw Error(ErrorKind::kLeadingOrTrailingSeparator,
                "token stream starts or ends with the unit separator");
  }
  std::string unit;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (t == kUnitSeparator) {
      if (tokens[i - 1] == kUnitSeparator) {
        throw Error(ErrorKind::kAdjacentSeparators,
                    "adjacent separators at token " + std::to_string(i));
      }
      text.units.push_back(std::move(unit));
      unit.clear();
      continue;
    }
    if (t.empty() || t.find(kUnitSeparator) != std::string::npos) {
      throw Error(ErrorKind::kInvalidUnit,
                  "token " + std::to_string(i) + " is empty or embeds a separator");
    }
    unit += t;
  }
  text.units.push_back(std::move(unit));
  return text;
}

}  // namespace fsmt
