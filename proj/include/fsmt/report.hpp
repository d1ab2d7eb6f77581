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

#ifndef FSMT_REPORT_HPP_
#define FSMT_REPORT_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fsmt/evaluation.hpp"

namespace fsmt {

enum class Setting { kSupervised, kZeroShot };
enum class ReportFormat { kMarkdown, kCsv };

ReportFormat parse_report_format(std::string_view text);  // md | csv

// Rows ordered formal before informal, then systems in first-seen order,
// then language pairs EN-KO, EN-VI, EN-PT, EN-RU.
struct Report {
  Setting setting = Setting::kSupervised;
  std::vector<MetricsRow> rows;
};

// Throws Error(kDuplicateRowKey) on a repeated (system, pair, formality) and
// Error(kSchema) when a metric is out of range.
Report build_report(std::vector<MetricsRow> rows, Setting setting);

// Markdown lays the language pairs that have rows out as column groups, one
// line per (formality, system); an empty report shows the setting's own pairs
// (EN-KO/EN-VI supervised, EN-PT/EN-RU zero-shot). CSV is one row per MetricsRow with CRLF line ends.
// BLEU prints with 2 decimals, COMET 3, percentages 1; missing COMET is "-".
std::string render_report(const Report& report, ReportFormat format);

inline constexpr std::string_view kRowsCsvHeader =
    "system,lang_pair,formality,bleu,comet,m_acc,c_f";
inline constexpr std::string_view kCometCsvHeader =
    "system,lang_pair,formality,comet";

// RFC 4180 reader; accepts LF or CRLF.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Reads the layout render_report(kCsv) writes; empty text is zero rows.
// Throws Error(kSchema).
std::vector<MetricsRow> parse_rows_csv(std::string_view text,
                                       std::string_view origin = "<csv>");

struct CometScore {
  std::string system;
  LangPair lang_pair = LangPair::kEnKo;
  Formality formality = Formality::kFormal;
  double comet = 0;
};

std::vector<CometScore> parse_comet_csv(std::string_view text,
                                        std::string_view origin = "<csv>");

// Sets comet on the matching rows. Throws Error(kUnmatchedCometRow) when a
// score has no row.
void merge_comet(std::vector<MetricsRow>& rows, std::span<const CometScore> scores);

std::string format_fixed(double value, int decimals);

}  // namespace fsmt

#endif  // FSMT_REPORT_HPP_
