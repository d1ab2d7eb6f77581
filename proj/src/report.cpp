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

#include "fsmt/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include "fsmt/error.hpp"

namespace fsmt {

ReportFormat parse_report_format(std::string_view text) {
  if (text == "md" || text == "markdown") return ReportFormat::kMarkdown;
  if (text == "csv") return ReportFormat::kCsv;
  throw Error(ErrorKind::kInvalidConfig,
              "unknown format '" + std::string(text) + "' (expected md or csv)");
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string out = buf;
  // Values that round to zero print unsigned.
  if (out.starts_with('-') && out.find_first_not_of("0.", 1) == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

namespace {

using RowKey = std::tuple<std::string, LangPair, Formality>;

RowKey key_of(const MetricsRow& r) { return {r.system, r.lang_pair, r.formality}; }

std::string describe(const MetricsRow& r) {
  return r.system + "/" + std::string(lang_pair_label(r.lang_pair)) + "/" +
         std::string(formality_name(r.formality));
}

bool in_percent_range(double v) { return v >= 0.0 && v <= 100.0; }

int pair_rank(LangPair p) {
  for (int i = 0; i < 4; ++i) {
    if (kAllLangPairs[i] == p) return i;
  }
  return 4;
}

}  // namespace

Report build_report(std::vector<MetricsRow> rows, Setting setting) {
  std::set<RowKey> seen;
  std::map<std::string, std::size_t> system_order;
  for (const auto& r : rows) {
    if (!seen.insert(key_of(r)).second) {
      throw Error(ErrorKind::kDuplicateRowKey, "duplicate row " + describe(r));
    }
    if (!in_percent_range(r.bleu) || !in_percent_range(r.m_acc_pct) ||
        !in_percent_range(r.c_f_pct)) {
      throw Error(ErrorKind::kSchema, "metric outside [0, 100] in row " + describe(r));
    }
    system_order.emplace(r.system, system_order.size());
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const MetricsRow& a, const MetricsRow& b) {
                     return std::make_tuple(a.formality, system_order.at(a.system),
                                            pair_rank(a.lang_pair)) <
                            std::make_tuple(b.formality, system_order.at(b.system),
                                            pair_rank(b.lang_pair));
                   });
  return Report{setting, std::move(rows)};
}

namespace {

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(text);
  }
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string comet_cell(const std::optional<double>& comet) {
  return comet ? format_fixed(*comet, 3) : "-";
}

std::string render_csv(const Report& report) {
  std::string out(kRowsCsvHeader);
  out += "\r\n";
  for (const auto& r : report.rows) {
    out += csv_field(r.system);
    out += ',';
    out += lang_pair_label(r.lang_pair);
    out += ',';
    out += formality_name(r.formality);
    out += ',';
    out += format_fixed(r.bleu, 2);
    out += ',';
    out += comet_cell(r.comet);
    out += ',';
    out += format_fixed(r.m_acc_pct, 1);
    out += ',';
    out += format_fixed(r.c_f_pct, 1);
    out += "\r\n";
  }
  return out;
}

std::string md_cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string render_markdown(const Report& report) {
  // Column groups: pairs that have rows, or the setting's own pairs when the
  // report is empty.
  const bool supervised = report.setting == Setting::kSupervised;
  std::vector<LangPair> pairs;
  for (LangPair p : kAllLangPairs) {
    const bool wanted =
        report.rows.empty()
            ? supervised == (p == LangPair::kEnKo || p == LangPair::kEnVi)
            : std::any_of(report.rows.begin(), report.rows.end(),
                          [p](const MetricsRow& r) { return r.lang_pair == p; });
    if (wanted) pairs.push_back(p);
  }
  std::string out = "| Formality (";
  out += report.setting == Setting::kSupervised ? "supervised" : "zero-shot";
  out += ") | System |";
  for (LangPair p : pairs) {
    const std::string label(lang_pair_label(p));
    for (const char* metric : {" BLEU", " COMET", " %M-Acc", " %C-F"}) {
      out += ' ';
      out += label;
      out += metric;
      out += " |";
    }
  }
  out += "\n|---|---|";
  for (std::size_t i = 0; i < pairs.size() * 4; ++i) out += "---:|";
  out += '\n';

  // Rows are already grouped by (formality, system); walk the groups.
  for (std::size_t i = 0; i < report.rows.size();) {
    const MetricsRow& head = report.rows[i];
    std::map<LangPair, const MetricsRow*> by_pair;
    std::size_t j = i;
    for (; j < report.rows.size() && report.rows[j].formality == head.formality &&
           report.rows[j].system == head.system;
         ++j) {
      by_pair[report.rows[j].lang_pair] = &report.rows[j];
    }
    out += "| ";
    out += head.formality == Formality::kFormal ? "Formal" : "Informal";
    out += " | ";
    out += md_cell(head.system);
    out += " |";
    for (LangPair p : pairs) {
      auto it = by_pair.find(p);
      if (it == by_pair.end()) {
        out += "  |  |  |  |";
        continue;
      }
      const MetricsRow& r = *it->second;
      for (const std::string& cell :
           {format_fixed(r.bleu, 2), comet_cell(r.comet),
            format_fixed(r.m_acc_pct, 1), format_fixed(r.c_f_pct, 1)}) {
        out += ' ';
        out += cell;
        out += " |";
      }
    }
    out += '\n';
    i = j;
  }
  return out;
}

}  // namespace

std::string render_report(const Report& report, ReportFormat format) {
  return format == ReportFormat::kCsv ? render_csv(report) : render_markdown(report);
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started && field.empty()) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      end_record();
      ++i;
    } else if (c == '\n') {
      end_record();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw Error(ErrorKind::kSchema, "unterminated quoted CSV field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

namespace {

double parse_number(std::string_view text, const char* what) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::kSchema,
                std::string(what) + " is not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::vector<std::string>> checked_csv(std::string_view text,
                                                  std::string_view header,
                                                  std::string_view origin) {
  auto records = parse_csv(text);
  auto expected = parse_csv(header).front();
  if (records.empty() || records.front() != expected) {
    throw Error(ErrorKind::kSchema, std::string(origin) + ": expected header '" +
                                        std::string(header) + "'");
  }
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != expected.size()) {
      throw Error(ErrorKind::kSchema,
                  std::string(origin) + ":" + std::to_string(i + 1) + ": expected " +
                      std::to_string(expected.size()) + " fields");
    }
  }
  return records;
}

template <typename Fn>
auto at_line(std::string_view origin, std::size_t line, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(ErrorKind::kSchema,
                std::string(origin) + ":" + std::to_string(line) + ": " + e.what());
  }
}

}  // namespace

std::vector<MetricsRow> parse_rows_csv(std::string_view text,
                                       std::string_view origin) {
  std::vector<MetricsRow> rows;
  if (text.empty()) return rows;
  auto records = checked_csv(text, kRowsCsvHeader, origin);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    rows.push_back(at_line(origin, i + 1, [&] {
      MetricsRow row;
      row.system = f[0];
      row.lang_pair = parse_lang_pair(f[1]);
      row.formality = parse_formality(f[2]);
      row.bleu = parse_number(f[3], "bleu");
      if (f[4] != "-" && !f[4].empty()) row.comet = parse_number(f[4], "comet");
      row.m_acc_pct = parse_number(f[5], "m_acc");
      row.c_f_pct = parse_number(f[6], "c_f");
      return row;
    }));
  }
  return rows;
}

std::vector<CometScore> parse_comet_csv(std::string_view text,
                                        std::string_view origin) {
  auto records = checked_csv(text, kCometCsvHeader, origin);
  std::vector<CometScore> scores;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i];
    scores.push_back(at_line(origin, i + 1, [&] {
      return CometScore{f[0], parse_lang_pair(f[1]), parse_formality(f[2]),
                        parse_number(f[3], "comet")};
    }));
  }
  return scores;
}

void merge_comet(std::vector<MetricsRow>& rows, std::span<const CometScore> scores) {
  for (const auto& s : scores) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const MetricsRow& r) {
      return r.system == s.system && r.lang_pair == s.lang_pair &&
             r.formality == s.formality;
    });
    if (it == rows.end()) {
      throw Error(ErrorKind::kUnmatchedCometRow,
                  "COMET score for " + s.system + "/" +
                      std::string(lang_pair_label(s.lang_pair)) + "/" +
                      std::string(formality_name(s.formality)) +
                      " matches no metrics row");
    }
    it->comet = s.comet;
  }
}

}  // namespace fsmt
