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

#include "fsmt/synth_pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iterator>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "fsmt/error.hpp"

namespace fsmt {

using nlohmann::json;
using nlohmann::ordered_json;

PipelineMode parse_pipeline_mode(std::string_view text) {
  if (text == "supervised") return PipelineMode::kSupervised;
  if (text == "zero-shot") return PipelineMode::kZeroShot;
  throw Error(ErrorKind::kInvalidConfig,
              "unknown mode '" + std::string(text) +
                  "' (expected supervised or zero-shot)");
}

std::string_view pipeline_mode_name(PipelineMode mode) {
  return mode == PipelineMode::kSupervised ? "supervised" : "zero-shot";
}

AcceptanceStats compute_stats(std::span<const GenerationRecord> records) {
  AcceptanceStats stats;
  for (FormalityLabel l : {FormalityLabel::kFormal, FormalityLabel::kInformal,
                           FormalityLabel::kNeutral}) {
    stats.by_label[l] = 0;
  }
  for (const auto& r : records) {
    ++stats.total;
    if (r.accepted) ++stats.accepted;
    ++stats.by_label[r.predicted_label];
  }
  return stats;
}

std::string stats_to_json(const AcceptanceStats& stats) {
  ordered_json doc;
  doc["total"] = stats.total;
  doc["accepted"] = stats.accepted;
  ordered_json labels = ordered_json::object();
  for (FormalityLabel l : {FormalityLabel::kFormal, FormalityLabel::kInformal,
                           FormalityLabel::kNeutral}) {
    auto it = stats.by_label.find(l);
    labels[std::string(formality_label_name(l))] =
        it == stats.by_label.end() ? 0 : it->second;
  }
  doc["by_label"] = std::move(labels);
  return doc.dump();
}

namespace {

GenerationRecord generate_one(const PipelineConfig& config,
                              std::span<const Shot> shots,
                              const Lexicon& lexicon, ChatClient& client,
                              std::size_t index, const std::string& source,
                              bool& transport_failed) {
  GenerationRecord rec;
  rec.index = index;
  rec.source = source;
  rec.lang_pair = config.lang_pair;
  rec.requested_formality = config.formality;
  rec.seed = item_seed(config.seed, index);

  PromptSpec spec;
  spec.lang_pair = config.lang_pair;
  spec.formality = config.formality;
  spec.num_shots = config.n_shots;
  spec.seed = rec.seed;
  spec.template_id = config.template_id;
  rec.prompt_text = render_prompt(spec, shots, source, config.template_text).text;

  ChatRequest request;
  request.model = config.model;
  request.temperature = config.temperature;
  request.messages.push_back({"user", rec.prompt_text});
  try {
    rec.raw_response = client.send(request).content;
  } catch (const Error& e) {
    transport_failed = true;
    rec.error = std::string(error_kind_name(e.kind())) + ": " + e.what();
    return rec;
  }
  try {
    rec.candidate = extract_candidate(rec.raw_response);
  } catch (const Error& e) {
    rec.error = std::string(error_kind_name(e.kind())) + ": " + e.what();
    return rec;
  }
  rec.predicted_label = classify(lexicon, rec.candidate);
  rec.accepted = rec.predicted_label == to_label(config.formality);
  return rec;
}

GenerationResult run_items(const PipelineConfig& config,
                           std::span<const std::string> sources,
                           std::span<const Shot> shots, const Lexicon& lexicon,
                           ChatClient& client) {
  if (lexicon.lang() != target_lang_code(config.lang_pair)) {
    throw Error(ErrorKind::kInvalidConfig,
                "lexicon is for '" + lexicon.lang() + "' but the target is '" +
                    std::string(target_lang_code(config.lang_pair)) + "'");
  }
  validate_template(config.template_text);
  if (config.n_shots > shots.size()) {
    throw Error(ErrorKind::kNTooLarge,
                "requested " + std::to_string(config.n_shots) +
                    " shots but the pool holds " + std::to_string(shots.size()));
  }

  GenerationResult result;
  result.records.resize(sources.size());
  std::vector<char> failed(sources.size(), 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker = [&] {
    for (std::size_t i = next++; i < sources.size(); i = next++) {
      try {
        bool transport_failed = false;
        result.records[i] = generate_one(config, shots, lexicon, client, i,
                                         sources[i], transport_failed);
        failed[i] = transport_failed ? 1 : 0;
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        next = sources.size();
      }
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(config.workers, 1, std::max<std::size_t>(sources.size(), 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  result.transport_failures =
      static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  result.stats = compute_stats(result.records);
  if (result.transport_failures * 2 > sources.size()) {
    throw Error(ErrorKind::kAbortThreshold,
                std::to_string(result.transport_failures) + " of " +
                    std::to_string(sources.size()) +
                    " requests failed at the transport level");
  }
  return result;
}

}  // namespace

GenerationResult run_generation(const PipelineConfig& config, const Corpus& inputs,
                                std::span<const Shot> shots,
                                const Lexicon& lexicon, ChatClient& client) {
  if (config.mode != PipelineMode::kSupervised) {
    throw Error(ErrorKind::kInvalidConfig,
                "zero-shot generation takes a source pool, not a corpus");
  }
  if (inputs.lang_pair != config.lang_pair) {
    throw Error(ErrorKind::kInvalidConfig, "corpus language pair differs from config");
  }
  std::vector<std::string> sources;
  sources.reserve(inputs.segments.size());
  for (const auto& seg : inputs.segments) sources.push_back(seg.source);
  return run_items(config, sources, shots, lexicon, client);
}

GenerationResult run_generation(const PipelineConfig& config,
                                const SourcePool& inputs,
                                std::span<const Shot> shots,
                                const Lexicon& lexicon, ChatClient& client) {
  if (config.mode != PipelineMode::kZeroShot) {
    throw Error(ErrorKind::kInvalidConfig,
                "supervised generation takes an annotated corpus, not a source pool");
  }
  return run_items(config, inputs.sources, shots, lexicon, client);
}

std::vector<GenerationRecord> filter_records(
    std::span<const GenerationRecord> records) {
  std::vector<GenerationRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const GenerationRecord& r) { return r.accepted; });
  return out;
}

std::string record_to_json(const GenerationRecord& r) {
  ordered_json doc;
  doc["index"] = r.index;
  doc["source"] = r.source;
  doc["lang_pair"] = std::string(lang_pair_code(r.lang_pair));
  doc["requested_formality"] = std::string(formality_name(r.requested_formality));
  doc["prompt_text"] = r.prompt_text;
  doc["raw_response"] = r.raw_response;
  doc["candidate"] = r.candidate;
  doc["predicted_label"] = std::string(formality_label_name(r.predicted_label));
  doc["accepted"] = r.accepted;
  doc["seed"] = r.seed;
  doc["error"] = r.error;
  return doc.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

void write_records(std::span<const GenerationRecord> records, std::ostream& out) {
  for (const auto& r : records) out << record_to_json(r) << '\n';
}

void write_records(std::span<const GenerationRecord> records,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  write_records(records, out);
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

namespace {

GenerationRecord record_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::kSchema, "record is not an object");
  auto need = [&](const char* key) -> const json& {
    auto it = doc.find(key);
    if (it == doc.end()) {
      throw Error(ErrorKind::kSchema, std::string("missing \"") + key + "\"");
    }
    return *it;
  };
  auto need_string = [&](const char* key) {
    const json& v = need(key);
    if (!v.is_string()) {
      throw Error(ErrorKind::kSchema, std::string("\"") + key + "\" must be a string");
    }
    return v.get<std::string>();
  };
  auto need_unsigned = [&](const char* key) {
    const json& v = need(key);
    if (!v.is_number_unsigned()) {
      throw Error(ErrorKind::kSchema,
                  std::string("\"") + key + "\" must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  };

  GenerationRecord r;
  r.index = static_cast<std::size_t>(need_unsigned("index"));
  r.source = need_string("source");
  r.prompt_text = need_string("prompt_text");
  r.raw_response = need_string("raw_response");
  r.candidate = need_string("candidate");
  r.seed = need_unsigned("seed");
  const json& accepted = need("accepted");
  if (!accepted.is_boolean()) {
    throw Error(ErrorKind::kSchema, "\"accepted\" must be a boolean");
  }
  r.accepted = accepted.get<bool>();
  try {
    r.lang_pair = parse_lang_pair(need_string("lang_pair"));
    r.requested_formality = parse_formality(need_string("requested_formality"));
    r.predicted_label = parse_formality_label(need_string("predicted_label"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kSchema) throw;
    throw Error(ErrorKind::kSchema, e.what());
  }
  if (doc.contains("error")) r.error = need_string("error");
  if (r.accepted != (r.predicted_label == to_label(r.requested_formality))) {
    throw Error(ErrorKind::kSchema,
                "\"accepted\" disagrees with predicted vs requested formality");
  }
  return r;
}

}  // namespace

std::vector<GenerationRecord> read_records(std::istream& in,
                                           std::string_view origin) {
  std::vector<GenerationRecord> records;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto fail = [&](const std::string& what) {
      return Error(ErrorKind::kSchema,
                   std::string(origin) + ":" + std::to_string(number) + ": " + what);
    };
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded()) throw fail("not valid JSON");
    try {
      records.push_back(record_from_json(doc));
    } catch (const Error& e) {
      throw fail(e.what());
    }
  }
  return records;
}

std::vector<GenerationRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_records(in, path.string());
}

}  // namespace fsmt
