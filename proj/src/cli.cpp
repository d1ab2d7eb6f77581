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

#include "fsmt/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "fsmt/bpe.hpp"
#include "fsmt/evaluation.hpp"
#include "fsmt/prompt.hpp"
#include "fsmt/unicode.hpp"

#ifndef FSMT_DATA_DIR
#define FSMT_DATA_DIR "data"
#endif

namespace fsmt {
namespace {

enum : unsigned {
  kIngestBit = 1u << 0,
  kTokenizeBit = 1u << 1,
  kGenerateBit = 1u << 2,
  kEvaluateBit = 1u << 3,
  kReportBit = 1u << 4,
};

struct FlagSpec {
  std::string_view name;
  std::string_view help;
  bool boolean;
  unsigned subcommands;
};

constexpr FlagSpec kFlags[] = {
    {"pair", "language pair: en-ko, en-vi, en-pt or en-ru", false,
     kIngestBit | kGenerateBit | kEvaluateBit},
    {"formality", "requested register: formal or informal", false,
     kGenerateBit | kEvaluateBit},
    {"mode", "supervised or zero-shot", false,
     kIngestBit | kGenerateBit | kEvaluateBit | kReportBit},
    {"split", "corpus split for ingest: train or test", false, kIngestBit},
    {"input", "input corpus, source pool or segmented text (generate: stdin)", false,
     kIngestBit | kTokenizeBit | kGenerateBit},
    {"shots", "number of in-context shots per prompt", false, kGenerateBit},
    {"seed", "run seed (unsigned 64-bit)", false, kGenerateBit},
    {"shot-pool", "annotated TSV the shots are drawn from", false, kGenerateBit},
    {"shot-pair", "language pair of --shot-pool (defaults to --pair)", false,
     kGenerateBit},
    {"template", "prompt template file", false, kGenerateBit},
    {"lexicon", "formality lexicon JSON", false, kGenerateBit | kEvaluateBit},
    {"mock-dir", "directory of canned chat responses", false, kGenerateBit},
    {"mock-unknown", "reply for unknown mock keys: echo or 404", false,
     kGenerateBit},
    {"endpoint", "chat-completions URL", false, kGenerateBit},
    {"llm-model", "model name sent to the endpoint", false, kGenerateBit},
    {"temperature", "sampling temperature in [0, 2]", false, kGenerateBit},
    {"workers", "concurrent requests", false, kGenerateBit},
    {"rpm", "request-per-minute cap (0 = none)", false, kGenerateBit},
    {"max-attempts", "attempts per request", false, kGenerateBit},
    {"base-delay-ms", "first retry delay", false, kGenerateBit},
    {"max-delay-ms", "retry delay cap", false, kGenerateBit},
    {"backoff-multiplier", "retry delay growth factor", false, kGenerateBit},
    {"stats", "write acceptance stats JSON here", false, kGenerateBit},
    {"train", "segmented text to learn merges from", false, kTokenizeBit},
    {"model", "BPE model file to apply", false, kTokenizeBit},
    {"merges", "number of merges to learn", false, kTokenizeBit},
    {"min-frequency", "stop when the best pair is rarer than this", false,
     kTokenizeBit},
    {"decode", "turn token lines back into unit lines", true, kTokenizeBit},
    {"test", "annotated test TSV", false, kEvaluateBit},
    {"hyp", "system output, one line per test segment", false, kEvaluateBit},
    {"system", "system name for the metrics row", false, kEvaluateBit},
    {"comet", "COMET scores CSV to merge", false, kEvaluateBit | kReportBit},
    {"in", "metrics rows CSV (stdin when absent)", false, kReportBit},
    {"format", "md or csv", false, kEvaluateBit | kReportBit},
    {"out", "output file (stdout when absent)", false,
     kTokenizeBit | kGenerateBit | kEvaluateBit | kReportBit},
};

struct SubcommandSpec {
  Subcommand id;
  std::string_view name;
  std::string_view help;
  unsigned bit;
};

constexpr SubcommandSpec kSubcommands[] = {
    {Subcommand::kIngest, "ingest", "validate and summarize a corpus or source pool",
     kIngestBit},
    {Subcommand::kTokenize, "tokenize", "train or apply morpheme-bounded BPE",
     kTokenizeBit},
    {Subcommand::kGenerate, "generate",
     "generate and filter synthetic formality-controlled translations",
     kGenerateBit},
    {Subcommand::kEvaluate, "evaluate", "score one system: BLEU, %M-Acc, %C-F",
     kEvaluateBit},
    {Subcommand::kReport, "report", "render metric rows as a results table",
     kReportBit},
};

bool is_known_flag(std::string_view name) {
  for (const auto& f : kFlags) {
    if (f.name == name) return true;
  }
  return name == "config";
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read --config file " + path);
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view text = unicode::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(path + ":" + std::to_string(number) + ": expected key=value");
    }
    std::string key(unicode::trim(text.substr(0, eq)));
    std::string value(unicode::trim(text.substr(eq + 1)));
    if (!is_known_flag(key) || key == "config") {
      throw UsageError(path + ":" + std::to_string(number) + ": unknown key '" +
                       key + "'");
    }
    values[key] = value;
  }
  return values;
}

class Values {
 public:
  explicit Values(std::map<std::string, std::string> values)
      : values_(std::move(values)) {}

  std::optional<std::string> get(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::filesystem::path> path(const std::string& name) const {
    auto v = get(name);
    if (!v) return std::nullopt;
    if (v->empty()) throw UsageError("--" + name + " needs a value");
    return std::filesystem::path(*v);
  }

  template <typename T>
  std::optional<T> number(const std::string& name) const {
    auto v = get(name);
    if (!v) return std::nullopt;
    T value{};
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), value);
    if (v->empty() || ec != std::errc() || ptr != v->data() + v->size()) {
      throw UsageError("--" + name + " expects a number, got '" + *v + "'");
    }
    return value;
  }

  template <typename T, typename Fn>
  std::optional<T> parsed(const std::string& name, Fn&& parse) const {
    auto v = get(name);
    if (!v) return std::nullopt;
    try {
      return parse(*v);
    } catch (const Error& e) {
      throw UsageError("--" + name + ": " + e.what());
    }
  }

  bool flag(const std::string& name) const {
    auto v = get(name);
    return v && (*v == "true" || *v == "1" || *v == "yes");
  }

 private:
  std::map<std::string, std::string> values_;
};

void require(const Values& v, const std::string& name, std::string_view sub) {
  if (!v.get(name)) {
    throw UsageError(std::string(sub) + " requires --" + name);
  }
}

CliConfig to_config(Subcommand sub, std::string_view sub_name, const Values& v) {
  CliConfig c;
  c.subcommand = sub;
  c.pair = v.parsed<LangPair>("pair", parse_lang_pair);
  c.formality = v.parsed<Formality>("formality", parse_formality);
  c.mode = v.parsed<PipelineMode>("mode", parse_pipeline_mode)
               .value_or(PipelineMode::kSupervised);
  c.split = v.parsed<Split>("split", parse_split).value_or(Split::kTest);
  c.shots = v.number<std::size_t>("shots");
  c.seed = v.number<std::uint64_t>("seed").value_or(0);
  c.input = v.path("input");
  c.shot_pool = v.path("shot-pool");
  c.shot_pair = v.parsed<LangPair>("shot-pair", parse_lang_pair);
  c.template_file = v.path("template");
  c.lexicon = v.path("lexicon");
  c.mock_dir = v.path("mock-dir");
  if (auto u = v.get("mock-unknown")) {
    if (*u == "echo") {
      c.mock_unknown = UnknownKeyPolicy::kEcho;
    } else if (*u == "404") {
      c.mock_unknown = UnknownKeyPolicy::kNotFound;
    } else {
      throw UsageError("--mock-unknown must be echo or 404");
    }
  }
  c.endpoint = v.get("endpoint");
  c.llm_model = v.get("llm-model").value_or(c.llm_model);
  c.temperature = v.number<double>("temperature").value_or(0.0);
  if (!(c.temperature >= 0.0 && c.temperature <= 2.0)) {
    throw UsageError("--temperature must lie in [0, 2]");
  }
  c.workers = v.number<std::size_t>("workers").value_or(1);
  if (c.workers < 1) throw UsageError("--workers must be >= 1");
  c.requests_per_minute = v.number<double>("rpm").value_or(0.0);
  if (c.requests_per_minute < 0) throw UsageError("--rpm must be >= 0");
  c.policy.max_attempts = v.number<int>("max-attempts").value_or(c.policy.max_attempts);
  c.policy.base_delay_ms =
      v.number<long long>("base-delay-ms").value_or(c.policy.base_delay_ms);
  c.policy.max_delay_ms =
      v.number<long long>("max-delay-ms").value_or(c.policy.max_delay_ms);
  c.policy.multiplier =
      v.number<double>("backoff-multiplier").value_or(c.policy.multiplier);
  try {
    c.policy.validate();
  } catch (const Error& e) {
    throw UsageError(std::string("retry policy: ") + e.what());
  }
  c.stats_out = v.path("stats");
  c.train = v.path("train");
  c.model_file = v.path("model");
  c.merges = v.number<std::size_t>("merges").value_or(c.merges);
  c.min_frequency = v.number<std::size_t>("min-frequency").value_or(c.min_frequency);
  if (c.min_frequency < 1) throw UsageError("--min-frequency must be >= 1");
  c.decode = v.flag("decode");
  c.hyp = v.path("hyp");
  c.test = v.path("test");
  c.comet = v.path("comet");
  c.in = v.path("in");
  c.system = v.get("system").value_or(c.system);
  if (c.system.empty()) throw UsageError("--system must be non-empty");
  c.format = v.parsed<ReportFormat>("format", parse_report_format)
                 .value_or(ReportFormat::kMarkdown);
  c.out = v.path("out");

  switch (sub) {
    case Subcommand::kIngest:
      require(v, "input", sub_name);
      require(v, "pair", sub_name);
      break;
    case Subcommand::kTokenize:
      if (c.train) {
        if (c.model_file || c.decode) {
          throw UsageError("tokenize --train cannot be combined with --model or --decode");
        }
        require(v, "out", sub_name);
      } else if (c.decode) {
        require(v, "input", sub_name);
      } else {
        if (!c.model_file) throw UsageError("tokenize requires --train or --model");
        require(v, "input", sub_name);
      }
      break;
    case Subcommand::kGenerate:
      require(v, "pair", sub_name);
      require(v, "formality", sub_name);
      if (c.mock_dir.has_value() == c.endpoint.has_value()) {
        throw UsageError("generate requires exactly one of --mock-dir or --endpoint");
      }
      break;
    case Subcommand::kEvaluate:
      require(v, "test", sub_name);
      require(v, "hyp", sub_name);
      require(v, "pair", sub_name);
      require(v, "formality", sub_name);
      break;
    case Subcommand::kReport:
      break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Subcommands

class Output {
 public:
  Output(const std::optional<std::filesystem::path>& path, std::ostream& fallback)
      : stream_(&fallback) {
    if (path) {
      file_.open(*path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error(ErrorKind::kIo, "cannot write " + path->string());
      stream_ = &file_;
      path_ = *path;
    }
  }

  std::ostream& stream() { return *stream_; }

  void finish() {
    stream_->flush();
    if (!*stream_) {
      throw Error(ErrorKind::kIo, "write failed" +
                                      (path_.empty() ? std::string()
                                                     : " for " + path_.string()));
    }
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
  std::filesystem::path path_;
};

void run_ingest(const CliConfig& c, std::ostream& out) {
  const LangPair pair = *c.pair;
  if (c.mode == PipelineMode::kZeroShot) {
    const SourcePool pool = load_source_pool(*c.input, pair);
    out << lang_pair_label(pair) << " source pool: " << pool.sources.size()
        << " sentences\n";
    return;
  }
  const Corpus corpus = load_corpus(*c.input, pair, c.split);
  std::size_t formal = 0;
  std::size_t informal = 0;
  std::size_t phrases = 0;
  for (const auto& seg : corpus.segments) {
    formal += seg.formal_ref.has_annotations() ? 1 : 0;
    informal += seg.informal_ref.has_annotations() ? 1 : 0;
    phrases += seg.formal_ref.phrases.size() + seg.informal_ref.phrases.size();
  }
  out << lang_pair_label(pair) << ' '
      << (c.split == Split::kTrain ? "train" : "test")
      << " corpus: " << corpus.segments.size() << " segments, " << formal
      << " with formal phrases, " << informal << " with informal phrases, "
      << phrases << " phrases total\n";
}

void run_tokenize(const CliConfig& c, std::ostream& out) {
  if (c.train) {
    std::vector<std::string> units;
    for (const auto& line : read_lines(*c.train)) {
      for (auto& u : MorphSegmentedText::from_whitespace(line).units) {
        units.push_back(std::move(u));
      }
    }
    const BpeModel model = train_bpe(units, c.merges, c.min_frequency);
    model.save(*c.out);
    out << "learned " << model.merges().size() << " merges\n";
    return;
  }
  Output sink(c.out, out);
  const auto lines = read_lines(*c.input);
  if (c.decode) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::vector<std::string> tokens;
      std::istringstream ss(lines[i]);
      for (std::string t; ss >> t;) tokens.push_back(t);
      MorphSegmentedText text;
      try {
        text = decode(tokens);
      } catch (const Error& e) {
        throw Error(e.kind(), c.input->string() + ":" + std::to_string(i + 1) +
                                  ": " + e.what());
      }
      for (std::size_t u = 0; u < text.units.size(); ++u) {
        if (u > 0) sink.stream() << ' ';
        sink.stream() << text.units[u];
      }
      sink.stream() << '\n';
    }
  } else {
    const BpeModel model = BpeModel::load(*c.model_file);
    for (const auto& line : lines) {
      const auto tokens = model.encode(MorphSegmentedText::from_whitespace(line));
      for (std::size_t t = 0; t < tokens.size(); ++t) {
        if (t > 0) sink.stream() << ' ';
        sink.stream() << tokens[t];
      }
      sink.stream() << '\n';
    }
  }
  sink.finish();
}

Lexicon resolve_lexicon(const CliConfig& c, LangPair pair) {
  return load_lexicon(c.lexicon ? *c.lexicon : default_lexicon_path(pair));
}

void run_generate(const CliConfig& c, std::ostream& out, std::ostream& err) {
  const LangPair pair = *c.pair;
  const Formality formality = *c.formality;

  // Build the client first so a bad mock dir or endpoint fails before any
  // other file is touched.
  std::shared_ptr<ChatTransport> transport;
  if (c.mock_dir) {
    transport = std::make_shared<MockTransport>(*c.mock_dir, c.mock_unknown);
  } else {
    const char* key = std::getenv("FSMT_API_KEY");
    transport = std::make_shared<HttpTransport>(*c.endpoint, key ? key : "");
  }
  auto err_mu = std::make_shared<std::mutex>();
  ClientOptions options;
  options.policy = c.policy;
  options.requests_per_minute = c.requests_per_minute;
  options.logger = [&err, err_mu](std::string_view msg) {
    std::lock_guard lock(*err_mu);
    err << "fsmt: " << msg << '\n';
  };
  ChatClient client(transport, std::move(options));

  const Lexicon lexicon = resolve_lexicon(c, pair);

  PipelineConfig pc;
  pc.mode = c.mode;
  pc.lang_pair = pair;
  pc.formality = formality;
  pc.seed = c.seed;
  pc.model = c.llm_model;
  pc.temperature = c.temperature;
  pc.workers = c.workers;
  if (c.template_file) {
    pc.template_text = read_file(*c.template_file);
    pc.template_id = c.template_file->stem().string();
  }

  std::optional<Corpus> corpus;
  std::optional<SourcePool> pool;
  if (c.input) {
    if (c.mode == PipelineMode::kSupervised) {
      corpus = load_corpus(*c.input, pair, Split::kTrain);
    } else {
      pool = load_source_pool(*c.input, pair);
    }
  } else if (c.mode == PipelineMode::kSupervised) {
    corpus = read_corpus(std::cin, pair, Split::kTrain, "<stdin>");
  } else {
    pool = read_source_pool(std::cin, pair, "<stdin>");
  }

  std::vector<Shot> shots;
  if (c.shot_pool) {
    shots = shots_from_corpus(
        load_corpus(*c.shot_pool, c.shot_pair.value_or(pair), Split::kTrain),
        formality);
  } else if (corpus) {
    shots = shots_from_corpus(*corpus, formality);
  }
  // Zero-shot runs without a shot pool default to bare prompts.
  pc.n_shots = c.shots.value_or(shots.empty() && c.mode == PipelineMode::kZeroShot
                                    ? 0
                                    : kDefaultShots);

  const GenerationResult result =
      corpus ? run_generation(pc, *corpus, shots, lexicon, client)
             : run_generation(pc, *pool, shots, lexicon, client);

  Output sink(c.out, out);
  write_records(result.records, sink.stream());
  sink.finish();

  const std::string stats = stats_to_json(result.stats);
  if (c.stats_out) {
    std::ofstream s(*c.stats_out, std::ios::binary | std::ios::trunc);
    if (!(s << stats << '\n')) {
      throw Error(ErrorKind::kIo, "cannot write " + c.stats_out->string());
    }
  }
  err << "fsmt: stats " << stats << '\n';
}

Setting setting_of(const CliConfig& c) {
  return c.mode == PipelineMode::kSupervised ? Setting::kSupervised
                                             : Setting::kZeroShot;
}

void run_evaluate(const CliConfig& c, std::ostream& out) {
  const Corpus corpus = load_corpus(*c.test, *c.pair, Split::kTest);
  const std::vector<std::string> hyps = read_lines(*c.hyp);
  const Lexicon lexicon = resolve_lexicon(c, *c.pair);
  EvalInput input{corpus, hyps, *c.formality};
  std::vector<MetricsRow> rows;
  try {
    rows.push_back(evaluate_system(c.system, input, lexicon));
  } catch (const Error& e) {
    throw Error(e.kind(), c.hyp->string() + ": " + e.what());
  }
  if (c.comet) {
    merge_comet(rows, parse_comet_csv(read_file(*c.comet), c.comet->string()));
  }
  Output sink(c.out, out);
  sink.stream() << render_report(build_report(std::move(rows), setting_of(c)),
                                 c.format);
  sink.finish();
}

void run_report(const CliConfig& c, std::ostream& out) {
  std::string text;
  std::string origin = "<stdin>";
  if (c.in) {
    text = read_file(*c.in);
    origin = c.in->string();
  } else {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  }
  std::vector<MetricsRow> rows = parse_rows_csv(text, origin);
  if (c.comet) {
    merge_comet(rows, parse_comet_csv(read_file(*c.comet), c.comet->string()));
  }
  Output sink(c.out, out);
  sink.stream() << render_report(build_report(std::move(rows), setting_of(c)),
                                 c.format);
  sink.finish();
}

}  // namespace

std::string usage_synopsis() {
  return "usage: fsmt {ingest|tokenize|generate|evaluate|report} [--flags] "
         "[--config FILE]  (fsmt <subcommand> --help for details)";
}

CliConfig parse_args(std::span<const std::string> args) {
  CLI::App app{"Formality-sensitive MT data toolkit", "fsmt"};
  app.require_subcommand(1, 1);

  struct Bound {
    const SubcommandSpec* spec;
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::string config;
  };
  std::vector<Bound> bound(std::size(kSubcommands));
  for (std::size_t i = 0; i < std::size(kSubcommands); ++i) {
    const auto& spec = kSubcommands[i];
    Bound& b = bound[i];
    b.spec = &spec;
    b.app = app.add_subcommand(std::string(spec.name), std::string(spec.help));
    b.app->add_option("--config", b.config, "flat key=value defaults file");
    for (const auto& f : kFlags) {
      if ((f.subcommands & spec.bit) == 0) continue;
      const std::string name(f.name);
      if (f.boolean) {
        b.options[name] = b.app->add_flag("--" + name)->description(std::string(f.help));
      } else {
        b.options[name] =
            b.app->add_option("--" + name, b.values[name], std::string(f.help));
      }
    }
  }

  if (!args.empty() && !args.front().starts_with('-') &&
      std::none_of(std::begin(kSubcommands), std::end(kSubcommands),
                   [&](const SubcommandSpec& s) { return s.name == args.front(); })) {
    throw UsageError("unknown subcommand '" + args.front() + "'");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    for (const auto& b : bound) {
      if (b.app->parsed()) throw HelpRequested{b.app->help()};
    }
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    if (msg.empty()) msg = "invalid arguments";
    throw UsageError(msg);
  }

  for (const auto& b : bound) {
    if (!b.app->parsed()) continue;
    std::map<std::string, std::string> merged;
    if (!b.config.empty()) merged = read_config_file(b.config);
    for (const auto& [name, opt] : b.options) {
      if (opt->count() == 0) continue;
      auto it = b.values.find(name);
      merged[name] = it == b.values.end() ? "true" : it->second;
    }
    return to_config(b.spec->id, b.spec->name, Values(std::move(merged)));
  }
  throw UsageError("missing subcommand");
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.subcommand) {
      case Subcommand::kIngest: run_ingest(config, out); break;
      case Subcommand::kTokenize: run_tokenize(config, out); break;
      case Subcommand::kGenerate: run_generate(config, out, err); break;
      case Subcommand::kEvaluate: run_evaluate(config, out); break;
      case Subcommand::kReport: run_report(config, out); break;
    }
  } catch (const Error& e) {
    err << "fsmt: " << error_kind_name(e.kind()) << ": " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "fsmt: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cli_main(std::span<const std::string> args, std::ostream& out,
             std::ostream& err) {
  CliConfig config;
  try {
    config = parse_args(args);
  } catch (const HelpRequested& help) {
    out << help.text;
    return kExitOk;
  } catch (const UsageError& e) {
    err << "fsmt: " << e.what() << '\n' << usage_synopsis() << '\n';
    return kExitUsage;
  }
  return run(config, out, err);
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("FSMT_DATA_DIR"); env && *env) {
    return env;
  }
  return FSMT_DATA_DIR;
}

std::filesystem::path default_lexicon_path(LangPair pair) {
  return data_dir() / "lexicons" / (std::string(target_lang_code(pair)) + ".json");
}

}  // namespace fsmt
