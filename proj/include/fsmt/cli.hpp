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

#ifndef FSMT_CLI_HPP_
#define FSMT_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "fsmt/corpus.hpp"
#include "fsmt/error.hpp"
#include "fsmt/formality.hpp"
#include "fsmt/llm_client.hpp"
#include "fsmt/report.hpp"
#include "fsmt/synth_pipeline.hpp"

namespace fsmt {

enum class Subcommand { kIngest, kTokenize, kGenerate, kEvaluate, kReport };

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct CliConfig {
  Subcommand subcommand = Subcommand::kReport;

  std::optional<LangPair> pair;
  std::optional<Formality> formality;
  PipelineMode mode = PipelineMode::kSupervised;
  Split split = Split::kTest;
  std::optional<std::size_t> shots;
  std::uint64_t seed = 0;

  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> shot_pool;
  std::optional<LangPair> shot_pair;
  std::optional<std::filesystem::path> template_file;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> mock_dir;
  UnknownKeyPolicy mock_unknown = UnknownKeyPolicy::kEcho;
  std::optional<std::string> endpoint;
  std::string llm_model = "gpt-4";
  double temperature = 0.0;
  std::size_t workers = 1;
  double requests_per_minute = 0;
  BackoffPolicy policy;
  std::optional<std::filesystem::path> stats_out;

  std::optional<std::filesystem::path> train;
  std::optional<std::filesystem::path> model_file;
  std::size_t merges = 8000;
  std::size_t min_frequency = 2;
  bool decode = false;

  std::optional<std::filesystem::path> hyp;
  std::optional<std::filesystem::path> test;
  std::optional<std::filesystem::path> comet;
  std::optional<std::filesystem::path> in;
  std::string system = "system";
  ReportFormat format = ReportFormat::kMarkdown;
  std::optional<std::filesystem::path> out;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message)
      : Error(ErrorKind::kUsage, message) {}
};

// Thrown by parse_args for --help; carries the help text.
struct HelpRequested {
  std::string text;
};

std::string usage_synopsis();

// Flags win over values read from --config (flat key=value lines, keys are
// flag names without the leading dashes). Throws UsageError.
CliConfig parse_args(std::span<const std::string> args);

// Runs a validated config. Returns kExitOk or kExitRuntime; errors go to
// `err` with their file/line context.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run, mapping usage problems to kExitUsage.
int cli_main(std::span<const std::string> args, std::ostream& out,
             std::ostream& err);

// $FSMT_DATA_DIR, falling back to the directory configured at build time.
std::filesystem::path data_dir();
std::filesystem::path default_lexicon_path(LangPair pair);

}  // namespace fsmt

#endif  // FSMT_CLI_HPP_
