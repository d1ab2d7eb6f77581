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

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fsmt {
namespace {

namespace fs = std::filesystem;

const std::string kData = FSMT_TEST_DATA;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("fsmt_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliConfig parse(std::vector<std::string> args) { return parse_args(args); }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_main(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(ParseArgs, GenerateExample) {
  const CliConfig c = parse({"generate", "--pair", "en-ko", "--formality", "formal",
                             "--seed", "7", "--mock-dir", "m/"});
  EXPECT_EQ(c.subcommand, Subcommand::kGenerate);
  EXPECT_EQ(c.pair, LangPair::kEnKo);
  EXPECT_EQ(c.formality, Formality::kFormal);
  EXPECT_EQ(c.seed, 7u);
  ASSERT_TRUE(c.mock_dir.has_value());
  EXPECT_EQ(*c.mock_dir, fs::path("m/"));
  EXPECT_FALSE(c.endpoint.has_value());
}

TEST(ParseArgs, EvaluateWithoutHypIsUsageError) {
  EXPECT_THROW(parse({"evaluate"}), UsageError);
  EXPECT_THROW(parse({"evaluate", "--test", "t.tsv", "--pair", "en-ko", "--formality",
                      "formal"}),
               UsageError);
}

TEST(ParseArgs, ReportCsv) {
  const CliConfig c = parse({"report", "--format", "csv"});
  EXPECT_EQ(c.subcommand, Subcommand::kReport);
  EXPECT_EQ(c.format, ReportFormat::kCsv);
}

TEST(ParseArgs, RejectsBadValues) {
  EXPECT_THROW(parse({}), UsageError);
  EXPECT_THROW(parse({"translate"}), UsageError);
  EXPECT_THROW(parse({"report", "--format", "xml"}), UsageError);
  EXPECT_THROW(parse({"report", "--pair", "en-ko"}), UsageError);
  EXPECT_THROW(parse({"generate", "--pair", "en-fr", "--formality", "formal",
                      "--mock-dir", "m"}),
               UsageError);
  EXPECT_THROW(parse({"generate", "--pair", "en-ko", "--formality", "formal", "--seed",
                      "-1", "--mock-dir", "m"}),
               UsageError);
  EXPECT_THROW(parse({"generate", "--pair", "en-ko", "--formality", "formal"}),
               UsageError);
  EXPECT_THROW(parse({"generate", "--pair", "en-ko", "--formality", "formal",
                      "--mock-dir", "m", "--endpoint", "http://x"}),
               UsageError);
}

TEST(ParseArgs, SeedCoversFullRange) {
  const CliConfig c = parse({"generate", "--pair", "en-ru", "--formality", "informal",
                             "--seed", "18446744073709551615", "--endpoint",
                             "http://localhost:1/v1/chat/completions"});
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
  EXPECT_EQ(c.formality, Formality::kInformal);
}

TEST(ParseArgs, ConfigFileLosesToFlags) {
  TempDir dir;
  std::ofstream(dir / "run.cfg") << "# defaults\npair=en-vi\nformality=informal\n"
                                    "seed=3\nshots=2\nmock-dir=canned\n";
  const CliConfig c = parse({"generate", "--config", (dir / "run.cfg").string(), "--seed", "9"});
  EXPECT_EQ(c.pair, LangPair::kEnVi);
  EXPECT_EQ(c.formality, Formality::kInformal);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.shots, 2u);
  EXPECT_EQ(*c.mock_dir, fs::path("canned"));
}

TEST(ParseArgs, ConfigFileErrors) {
  TempDir dir;
  std::ofstream(dir / "bad.cfg") << "colour=blue\n";
  EXPECT_THROW(parse({"report", "--config", (dir / "bad.cfg").string()}), UsageError);
  EXPECT_THROW(parse({"report", "--config", (dir / "missing.cfg").string()}), UsageError);
}

TEST(Run, EvaluateIdenticalHypotheses) {
  const Outcome o = run_main({"evaluate", "--test", kData + "/ko_test.tsv", "--hyp",
                              kData + "/ko_test.formal.hyp", "--pair", "en-ko",
                              "--formality", "formal"});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("| 100.00 |"), std::string::npos) << o.out;
}

TEST(Run, EvaluateLengthMismatchNamesFile) {
  TempDir dir;
  std::ofstream(dir / "short.hyp") << "하나\n";
  const Outcome o = run_main({"evaluate", "--test", kData + "/ko_test.tsv", "--hyp",
                              (dir / "short.hyp").string(), "--pair", "en-ko",
                              "--formality", "formal"});
  EXPECT_EQ(o.code, kExitRuntime);
  EXPECT_NE(o.err.find("LengthMismatch"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("short.hyp"), std::string::npos) << o.err;
}

TEST(Run, GenerateMissingMockDir) {
  const Outcome o = run_main({"generate", "--pair", "en-ko", "--formality", "formal",
                              "--seed", "7", "--input", kData + "/ko_train.tsv",
                              "--mock-dir", "/nonexistent/fsmt-mock-dir"});
  EXPECT_EQ(o.code, kExitRuntime);
  EXPECT_NE(o.err.find("/nonexistent/fsmt-mock-dir"), std::string::npos) << o.err;
  EXPECT_TRUE(o.out.empty());
}

TEST(Run, GenerateReplaysGolden) {
  TempDir dir;
  const Outcome o = run_main({"generate", "--pair", "en-ko", "--formality", "formal",
                              "--seed", "7", "--input", kData + "/ko_train.tsv",
                              "--mock-dir", kData + "/mock_ko_seed7", "--mock-unknown",
                              "404", "--base-delay-ms", "1", "--out",
                              (dir / "gen.jsonl").string(), "--stats",
                              (dir / "stats.json").string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(slurp(dir / "gen.jsonl"), slurp(kData + "/generate_seed7.jsonl"));
  EXPECT_EQ(slurp(dir / "stats.json"), slurp(kData + "/generate_seed7.stats.json"));
  EXPECT_NE(o.err.find("fsmt: stats {\"total\":8,\"accepted\":5"), std::string::npos);
}

TEST(Run, ReportFromRowsFile) {
  const Outcome o = run_main({"report", "--in", kData + "/table1.csv"});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("26.60"), std::string::npos);
}

TEST(Run, ReportWithCometImport) {
  TempDir dir;
  std::ofstream(dir / "rows.csv") << "system,lang_pair,formality,bleu,comet,m_acc,c_f\n"
                                     "Ours,EN-KO,formal,26.60,-,87.0,100.0\n";
  std::ofstream(dir / "comet.csv") << "system,lang_pair,formality,comet\n"
                                      "Ours,EN-KO,formal,0.727\n";
  const Outcome o = run_main({"report", "--in", (dir / "rows.csv").string(), "--comet",
                              (dir / "comet.csv").string(), "--format", "csv", "--out",
                              (dir / "out.csv").string()});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(o.out.empty());
  EXPECT_NE(slurp(dir / "out.csv").find("Ours,EN-KO,formal,26.60,0.727,87.0,100.0\r\n"),
            std::string::npos);
}

TEST(Run, TokenizeTrainEncodeDecode) {
  TempDir dir;
  std::ofstream(dir / "seg.txt") << "new est\nwid est\nlow est\nlow er\n";
  ASSERT_EQ(run_main({"tokenize", "--train", (dir / "seg.txt").string(), "--out",
                      (dir / "m.bpe").string(), "--merges", "10"})
                .code,
            kExitOk);
  EXPECT_EQ(slurp(dir / "m.bpe").rfind("bpe v1 min_frequency=2\ne\ts\nes\tt\n", 0), 0u);
  const Outcome enc = run_main({"tokenize", "--model", (dir / "m.bpe").string(), "--input",
                                (dir / "seg.txt").string(), "--out",
                                (dir / "enc.txt").string()});
  ASSERT_EQ(enc.code, kExitOk) << enc.err;
  const Outcome dec = run_main({"tokenize", "--decode", "--input", (dir / "enc.txt").string()});
  ASSERT_EQ(dec.code, kExitOk) << dec.err;
  EXPECT_EQ(dec.out, slurp(dir / "seg.txt"));
}

TEST(Run, IngestSummarizes) {
  const Outcome o = run_main({"ingest", "--input", kData + "/ko_test.tsv", "--pair", "en-ko"});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("5 segments"), std::string::npos) << o.out;
  TempDir dir;
  std::ofstream(dir / "bad.tsv") << "a\tb\t[F]c\td\n";
  const Outcome bad = run_main({"ingest", "--input", (dir / "bad.tsv").string(), "--pair",
                                "en-ko"});
  EXPECT_EQ(bad.code, kExitRuntime);
  EXPECT_NE(bad.err.find("bad.tsv:1"), std::string::npos) << bad.err;
  EXPECT_NE(bad.err.find("UnbalancedMarkup"), std::string::npos) << bad.err;
}

TEST(Run, UsageErrorsExitTwoWithSynopsis) {
  const Outcome o = run_main({"evaluate"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find(usage_synopsis()), std::string::npos);
  EXPECT_EQ(run_main({"report", "--help"}).code, kExitOk);
}

// Drives the installed binary so real process exit codes are checked.
int exit_code_of(const std::string& args) {
  const std::string cmd = std::string(FSMT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(exit_code_of("report --in " + kData + "/table2.csv --mode zero-shot"), 0);
  EXPECT_EQ(exit_code_of("report --in /nonexistent/rows.csv"), 1);
  EXPECT_EQ(exit_code_of("report --bogus"), 2);
  EXPECT_EQ(exit_code_of(""), 2);
}

TEST(Binary, MockModeNeedsNoNetwork) {
  if (std::system("unshare -n true >/dev/null 2>&1") != 0) {
    GTEST_SKIP() << "cannot create a network namespace here";
  }
  TempDir dir;
  const std::string cmd =
      "unshare -n " + std::string(FSMT_CLI_PATH) +
      " generate --pair en-ko --formality formal --seed 7 --input " + kData +
      "/ko_train.tsv --mock-dir " + kData + "/mock_ko_seed7 --mock-unknown 404 "
      "--base-delay-ms 1 --out " + (dir / "gen.jsonl").string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_EQ(slurp(dir / "gen.jsonl"), slurp(kData + "/generate_seed7.jsonl"));
}

}  // namespace
}  // namespace fsmt
