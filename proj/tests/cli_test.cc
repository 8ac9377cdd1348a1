// Copyright 2026 The Pardaz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end tests of the pardaz binary.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <string>

#include "pardaz/model.h"
#include "pardaz/pipeline_config.h"
#include "temp_dir.h"

namespace pardaz {
namespace {

using testing::read_file;
using testing::TempDir;
using testing::write_file;

struct CliRun {
  int status = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  CliRun run(const std::string& args) {
    const auto out = dir_ / "stdout";
    const auto err = dir_ / "stderr";
    const std::string cmd = std::string("'") + PARDAZ_CLI_PATH + "' " + args + " >'" +
                            out.string() + "' 2>'" + err.string() + "'";
    const int raw = std::system(cmd.c_str());
    CliRun r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = read_file(out);
    r.err = read_file(err);
    return r;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  TempDir dir_;
};

TEST_F(CliTest, VersionReportsRuleHashAndModelFormat) {
  const CliRun r = run("--version");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("rule_hash=" + rule_file_hash({})), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("model_format=" + std::to_string(kModelFormatVersion)),
            std::string::npos);
}

TEST_F(CliTest, UnknownFlagIsUsageError) {
  const CliRun r = run("bleu --hyp a --ref b --frobnicate");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("--frobnicate"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
}

TEST_F(CliTest, MissingSubcommandIsUsageError) {
  EXPECT_EQ(run("").status, 2);
}

TEST_F(CliTest, BleuOfIdenticalFilesIsHundred) {
  write_file(dir_ / "h.txt", "من به خانه رفتم .\nکتاب خوب است\n");
  const CliRun r = run("bleu --hyp " + path("h.txt") + " --ref " + path("h.txt"));
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("100.0"), std::string::npos) << r.out;
  const CliRun s =
      run("bleu --score-only --hyp " + path("h.txt") + " --ref " + path("h.txt"));
  EXPECT_EQ(s.out, "100.0\n");
}

TEST_F(CliTest, MissingInputIsRuntimeError) {
  const CliRun r = run("bleu --hyp " + path("nope.txt") + " --ref " + path("nope.txt"));
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.err.rfind("pardaz: error: io: ", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
}

TEST_F(CliTest, BreakIsDeterministic) {
  write_file(dir_ / "std.txt", "تو را دیدم\nبه تهران می‌روم\nکم است\nآنها خوشحال هستند\n");
  const std::string base = "break --in " + path("std.txt") + " --seed 7 --p 0.1";
  const CliRun a = run(base + " --out " + path("a.txt") + " --trace " + path("a.trace"));
  const CliRun b = run(base + " --out " + path("b.txt") + " --trace " + path("b.trace"));
  ASSERT_EQ(a.status, 0) << a.err;
  ASSERT_EQ(b.status, 0) << b.err;
  EXPECT_EQ(read_file(dir_ / "a.txt"), read_file(dir_ / "b.txt"));
  EXPECT_EQ(read_file(dir_ / "a.trace"), read_file(dir_ / "b.trace"));
  EXPECT_NE(a.err.find("# seed=7"), std::string::npos) << a.err;
  EXPECT_NE(a.err.find("# rule_hash="), std::string::npos);

  const CliRun all = run("break --in " + path("std.txt") + " --p 0");
  EXPECT_EQ(all.out, "تورو دیدم\nبه تهرون میرم\nکمه\nاونا خوشحالند\n");
}

TEST_F(CliTest, NormalizeTokenizes) {
  write_file(dir_ / "raw.txt", "كتاب‌ها را خواندم، 12 تا!\n");
  const CliRun r = run("normalize --in " + path("raw.txt"));
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "کتاب‌ها را خواندم ، ۱۲ تا !\n");
}

TEST_F(CliTest, PipelineGenerateTrainStandardize) {
  std::string text;
  for (int i = 0; i < 200; ++i) text += "تو را دیدم\nبه تهران رفتم\nکم است\n";
  write_file(dir_ / "std.txt", text);
  const CliRun g = run("generate --in " + path("std.txt") + " --out-prefix " +
                    path("c") + " --seed 3");
  ASSERT_EQ(g.status, 0) << g.err;
  EXPECT_NE(read_file(dir_ / "c.meta").find("sentences=600"), std::string::npos);

  const CliRun t = run("train --corpus " + path("c") + " --out " + path("m.model"));
  ASSERT_EQ(t.status, 0) << t.err;

  write_file(dir_ / "coll.txt", "تورو دیدم\nکمه\n");
  const CliRun s = run("standardize --system model --model-file " + path("m.model") +
                    " --in " + path("coll.txt"));
  ASSERT_EQ(s.status, 0) << s.err;
  EXPECT_EQ(s.out, "تو را دیدم\nکم است\n");

  const CliRun rules = run("standardize --system rules --freq " + path("std.txt") +
                           " --in " + path("coll.txt"));
  ASSERT_EQ(rules.status, 0) << rules.err;
  EXPECT_EQ(rules.out, "تو را دیدم\nکم است\n");
}

TEST_F(CliTest, EvalWritesReport) {
  write_file(dir_ / "dev.tsv",
             "دیروز به تهرون رفتم .\tدیروز به تهران رفتم .\tدیروز به تهران رفتم .\tx\n"
             "این کتاب کمه و خوبه\tاین کتاب کم است و خوب است\tاین کتاب کم است و خوب "
             "است\tx\n");
  write_file(dir_ / "freq.txt", "دیروز به تهران رفتم .\nاین کتاب کم است و خوب است\n");
  const CliRun r = run("eval --data " + path("dev.tsv") + " --split dev --system rules" +
                       " --freq " + path("freq.txt") + " --ref word --report " +
                       path("report.txt"));
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string report = read_file(dir_ / "report.txt");
  EXPECT_NE(report.find("bleu=100.0\n"), std::string::npos) << report;
  EXPECT_NE(report.find("records=2\n"), std::string::npos);
  EXPECT_NE(r.err.find("917"), std::string::npos) << r.err;  // count warning
}

TEST_F(CliTest, BadRuleFileIsParseError) {
  write_file(dir_ / "bad.rules", "x\tcommon\n");
  write_file(dir_ / "s.txt", "a\n");
  const CliRun r = run("--rules " + path("bad.rules") + " break --in " + path("s.txt"));
  EXPECT_EQ(r.status, 1);
  // The config stamp precedes the error, which is the last line.
  const auto at = r.err.rfind("pardaz: error: parse: ");
  ASSERT_NE(at, std::string::npos) << r.err;
  EXPECT_TRUE(at == 0 || r.err[at - 1] == '\n');
  EXPECT_EQ(r.err.find('\n', at), r.err.size() - 1);
  EXPECT_NE(r.err.find("bad.rules:1:", at), std::string::npos) << r.err;
}

}  // namespace
}  // namespace pardaz
