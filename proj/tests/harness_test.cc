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

#include "pardaz/harness.h"

#include <gtest/gtest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "pardaz/error.h"
#include "temp_dir.h"

namespace pardaz {
namespace {

using testing::TempDir;
using testing::write_file;

const StandardizeFn kIdentity = [](const TokenSequence& s) { return s; };

TEST(HarnessEnumsTest, RoundTrip) {
  EXPECT_EQ(split_from_string("dev"), Split::kDev);
  EXPECT_EQ(split_from_string("test"), Split::kTest);
  EXPECT_EQ(to_string(Split::kTest), "test");
  EXPECT_EQ(reference_from_string("style"), ReferenceType::kStyle);
  EXPECT_THROW(split_from_string("train"), Error);
  EXPECT_THROW(reference_from_string("semantic"), Error);
  EXPECT_EQ(published_split_size(Split::kDev), 917u);
  EXPECT_EQ(published_split_size(Split::kTest), 1012u);
}

TEST(ColumnMapTest, Parse) {
  const ColumnMap m = ColumnMap::parse("source=2,word=0,style=-1,genre=1,header=1");
  EXPECT_EQ(m.source, 2);
  EXPECT_EQ(m.word_ref, 0);
  EXPECT_EQ(m.style_ref, -1);
  EXPECT_EQ(m.genre, 1);
  EXPECT_TRUE(m.header);
  EXPECT_THROW(ColumnMap::parse("source=0,bogus=1"), Error);
  EXPECT_THROW(ColumnMap::parse("source"), Error);
  EXPECT_THROW(ColumnMap::parse("source=-1,word=1"), Error);
}

TEST(LoadDatasetTest, TwoLineIdentityFixtureScoresHundred) {
  TempDir dir;
  write_file(dir / "dev.tsv",
             "من به خانه رفتم.\tمن به خانه رفتم.\tمن به خانه رفتم.\tblog\n"
             "كتاب خوب است\tکتاب خوب است\tکتاب خوب است\tnews\n");
  const auto records = load_dataset(dir.path(), Split::kDev);
  ASSERT_EQ(records.size(), 2u);
  // All three fields are normalized the same way.
  EXPECT_EQ(records[1].source, records[1].word_ref);
  EXPECT_EQ(records[0].source.back(), ".");
  EXPECT_EQ(records[0].genre, "blog");

  const EvalReport rep = evaluate("identity", kIdentity, records, ReferenceType::kWord);
  EXPECT_NEAR(rep.primary().score, 100.0, 1e-9);
  EXPECT_NEAR(rep.system_scores.style.score, 100.0, 1e-9);
  EXPECT_NEAR(rep.primary_identity().score, 100.0, 1e-9);
  EXPECT_EQ(rep.records, 2u);
  EXPECT_EQ(rep.by_genre.size(), 2u);
}

TEST(LoadDatasetTest, ParallelLayout) {
  TempDir dir;
  write_file(dir / "test.src", "تهرون رفتم\nکمه\n");
  write_file(dir / "test.word", "تهران رفتم\nکم است\n");
  const auto records = load_dataset(dir.path(), Split::kTest);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].split, Split::kTest);
  EXPECT_EQ(records[0].style_ref, records[0].word_ref);
  EXPECT_FALSE(records[0].genre.has_value());
}

TEST(LoadDatasetTest, ColumnMapAndHeader) {
  TempDir dir;
  write_file(dir / "data.csv", "genre,word,src\nchat,کم است,کمه\n");
  ColumnMap cols = ColumnMap::parse("source=2,word=1,style=-1,genre=0,header=1");
  cols.delimiter = ',';
  const auto records = load_dataset(dir / "data.csv", Split::kDev, cols);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].source, (TokenSequence{"کمه"}));
  EXPECT_EQ(records[0].word_ref, (TokenSequence{"کم", "است"}));
  EXPECT_EQ(records[0].genre, "chat");
}

TEST(LoadDatasetTest, EmptySourceIsRejectedWithLine) {
  TempDir dir;
  write_file(dir / "dev.tsv", "a\ta\ta\tx\n \tb\tb\tx\n");
  try {
    load_dataset(dir.path(), Split::kDev);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("empty source"), std::string::npos);
  }
}

TEST(LoadDatasetTest, MissingFilesAreIoErrors) {
  TempDir dir;
  EXPECT_THROW(load_dataset(dir / "nothing", Split::kDev), IoError);
  EXPECT_THROW(load_dataset(dir.path(), Split::kDev), IoError);  // no dev.src
}

TEST(LoadDatasetTest, PublishedCountWarning) {
  std::vector<EvalRecord> records(3);
  const auto warn = check_published_counts(records, Split::kDev);
  ASSERT_TRUE(warn.has_value());
  EXPECT_NE(warn->find("917"), std::string::npos);
  records.resize(1012);
  EXPECT_FALSE(check_published_counts(records, Split::kTest).has_value());
}

std::vector<EvalRecord> small_records() {
  std::vector<EvalRecord> out;
  const std::vector<std::array<std::string, 4>> rows = {
      {"تهرون رفتم", "تهران رفتم", "به تهران رفتم", "a"},
      {"کمه", "کم است", "کم است", "b"},
      {"بهت گفتم", "به تو گفتم", "به تو گفتم", "a"},
  };
  for (const auto& r : rows) {
    EvalRecord rec;
    rec.source = normalize_and_tokenize(r[0]);
    rec.word_ref = normalize_and_tokenize(r[1]);
    rec.style_ref = normalize_and_tokenize(r[2]);
    rec.genre = r[3];
    out.push_back(rec);
  }
  return out;
}

TEST(EvaluateTest, ScoresBothReferencesFromOneDecode) {
  int calls = 0;
  const StandardizeFn counting = [&](const TokenSequence& s) {
    ++calls;
    return s;
  };
  const auto records = small_records();
  const EvalReport rep = evaluate("identity", counting, records, ReferenceType::kStyle);
  EXPECT_EQ(calls, 3);
  EXPECT_EQ(rep.hypotheses.size(), 3u);
  EXPECT_EQ(&rep.primary(), &rep.system_scores.style);
  EXPECT_EQ(rep.system_scores.word.score, rep.identity_scores.word.score);
}

TEST(EvaluateTest, ReportIsDeterministicAcrossRunsAndJobs) {
  const auto records = small_records();
  const StandardizeFn fix = [](const TokenSequence& s) {
    TokenSequence out = s;
    if (!out.empty() && out[0] == "کمه") out = {"کم", "است"};
    return out;
  };
  const std::string a = format_report(evaluate("fix", fix, records, ReferenceType::kWord));
  const std::string b = format_report(evaluate("fix", fix, records, ReferenceType::kWord));
  const std::string c =
      format_report(evaluate("fix", fix, records, ReferenceType::kWord, 3));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_NE(a.find("system=fix\n"), std::string::npos);
  EXPECT_NE(a.find("records=3\n"), std::string::npos);
  EXPECT_NE(a.find("genre.a.bleu.word="), std::string::npos);
  EXPECT_NE(a.find("identity.bleu.word="), std::string::npos);
}

TEST(EvaluateTest, FailureNamesRecordIndex) {
  const StandardizeFn flaky = [](const TokenSequence& s) -> TokenSequence {
    if (s.size() == 1) throw std::runtime_error("boom");
    return s;
  };
  try {
    evaluate("flaky", flaky, small_records(), ReferenceType::kWord);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("record 1"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
}

TEST(EvaluateTest, NoRecordsIsAnError) {
  EXPECT_THROW(evaluate("identity", kIdentity, {}, ReferenceType::kWord), Error);
}

}  // namespace
}  // namespace pardaz
