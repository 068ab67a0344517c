// Copyright 2026 The Flowvoc Authors
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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "flowvoc/corpus/audit.h"
#include "flowvoc/corpus/manifest.h"
#include "flowvoc/corpus/normalize.h"
#include "flowvoc/dsp/audio.h"
#include "flowvoc/error.h"
#include "gtest/gtest.h"
#include "nlohmann/json.hpp"
#include "support/test_util.h"

namespace flowvoc::corpus {
namespace {

using testing::TempDir;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoFailure;
}

std::string ErrorText(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

// Manifest text realizing the train and test category tables, one unique
// sentence per record. Test records carry no audio.
std::string TableManifest() {
  std::string text;
  int n = 0;
  for (const auto& [category, count] : testing::TrainCategoryCounts()) {
    for (int i = 0; i < count; ++i, ++n) {
      text += "tr" + std::to_string(n) + "\ttrain\t" + category + "\twav/tr" +
              std::to_string(n) + ".wav\tsentence " + std::to_string(n) + "\n";
    }
  }
  for (const auto& [topic, count] : testing::TestTopicCounts()) {
    for (int i = 0; i < count; ++i, ++n) {
      text += "te" + std::to_string(n) + "\ttest\t" + topic + "\t\tsentence " +
              std::to_string(n) + "\n";
    }
  }
  return text;
}

TEST(ManifestTest, TrainTableTotals) {
  const Manifest m = ParseManifest(TableManifest());
  EXPECT_EQ(m.Select(Split::kTrain).size(), 10979u);
  const auto stats = CategoryStats(m, Split::kTrain);
  EXPECT_EQ(stats.size(), 14u);
  EXPECT_EQ(stats.at("linguistics"), 1760u);
  EXPECT_EQ(stats.at("poem"), 916u);
  EXPECT_EQ(stats.at("news"), 608u);
  size_t sum = 0;
  for (const auto& [c, k] : stats) sum += k;
  EXPECT_EQ(sum, 10979u);
}

TEST(ManifestTest, TestTopicTotals) {
  const Manifest m = ParseManifest(TableManifest());
  const auto stats = CategoryStats(m, Split::kTest);
  EXPECT_EQ(stats.size(), 17u);
  EXPECT_EQ(stats.at("News"), 10u);
  EXPECT_EQ(stats.at("Exclamation"), 4u);
  size_t sum = 0;
  for (const auto& [c, k] : stats) sum += k;
  EXPECT_EQ(sum, 110u);
  EXPECT_EQ(m.Select(Split::kTest).size(), 110u);
}

TEST(ManifestTest, EmptyInputs) {
  const Manifest m = ParseManifest("");
  EXPECT_TRUE(m.records.empty());
  EXPECT_TRUE(CategoryStats(m, Split::kTrain).empty());
  const Manifest blank = ParseManifest("\n\n");
  EXPECT_TRUE(blank.records.empty());
}

TEST(ManifestTest, ParseErrorsCarryLineNumbers) {
  const std::string good = "a\ttrain\tnews\ta.wav\thello\n";
  EXPECT_EQ(CodeOf([&] { ParseManifest(good + "b\ttrain\tnews\tb.wav\n"); }),
            ErrorCode::kParseError);
  EXPECT_NE(ErrorText([&] { ParseManifest(good + "b\ttrain\tnews\tb.wav\n", "m.tsv"); })
                .find("m.tsv:2"),
            std::string::npos);
  EXPECT_EQ(CodeOf([&] { ParseManifest("a\tdev\tnews\ta.wav\tx\n"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([&] { ParseManifest("\ttrain\tnews\ta.wav\tx\n"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([&] { ParseManifest("a\ttrain\t\ta.wav\tx\n"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([&] { ParseManifest("a\ttrain\tnews\t\tx\n"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([&] { ParseManifest(good + "a\ttrain\tnews\tc.wav\tbye\n"); }),
            ErrorCode::kDuplicateId);
  EXPECT_EQ(CodeOf([&] { ParseManifest(good, {}, "asosoft"); }),
            ErrorCode::kUnknownNormalizer);
}

TEST(ManifestTest, SplitLeakDetected) {
  const std::string text =
      "a\ttrain\tnews\ta.wav\tsame words\n"
      "b\ttest\tNews\t\tsame words\n";
  EXPECT_EQ(CodeOf([&] { ParseManifest(text); }), ErrorCode::kSplitLeak);
  const std::string spaced =
      "a\ttrain\tnews\ta.wav\tsame  words \n"
      "b\ttest\tNews\t\tsame words\n";
  EXPECT_NO_THROW(ParseManifest(spaced));
  EXPECT_EQ(CodeOf([&] { ParseManifest(spaced, {}, "nfc-trim"); }),
            ErrorCode::kSplitLeak);
}

TEST(ManifestTest, SplitLeakPropertyOnRandomFixtures) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    std::set<std::string> train_texts, test_texts;
    const int n = 2 + static_cast<int>(gen() % 12);
    for (int i = 0; i < n; ++i) {
      const bool train = gen() % 2 == 0;
      // Small vocabulary so collisions happen often.
      const std::string sentence = "s" + std::to_string(gen() % 8);
      (train ? train_texts : test_texts).insert(sentence);
      text += "id" + std::to_string(i) + (train ? "\ttrain\tc\tx.wav\t" : "\ttest\tc\t\t") +
              sentence + "\n";
    }
    bool leak = false;
    for (const auto& s : train_texts) leak |= test_texts.contains(s);
    if (leak) {
      EXPECT_EQ(CodeOf([&] { ParseManifest(text); }), ErrorCode::kSplitLeak) << text;
    } else {
      EXPECT_NO_THROW(ParseManifest(text)) << text;
    }
  }
}

TEST(ManifestTest, WriteThenLoadIsIdentity) {
  TempDir dir;
  const Manifest m = ParseManifest(TableManifest());
  WriteManifest(m, dir / "m.tsv");
  const Manifest back = LoadManifest(dir / "m.tsv");
  EXPECT_EQ(back.records, m.records);
  EXPECT_EQ(FormatManifest(back), TableManifest());
  Manifest bad;
  bad.records.push_back({"a", Split::kTrain, "c", "a.wav", "tab\there", 0});
  EXPECT_EQ(CodeOf([&] { FormatManifest(bad); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([&] { LoadManifest(dir / "absent.tsv"); }), ErrorCode::kIoFailure);
}

TEST(ManifestTest, ResolvesAudioRelativeToManifest) {
  Manifest m = ParseManifest("a\ttrain\tc\twav/a.wav\tx\nb\ttrain\tc\t/abs/b.wav\ty\n",
                             "/data/corpus/manifest.tsv");
  EXPECT_EQ(m.ResolveAudio(m.records[0]),
            std::filesystem::path("/data/corpus/wav/a.wav"));
  EXPECT_EQ(m.ResolveAudio(m.records[1]), std::filesystem::path("/abs/b.wav"));
}

TEST(NormalizeTest, BuiltIns) {
  EXPECT_EQ(NormalizeText("  a  b ", "identity"), "  a  b ");
  EXPECT_EQ(NormalizeText("  a  b ", "nfc-trim"), "a b");
  EXPECT_EQ(NormalizeText("a\t\n b", "nfc-trim"), "a b");
  // e + combining acute composes to U+00E9.
  EXPECT_EQ(NormalizeText("e\xCC\x81", "nfc-trim"), "\xC3\xA9");
  EXPECT_EQ(CodeOf([] { NormalizeText("x", "other"); }), ErrorCode::kUnknownNormalizer);
  EXPECT_EQ(CodeOf([] { NormalizeText("\xff\xfe", "nfc-trim"); }),
            ErrorCode::kParseError);
  EXPECT_TRUE(IsKnownNormalizer("nfc-trim"));
  EXPECT_FALSE(IsKnownNormalizer("asosoft"));
  EXPECT_EQ(KnownNormalizers().size(), 2u);
}

TEST(NormalizeTest, NfcTrimIsIdempotent) {
  // Pieces chosen to exercise composition, Kurdish script and odd spacing.
  const std::vector<std::string> pieces = {
      " ", "  ", "\t", "\xC2\xA0", "a", "e", "\xCC\x81", "\xCC\x88",
      "\xD9\x83", "\xDB\x8E", "\xDA\x95", "\xE2\x80\x83", "\n", "z", "\xC3\xA9"};
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    const int len = static_cast<int>(gen() % 12);
    for (int i = 0; i < len; ++i) s += pieces[gen() % pieces.size()];
    const std::string once = NormalizeText(s, "nfc-trim");
    ASSERT_EQ(NormalizeText(once, "nfc-trim"), once) << s;
    ASSERT_TRUE(once.empty() || (once.front() != ' ' && once.back() != ' '));
    ASSERT_EQ(once.find("  "), std::string::npos);
  }
}

void WriteClip(const std::filesystem::path& path, size_t samples,
               int rate = dsp::kCorpusSampleRate) {
  dsp::AudioClip clip = testing::Sine(440, samples, 0.5, rate);
  dsp::SaveWav(clip, path);
}

TEST(AuditTest, ValidClipsSumDuration) {
  TempDir dir;
  std::string text;
  for (int i = 0; i < 3; ++i) {
    WriteClip(dir / ("c" + std::to_string(i) + ".wav"), 22050);
    text += "c" + std::to_string(i) + "\ttrain\tc\tc" + std::to_string(i) +
            ".wav\tt" + std::to_string(i) + "\n";
  }
  text += "q\ttest\tc\t\tquestion\n";
  testing::WriteFile(dir / "m.tsv", text);
  for (auto mode : {AuditMode::kDecode, AuditMode::kMetadata}) {
    const AuditReport r = AuditAudio(LoadManifest(dir / "m.tsv"), mode);
    EXPECT_DOUBLE_EQ(r.total_seconds, 3.0);
    EXPECT_TRUE(r.missing.empty());
    EXPECT_TRUE(r.wrong_format.empty());
    EXPECT_EQ(r.checked, 3u);
    EXPECT_EQ(r.skipped, 1u);
  }
}

TEST(AuditTest, MissingAndWrongFormatReported) {
  TempDir dir;
  WriteClip(dir / "a.wav", 22050);
  WriteClip(dir / "slow.wav", 16000, 16000);
  WriteClip(dir / "c.wav", 11025);
  testing::WriteFile(dir / "junk.wav", "not audio at all, not even close....");
  testing::WriteFile(dir / "m.tsv",
                     "a\ttrain\tc\ta.wav\t1\n"
                     "b\ttrain\tc\tb.wav\t2\n"
                     "s\ttrain\tc\tslow.wav\t3\n"
                     "j\ttrain\tc\tjunk.wav\t4\n"
                     "c\ttrain\tc\tc.wav\t5\n");
  for (auto mode : {AuditMode::kDecode, AuditMode::kMetadata}) {
    const AuditReport r = AuditAudio(LoadManifest(dir / "m.tsv"), mode);
    ASSERT_EQ(r.missing.size(), 1u);
    EXPECT_EQ(r.missing[0].id, "b");
    ASSERT_EQ(r.wrong_format.size(), 2u);
    EXPECT_EQ(r.wrong_format[0].id, "s");
    EXPECT_EQ(r.wrong_format[1].id, "j");
    EXPECT_EQ(r.checked, 2u);
    EXPECT_DOUBLE_EQ(r.total_seconds, 1.5);

    const auto json = nlohmann::json::parse(FormatAuditJson(r));
    EXPECT_EQ(json["missing"].size(), 1u);
    EXPECT_EQ(json["wrong_format"].size(), 2u);
    EXPECT_DOUBLE_EQ(json["total_seconds"].get<double>(), 1.5);
    EXPECT_NE(FormatAuditText(r).find("b.wav"), std::string::npos);
  }
}

// 21 one-hour headers over sparse files: only metadata is read.
TEST(AuditTest, TwentyOneHourMetadataFixture) {
  TempDir dir;
  const uint64_t frames = 3600ull * dsp::kCorpusSampleRate;
  std::string text;
  for (int i = 0; i < 21; ++i) {
    const std::string name = "h" + std::to_string(i) + ".wav";
    dsp::AudioClip one;
    one.samples = {0.0f};
    dsp::SaveWav(one, dir / name);
    std::string bytes = testing::ReadFile(dir / name);
    const uint32_t data = static_cast<uint32_t>(frames * 2);
    const uint32_t riff = data + 36;
    for (int b = 0; b < 4; ++b) {
      bytes[4 + b] = static_cast<char>((riff >> (8 * b)) & 0xff);
      bytes[40 + b] = static_cast<char>((data >> (8 * b)) & 0xff);
    }
    bytes.resize(44);
    testing::WriteFile(dir / name, bytes);
    std::filesystem::resize_file(dir / name, 44 + frames * 2);
    text += "h" + std::to_string(i) + "\ttrain\tc\t" + name + "\tline " +
            std::to_string(i) + "\n";
  }
  testing::WriteFile(dir / "m.tsv", text);
  const AuditReport r = AuditAudio(LoadManifest(dir / "m.tsv"), AuditMode::kMetadata);
  EXPECT_TRUE(r.missing.empty());
  EXPECT_TRUE(r.wrong_format.empty());
  EXPECT_DOUBLE_EQ(r.total_seconds, 75600.0);
}

}  // namespace
}  // namespace flowvoc::corpus
