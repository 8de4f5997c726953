// tests/cli_test.cc

// Copyright 2026  The speechdist Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.h"
#include "speechdist/corpus.h"
#include "speechdist/io.h"
#include "speechdist/measures.h"

namespace speechdist {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(fixtures::ScratchDir("cli"));
    auto mc = fixtures::WriteMiniCorpus(*dir_ / "corpus");
    for (const auto& [src, dst] : {std::pair{mc.reference_manifest, "ref.jsonl"}, {mc.candidate_manifest, "cand.jsonl"}}) {
      auto recs = LoadManifest(src);
      std::vector<UtteranceRecord> keep;
      for (auto& r : recs)
        if (r.id.ends_with("_u01") || r.id.ends_with("_u02")) keep.push_back(r);
      WriteManifest(*dir_ / dst, keep);
    }
    fs::copy_file(mc.candidate_hypotheses, *dir_ / "hyp.txt");
    fs::copy_file(mc.reference_hypotheses, *dir_ / "ref_hyp.txt");
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }

  static Result Run(const std::string& args) {
    const fs::path err = *dir_ / "stderr.txt";
    const std::string cmd = std::string(SPEECHDIST_CLI) + " " + args + " >" + (*dir_ / "stdout.txt").string() +
                            " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = ReadFile(err);
    return r;
  }
  static std::string P(const char* name) { return (*dir_ / name).string(); }

  static fs::path* dir_;
};

fs::path* CliTest::dir_ = nullptr;

TEST_F(CliTest, StagesChain) {
  ASSERT_EQ(Run("measure --manifest " + P("ref.jsonl") + " --out " + P("m_ref.csv")).code, 0);
  ASSERT_EQ(Run("measure --manifest " + P("cand.jsonl") + " --out " + P("m_cand.csv") + " --jobs 2").code, 0);
  EXPECT_EQ(ReadMeasuresCsv(P("m_ref.csv")).size(), 8u);
  EXPECT_TRUE(fs::exists(P("m_ref.csv.missing.csv")));

  ASSERT_EQ(Run("distance --reference " + P("m_ref.csv") + " --candidate " + P("m_cand.csv") + " --out " +
                P("dist.csv") + " --json " + P("dist.json") + " --hist-dir " + P("hist"))
                .code,
            0);
  EXPECT_EQ(nlohmann::json::parse(ReadFile(P("dist.json"))).size(), 5u);
  EXPECT_TRUE(fs::exists(*dir_ / "hist" / "hist_srmr.csv"));

  ASSERT_EQ(Run("embed-distance --reference " + P("ref.jsonl") + " --candidate " + P("cand.jsonl") + " --out " +
                P("emb.json") + " --pca " + P("pca.csv"))
                .code,
            0);
  auto emb = nlohmann::json::parse(ReadFile(P("emb.json")));
  EXPECT_TRUE(emb["fd_intra"].is_number());

  ASSERT_EQ(Run("fit-attrs --measures " + P("m_ref.csv") + " --embeddings " + P("ref.jsonl") + " --out " +
                P("model.json"))
                .code,
            0);
  ASSERT_EQ(Run("sample-attrs --model " + P("model.json") + " --speaker spk2 --n 7 --seed 3 --out " + P("s1.csv")).code, 0);
  ASSERT_EQ(Run("sample-attrs --model " + P("model.json") + " --speaker spk2 --n 7 --seed 3 --out " + P("s2.csv")).code, 0);
  const std::string samples = ReadFile(P("s1.csv"));
  EXPECT_EQ(samples, ReadFile(P("s2.csv")));
  EXPECT_EQ(std::count(samples.begin(), samples.end(), '\n'), 8);
  Result unknown = Run("sample-attrs --model " + P("model.json") + " --speaker nobody --n 1 --out " + P("s3.csv"));
  EXPECT_EQ(unknown.code, 3);

  ASSERT_EQ(Run("augment --manifest " + P("cand.jsonl") + " --out-dir " + P("aug") +
                " --seed 4 --snr-min 10 --snr-max 20 --rir-prob 1 --rt60-min 0.2 --rt60-max 0.3")
                .code,
            0);
  auto params = nlohmann::json::parse(ReadFile(*dir_ / "aug" / "augment_params.json"));
  for (const auto& o : params["outputs"]) {
    EXPECT_GE(o["snr_db"].get<double>(), 10.0);
    EXPECT_LE(o["snr_db"].get<double>(), 20.0);
    EXPECT_GE(o["rt60"].get<double>(), 0.2);
  }
  EXPECT_EQ(LoadManifest(*dir_ / "aug" / "manifest.jsonl").size(), 8u);

  ASSERT_EQ(Run("score --manifest " + P("ref.jsonl") + " --hyp " + P("hyp.txt") + " --reference-hyp " +
                P("ref_hyp.txt") + " --out " + P("score.json"))
                .code,
            0);
  auto score = nlohmann::json::parse(ReadFile(P("score.json")));
  EXPECT_TRUE(score["wr"].is_number());
  EXPECT_TRUE(fs::exists(P("score_candidate.csv")));
}

TEST_F(CliTest, ReportFromConfigWithOverrides) {
  nlohmann::json cfg = {{"reference_manifest", "ref.jsonl"}, {"candidate_manifest", "cand.jsonl"},
                        {"output_dir", "cfg_out"}, {"seed", 9}};
  WriteFileAtomic(*dir_ / "config.json", cfg.dump());
  ASSERT_EQ(Run("report --config " + P("config.json") + " --seed 11").code, 0);
  auto report = nlohmann::json::parse(ReadFile(*dir_ / "cfg_out" / "report.json"));
  EXPECT_EQ(report["provenance"]["seed"], 11);
  EXPECT_EQ(ReadFile(*dir_ / "stdout.txt"), (*dir_ / "cfg_out" / "report.json").string() + "\n");
}

TEST_F(CliTest, ErrorsAreStructured) {
  Result r = Run("report --reference " + P("nope.jsonl") + " --candidate " + P("cand.jsonl") + " --out-dir " +
                 P("x"));
  EXPECT_EQ(r.code, 2);
  auto err = nlohmann::json::parse(r.err);
  EXPECT_EQ(err["error"]["kind"], "config");
  EXPECT_EQ(err["error"]["stage"], "config");

  WriteFileAtomic(*dir_ / "bad.jsonl", "{not json}\n");
  r = Run("measure --manifest " + P("bad.jsonl") + " --out " + P("bad.csv"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(nlohmann::json::parse(r.err)["error"]["message"].get<std::string>().find("line 1"), std::string::npos);

  EXPECT_EQ(Run("measure --bogus").code, 2);
  EXPECT_EQ(Run("distance --reference a").code, 2);
  EXPECT_EQ(Run("augment --manifest " + P("cand.jsonl") + " --out-dir " + P("aug2") + " --snr-min 30 --snr-max 5").code, 2);
}

}  // namespace
}  // namespace speechdist
