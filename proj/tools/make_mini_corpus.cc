// tools/make_mini_corpus.cc

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

// Writes the synthetic reference/candidate mini-corpus used by the tests and
// the README walkthrough.
//
//   make-mini-corpus --out data/mini

#include <cstdio>
#include <exception>
#include <string>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "fixtures.h"
#include "speechdist/io.h"

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic mini-corpus pair"};
  std::string out;
  uint64_t seed = 7;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--seed", seed, "Random seed");
  CLI11_PARSE(app, argc, argv);

  try {
    auto mc = speechdist::fixtures::WriteMiniCorpus(out, seed);
    nlohmann::json config = {{"reference_manifest", "reference/manifest.jsonl"},
                             {"candidate_manifest", "candidate/manifest.jsonl"},
                             {"output_dir", "out"},
                             {"score_manifest", "reference/manifest.jsonl"},
                             {"reference_hypotheses", "hyp_reference.txt"},
                             {"candidate_hypotheses", "hyp_candidate.txt"},
                             {"seed", 0},
                             {"augment", {{"enabled", true}}},
                             {"attributes", {{"enabled", true}}}};
    speechdist::WriteFileAtomic(mc.root / "config.json", config.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "make-mini-corpus: %s\n", e.what());
    return 1;
  }
  return 0;
}
