// tools/make_wada_table.cc

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

// Regenerates the WADA SNR lookup table shipped in data/.
//
//   make-wada-table --out data/wada_snr_table_v1.csv

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "speechdist/io.h"
#include "speechdist/wada.h"

int main(int argc, char** argv) {
  CLI::App app{"Generate the WADA SNR lookup table by Monte Carlo"};
  std::string out;
  uint64_t seed = 20230101;
  size_t samples = 1000000;
  int version = 1;
  app.add_option("--out", out, "Output CSV path")->required();
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--samples", samples, "Samples per grid point");
  app.add_option("--version", version, "Table version number");
  CLI11_PARSE(app, argc, argv);

  try {
    speechdist::WadaTable table = speechdist::GenerateWadaTable(seed, samples, version);
    const size_t repaired = speechdist::EnforceAscending(table.g);
    table.Validate();
    std::string text = speechdist::FormatWadaTable(table);
    // Record generation parameters alongside the version line.
    text.insert(text.find('\n') + 1, "# seed=" + std::to_string(seed) +
                                         " samples=" + std::to_string(samples) +
                                         " speech_shape=0.4 noise=gaussian\n"
                                         "# monotone_repair=pav points=" + std::to_string(repaired) + "\n");
    speechdist::WriteFileAtomic(out, text);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "make-wada-table: %s\n", e.what());
    return 1;
  }
  return 0;
}
