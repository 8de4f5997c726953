// include/speechdist/scoring.h

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

#ifndef SPEECHDIST_SCORING_H_
#define SPEECHDIST_SCORING_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechdist/corpus.h"

namespace speechdist {

struct WerBreakdown {
  size_t substitutions = 0;
  size_t deletions = 0;
  size_t insertions = 0;
  size_t reference_length = 0;

  size_t errors() const { return substitutions + deletions + insertions; }
  double wer() const;
  WerBreakdown& operator+=(const WerBreakdown& o);
};

// Lowercases, removes ASCII punctuation and splits on whitespace.
std::vector<std::string> NormalizeTokens(std::string_view text);
std::vector<std::string> NormalizeTokens(const std::vector<std::string>& tokens);

// Unit-cost edit alignment on already-normalized tokens. On ties the
// backtrace prefers a match/substitution, then a deletion, then an insertion.
WerBreakdown AlignTokens(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis);

// Normalizes both sides, then aligns. Throws DataError when the normalized
// reference is empty.
WerBreakdown Wer(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis);

// wer_candidate / wer_reference; throws NumericError when the reference WER is 0.
double WerRatio(double wer_candidate, double wer_reference);

// `id<TAB>text` per line.
std::map<std::string, std::string> LoadTranscripts(const std::filesystem::path& path);

struct UtteranceScore {
  std::string id;
  WerBreakdown breakdown;
  bool missing_hypothesis = false;
};

struct CorpusScore {
  WerBreakdown pooled;
  std::vector<UtteranceScore> utterances;  // sorted by id
  std::vector<std::string> warnings;
};

// Absent hypotheses score as empty (all deletions); utterances whose
// reference normalizes to nothing are skipped. Both produce warnings.
CorpusScore ScoreCorpus(const std::vector<UtteranceRecord>& references,
                        const std::map<std::string, std::string>& hypotheses);

std::string FormatUtteranceScoresCsv(const CorpusScore& score);
nlohmann::json BreakdownToJson(const WerBreakdown& b);

}  // namespace speechdist

#endif  // SPEECHDIST_SCORING_H_
