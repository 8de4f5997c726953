// src/scoring.cc

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

#include "speechdist/scoring.h"

#include <algorithm>
#include <cctype>

#include "speechdist/error.h"
#include "speechdist/io.h"

namespace speechdist {

double WerBreakdown::wer() const {
  if (reference_length == 0) throw DataError("WER: empty reference");
  return static_cast<double>(errors()) / static_cast<double>(reference_length);
}

WerBreakdown& WerBreakdown::operator+=(const WerBreakdown& o) {
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  reference_length += o.reference_length;
  return *this;
}

namespace {

std::string NormalizeToken(std::string_view tok) {
  std::string out;
  for (unsigned char c : tok) {
    if (std::ispunct(c)) continue;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace

std::vector<std::string> NormalizeTokens(std::string_view text) {
  return NormalizeTokens(SplitWhitespace(text));
}

std::vector<std::string> NormalizeTokens(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    // A token may contain inner whitespace when it comes from JSON arrays.
    for (const auto& piece : SplitWhitespace(t)) {
      std::string n = NormalizeToken(piece);
      if (!n.empty()) out.push_back(std::move(n));
    }
  }
  return out;
}

WerBreakdown AlignTokens(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  const size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<size_t>> cost(n + 1, std::vector<size_t>(m + 1, 0));
  for (size_t i = 0; i <= n; ++i) cost[i][0] = i;
  for (size_t j = 0; j <= m; ++j) cost[0][j] = j;
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      const size_t diag = cost[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cost[i][j] = std::min({diag, cost[i - 1][j] + 1, cost[i][j - 1] + 1});
    }
  }

  WerBreakdown b;
  b.reference_length = n;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (cost[i][j] == cost[i - 1][j - 1] + (same ? 0 : 1)) {
        if (!same) ++b.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
      ++b.deletions;
      --i;
    } else {
      ++b.insertions;
      --j;
    }
  }
  return b;
}

WerBreakdown Wer(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis) {
  auto ref = NormalizeTokens(reference);
  if (ref.empty()) throw DataError("WER: reference is empty after normalization");
  return AlignTokens(ref, NormalizeTokens(hypothesis));
}

double WerRatio(double wer_candidate, double wer_reference) {
  if (!(wer_reference > 0.0)) throw NumericError("WER ratio: reference WER is zero");
  return wer_candidate / wer_reference;
}

std::map<std::string, std::string> LoadTranscripts(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  const auto lines = SplitLines(ReadFile(path));
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    const auto tab = lines[i].find('\t');
    std::string id(Trim(lines[i].substr(0, tab)));
    std::string text = tab == std::string::npos ? "" : lines[i].substr(tab + 1);
    if (id.empty()) throw DataError(where + ": empty id");
    if (!out.emplace(id, std::move(text)).second) throw DataError(where + ": duplicate id '" + id + "'");
  }
  return out;
}

CorpusScore ScoreCorpus(const std::vector<UtteranceRecord>& references,
                        const std::map<std::string, std::string>& hypotheses) {
  std::vector<const UtteranceRecord*> sorted;
  for (const auto& r : references) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });

  CorpusScore score;
  for (const UtteranceRecord* rec : sorted) {
    auto ref = NormalizeTokens(rec->transcript);
    if (ref.empty()) {
      score.warnings.push_back("utterance '" + rec->id + "' has an empty reference transcript; skipped");
      continue;
    }
    UtteranceScore us;
    us.id = rec->id;
    auto it = hypotheses.find(rec->id);
    std::vector<std::string> hyp;
    if (it == hypotheses.end()) {
      us.missing_hypothesis = true;
      score.warnings.push_back("no hypothesis for '" + rec->id + "'; scored as empty");
    } else {
      hyp = NormalizeTokens(std::string_view(it->second));
    }
    us.breakdown = AlignTokens(ref, hyp);
    score.pooled += us.breakdown;
    score.utterances.push_back(std::move(us));
  }
  return score;
}

std::string FormatUtteranceScoresCsv(const CorpusScore& score) {
  std::string out = "id,substitutions,deletions,insertions,reference_length,wer\n";
  for (const auto& u : score.utterances) {
    const auto& b = u.breakdown;
    out += u.id + "," + std::to_string(b.substitutions) + "," + std::to_string(b.deletions) + "," +
           std::to_string(b.insertions) + "," + std::to_string(b.reference_length) + "," + FormatG(b.wer(), 6) +
           "\n";
  }
  return out;
}

nlohmann::json BreakdownToJson(const WerBreakdown& b) {
  return {{"substitutions", b.substitutions},
          {"deletions", b.deletions},
          {"insertions", b.insertions},
          {"reference_length", b.reference_length},
          {"wer", b.reference_length ? nlohmann::json(b.wer()) : nlohmann::json(nullptr)}};
}

}  // namespace speechdist
