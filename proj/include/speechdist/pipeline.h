// include/speechdist/pipeline.h

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

#ifndef SPEECHDIST_PIPELINE_H_
#define SPEECHDIST_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechdist/attributes.h"
#include "speechdist/augment.h"
#include "speechdist/corpus.h"
#include "speechdist/distances.h"
#include "speechdist/embeddings.h"
#include "speechdist/measures.h"
#include "speechdist/scoring.h"

namespace speechdist {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
  std::filesystem::path reference_manifest;
  std::filesystem::path candidate_manifest;
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> reference_embeddings;  // id,v0,... CSV
  std::optional<std::filesystem::path> candidate_embeddings;
  std::optional<std::filesystem::path> score_manifest;        // defaults to the reference manifest
  std::optional<std::filesystem::path> reference_hypotheses;  // id<TAB>text
  std::optional<std::filesystem::path> candidate_hypotheses;
  uint64_t seed = 0;
  int jobs = 0;
  bool strict_pairing = false;
  MeasureOptions measure;
  bool run_augment = false;
  AugmentPolicy augment;
  bool run_attributes = false;
  int attribute_components = kDefaultGmmComponents;
  double attribute_variance_floor = kDefaultVarianceFloor;

  // Throws ConfigError on unknown keys or ill-typed values. Keys absent from
  // `j` keep the values already in `*this`. Relative paths resolve against
  // `base_dir` (the config file's directory) when it is nonempty.
  void MergeJson(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  nlohmann::json ToJson() const;
  void Validate() const;
  // Hex digest of everything except output_dir and jobs, with paths
  // canonicalized.
  std::string Hash() const;
};

// Measures every record on a worker pool; rows come back sorted by id.
std::vector<MeasureRow> MeasureCorpus(const std::vector<UtteranceRecord>& records,
                                      const MeasureOptions& options, int jobs);
// `id,measure,reason` for every missing measure.
std::string FormatMissingMeasuresCsv(const std::vector<MeasureRow>& rows);

struct EmbeddingDistances {
  std::optional<double> fd_intra;
  std::optional<double> fd_inter;
  Eigen::Index dimension = 0;
  size_t n_reference = 0;
  size_t n_candidate = 0;
  std::vector<double> pca_explained;
  std::string pca_csv;  // id,corpus,pc1,pc2
  std::vector<std::string> notes;

  nlohmann::json ToJson() const;
};

EmbeddingDistances ComputeEmbeddingDistances(const EmbeddingSet& reference, const EmbeddingSet& candidate);

// Embedding set for `records`, from `csv` when given and from the manifest
// dvector files otherwise. Records without a vector are reported in `notes`.
EmbeddingSet LoadCorpusEmbeddings(const std::vector<UtteranceRecord>& records,
                                  const std::optional<std::filesystem::path>& csv, const std::string& label,
                                  std::vector<std::string>& notes);

// Writes <out_dir>/wav/<id>.wav, <out_dir>/manifest.jsonl and
// <out_dir>/augment_params.json; returns the sidecar contents. RIR first,
// then noise; per-utterance noise and per-speaker RIR streams come from
// (seed, speaker, utterance), so output does not depend on `jobs`.
nlohmann::json AugmentCorpus(const std::vector<UtteranceRecord>& records, const AugmentPolicy& policy,
                             uint64_t seed, const std::filesystem::path& out_dir, int jobs);

struct ScoreSummary {
  CorpusScore candidate;
  std::optional<CorpusScore> reference;
  std::optional<double> wr;

  nlohmann::json ToJson() const;
};

ScoreSummary ScoreHypotheses(const std::vector<UtteranceRecord>& test_set,
                             const std::filesystem::path& candidate_hypotheses,
                             const std::optional<std::filesystem::path>& reference_hypotheses);

const nlohmann::json& ReportSchema();

// Full pipeline. Writes report.json plus measure, distance, histogram, PCA
// and optional stage outputs under config.output_dir, and returns the report.
// Errors carry the failing stage name.
nlohmann::json RunReport(const RunConfig& config);

}  // namespace speechdist

#endif  // SPEECHDIST_PIPELINE_H_
