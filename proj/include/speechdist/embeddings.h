// include/speechdist/embeddings.h

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

#ifndef SPEECHDIST_EMBEDDINGS_H_
#define SPEECHDIST_EMBEDDINGS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "speechdist/corpus.h"

namespace speechdist {

struct EmbeddingSet {
  std::map<std::string, Eigen::VectorXd> vectors;  // utterance id -> vector
  std::map<std::string, std::string> speaker_of;   // utterance id -> speaker

  Eigen::Index dim() const { return vectors.empty() ? 0 : vectors.begin()->second.size(); }
  // Throws DataError on mixed dimensions, missing speakers or non-finite values.
  void Validate() const;
  std::vector<Eigen::VectorXd> Values() const;
};

struct SpeakerViews {
  EmbeddingSet intra;  // per-speaker mean removed, speakers pooled
  EmbeddingSet inter;  // one mean vector per speaker, keyed by speaker id
  std::vector<std::string> warnings;
};

// Speakers with a single utterance are left out of the intra view (their
// centered vector would be identically zero) and reported in `warnings`.
SpeakerViews PrepareSpeakerViews(const EmbeddingSet& set);

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  size_t count = 0;
};

inline constexpr double kCovarianceJitter = 1e-6;

// Sample mean and unbiased covariance plus jitter * (trace / d) * I.
GaussianStats FitGaussian(const std::vector<Eigen::VectorXd>& vectors);

// Squared 2-Wasserstein distance between the two normals:
// |mu_a - mu_b|^2 + tr(S_a + S_b - 2 (S_a^1/2 S_b S_a^1/2)^1/2).
double FrechetDistance(const GaussianStats& a, const GaussianStats& b);

struct PcaResult {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;            // d x k, orthonormal columns
  std::vector<Eigen::VectorXd> coords;   // one k-vector per input
  std::vector<double> explained;         // variance fractions, nonincreasing
};

// Top-k principal axes of the pooled covariance. Each axis is signed so its
// largest-magnitude loading is positive. Throws NumericError naming the
// degenerate axes if the data has rank < k.
PcaResult PcaProject(const std::vector<Eigen::VectorXd>& vectors, int k = 2);

// CSV `id,v0,...,v{d-1}` (header optional).
std::map<std::string, Eigen::VectorXd> LoadEmbeddingsCsv(const std::filesystem::path& path);

// Vectors from `table` when given, otherwise from each record's dvector file.
// Records with no embedding source are skipped and listed in `missing`.
EmbeddingSet BuildEmbeddingSet(const std::vector<UtteranceRecord>& records,
                               const std::map<std::string, Eigen::VectorXd>* table,
                               std::vector<std::string>* missing = nullptr);

}  // namespace speechdist

#endif  // SPEECHDIST_EMBEDDINGS_H_
