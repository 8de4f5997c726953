// include/speechdist/attributes.h

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

#ifndef SPEECHDIST_ATTRIBUTES_H_
#define SPEECHDIST_ATTRIBUTES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "speechdist/embeddings.h"
#include "speechdist/measures.h"
#include "speechdist/rng.h"

namespace speechdist {

inline constexpr double kDefaultVarianceFloor = 1e-3;
inline constexpr int kDefaultGmmComponents = 2;
inline constexpr int kQuantizerBins = 256;

// Diagonal-covariance Gaussian mixture.
struct GmmModel {
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::VectorXd> variances;

  int num_components() const { return static_cast<int>(weights.size()); }
  Eigen::Index dim() const { return means.empty() ? 0 : means.front().size(); }
  // Throws DataError unless weights sum to 1 and every variance >= floor.
  void Validate(double floor = 0.0) const;
  double LogLikelihood(const std::vector<Eigen::VectorXd>& samples) const;
};

struct GmmFitOptions {
  int components = kDefaultGmmComponents;
  double variance_floor = kDefaultVarianceFloor;
  int max_iterations = 200;
  double tolerance = 1e-8;  // relative log-likelihood change
  uint64_t seed = 0;        // k-means++ initialization
};

struct GmmFit {
  GmmModel model;
  std::vector<double> log_likelihood;  // after initialization and each iteration
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

// EM with k-means++ initialization. Falls back to a single component (with a
// warning) when there are fewer samples than components.
GmmFit FitGmm(const std::vector<Eigen::VectorXd>& samples, const GmmFitOptions& options = {});
GmmFit FitGmm1d(const std::vector<double>& samples, const GmmFitOptions& options = {});

Eigen::VectorXd SampleGmm(const GmmModel& model, Rng& rng);

// 257 ascending edges of 256 equal-width bins between the training min and max.
struct QuantizerCodebook {
  std::vector<double> edges;

  static QuantizerCodebook FromValues(const std::vector<double>& values);
  // Bin containing `value`; out-of-range values clamp to 0 or 255.
  int Quantize(double value) const;
  double BinCenter(int index) const;
};

struct NormStats {
  double mean = 0.0;
  double sd = 1.0;
};

struct SpeakerAttributeModel {
  std::map<Measure, GmmModel> measures;
  std::optional<GmmModel> dvector;
};

// Per-speaker models, fit in globally z-scored space.
struct AttributeModelSet {
  static constexpr int kFormatVersion = 1;

  int components = kDefaultGmmComponents;
  double variance_floor = kDefaultVarianceFloor;
  uint64_t seed = 0;
  std::map<Measure, NormStats> measure_norm;
  std::map<Measure, QuantizerCodebook> codebooks;
  Eigen::VectorXd dvector_mean;  // empty when no embeddings were given
  Eigen::VectorXd dvector_sd;
  std::map<std::string, SpeakerAttributeModel> speakers;
  std::vector<std::string> warnings;  // not serialized

  nlohmann::json ToJson() const;
  static AttributeModelSet FromJson(const nlohmann::json& j);
};

struct AttributeFitOptions {
  int components = kDefaultGmmComponents;
  double variance_floor = kDefaultVarianceFloor;
  uint64_t seed = 0;
};

// Each (speaker, measure) fit draws its initialization from its own stream
// derived from (seed, speaker, measure), so results do not depend on order.
AttributeModelSet FitSpeakerModels(const std::vector<MeasureRow>& measures,
                                   const EmbeddingSet* embeddings,
                                   const AttributeFitOptions& options = {});

struct AttributeSample {
  std::map<Measure, double> values;  // de-normalized
  std::map<Measure, int> bins;       // codebook index, when a codebook exists
  std::optional<Eigen::VectorXd> dvector;
};

// Throws DataError for an unknown speaker.
std::vector<AttributeSample> SampleSpeakerAttributes(const AttributeModelSet& models,
                                                     const std::string& speaker, size_t n,
                                                     uint64_t seed);

// Columns: speaker,index,<measure>...,<measure>_bin...,dv0..dv{d-1}.
std::string FormatAttributeSamplesCsv(const AttributeModelSet& models, const std::string& speaker,
                                      const std::vector<AttributeSample>& samples);

}  // namespace speechdist

#endif  // SPEECHDIST_ATTRIBUTES_H_
