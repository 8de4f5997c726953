// src/embeddings.cc

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

#include "speechdist/embeddings.h"

#include <algorithm>
#include <cmath>

#include "speechdist/error.h"
#include "speechdist/io.h"

namespace speechdist {

namespace {

Eigen::MatrixXd SymmetricSqrt(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
  if (eig.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

void EmbeddingSet::Validate() const {
  const Eigen::Index d = dim();
  for (const auto& [id, v] : vectors) {
    if (v.size() != d || d < 1)
      throw DataError("embedding '" + id + "' has dimension " + std::to_string(v.size()) +
                      ", expected " + std::to_string(d));
    if (!v.allFinite()) throw DataError("embedding '" + id + "' has non-finite components");
    auto it = speaker_of.find(id);
    if (it == speaker_of.end() || it->second.empty())
      throw DataError("embedding '" + id + "' has no speaker");
  }
}

std::vector<Eigen::VectorXd> EmbeddingSet::Values() const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(vectors.size());
  for (const auto& [id, v] : vectors) out.push_back(v);
  return out;
}

SpeakerViews PrepareSpeakerViews(const EmbeddingSet& set) {
  set.Validate();
  std::map<std::string, std::vector<std::string>> by_speaker;
  for (const auto& [id, v] : set.vectors) by_speaker[set.speaker_of.at(id)].push_back(id);

  SpeakerViews views;
  for (const auto& [speaker, ids] : by_speaker) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(set.dim());
    for (const auto& id : ids) mean += set.vectors.at(id);
    mean /= static_cast<double>(ids.size());

    views.inter.vectors[speaker] = mean;
    views.inter.speaker_of[speaker] = speaker;

    if (ids.size() < 2) {
      views.warnings.push_back("speaker '" + speaker +
                               "' has a single utterance; excluded from the intra-speaker view");
      continue;
    }
    for (const auto& id : ids) {
      views.intra.vectors[id] = set.vectors.at(id) - mean;
      views.intra.speaker_of[id] = speaker;
    }
  }
  return views;
}

GaussianStats FitGaussian(const std::vector<Eigen::VectorXd>& vectors) {
  if (vectors.size() < 2) throw DataError("FitGaussian: need at least 2 vectors");
  const Eigen::Index d = vectors.front().size();
  if (d < 1) throw DataError("FitGaussian: zero-dimensional vectors");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (const auto& v : vectors) {
    if (v.size() != d) throw DataError("FitGaussian: dimension mismatch");
    mean += v;
  }
  const double n = static_cast<double>(vectors.size());
  mean /= n;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (const auto& v : vectors) {
    Eigen::VectorXd c = v - mean;
    cov.noalias() += c * c.transpose();
  }
  cov /= (n - 1.0);
  cov = 0.5 * (cov + cov.transpose());
  const double jitter = kCovarianceJitter * cov.trace() / static_cast<double>(d);
  cov.diagonal().array() += jitter;

  if (!mean.allFinite() || !cov.allFinite()) throw NumericError("FitGaussian: non-finite statistics");
  return {std::move(mean), std::move(cov), vectors.size()};
}

double FrechetDistance(const GaussianStats& a, const GaussianStats& b) {
  if (a.mean.size() != b.mean.size() || a.covariance.rows() != b.covariance.rows())
    throw DataError("FrechetDistance: dimension mismatch");
  const double mean_term = (a.mean - b.mean).squaredNorm();
  const Eigen::MatrixXd sqrt_a = SymmetricSqrt(a.covariance);
  Eigen::MatrixXd inner = sqrt_a * b.covariance * sqrt_a;
  inner = 0.5 * (inner + inner.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(inner, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericError("FrechetDistance: eigendecomposition failed");
  const double cross = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  const double trace_term = a.covariance.trace() + b.covariance.trace() - 2.0 * cross;

  double fd = mean_term + trace_term;
  if (!std::isfinite(fd)) throw NumericError("FrechetDistance: non-finite result");
  const double scale = std::max(1.0, a.covariance.trace() + b.covariance.trace());
  if (fd < 0.0) {
    if (fd < -1e-8 * scale) throw NumericError("FrechetDistance: negative result " + FormatG(fd, 10));
    fd = 0.0;
  }
  return fd;
}

PcaResult PcaProject(const std::vector<Eigen::VectorXd>& vectors, int k) {
  if (k < 1) throw ConfigError("PCA: k must be >= 1");
  if (vectors.size() < static_cast<size_t>(k) + 1)
    throw DataError("PCA: need at least k + 1 vectors");
  const Eigen::Index d = vectors.front().size();
  if (d < k) throw DataError("PCA: dimension smaller than k");

  PcaResult result;
  result.mean = Eigen::VectorXd::Zero(d);
  for (const auto& v : vectors) {
    if (v.size() != d) throw DataError("PCA: dimension mismatch");
    result.mean += v;
  }
  result.mean /= static_cast<double>(vectors.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (const auto& v : vectors) {
    Eigen::VectorXd c = v - result.mean;
    cov.noalias() += c * c.transpose();
  }
  cov /= static_cast<double>(vectors.size() - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (cov + cov.transpose()));
  if (eig.info() != Eigen::Success) throw NumericError("PCA: eigendecomposition failed");
  // Eigen sorts ascending.
  const Eigen::VectorXd values = eig.eigenvalues().cwiseMax(0.0);
  const double total = values.sum();
  std::vector<std::string> degenerate;
  result.components.resize(d, k);
  for (int c = 0; c < k; ++c) {
    const Eigen::Index idx = d - 1 - c;
    const double lambda = values(idx);
    if (!(total > 0.0) || lambda <= 1e-12 * total) degenerate.push_back("pc" + std::to_string(c + 1));
    Eigen::VectorXd axis = eig.eigenvectors().col(idx);
    Eigen::Index arg;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0.0) axis = -axis;
    result.components.col(c) = axis;
    result.explained.push_back(total > 0.0 ? lambda / total : 0.0);
  }
  if (!degenerate.empty()) {
    std::string axes;
    for (const auto& a : degenerate) axes += (axes.empty() ? "" : ",") + a;
    throw NumericError("PCA: data rank below k; degenerate axes " + axes);
  }
  for (const auto& v : vectors) result.coords.push_back(result.components.transpose() * (v - result.mean));
  return result;
}

std::map<std::string, Eigen::VectorXd> LoadEmbeddingsCsv(const std::filesystem::path& path) {
  const auto lines = SplitLines(ReadFile(path));
  std::map<std::string, Eigen::VectorXd> table;
  Eigen::Index dim = -1;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    auto fields = SplitChar(lines[i], ',');
    if (i == 0 && fields.size() >= 2 && Trim(fields[0]) == "id") continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    if (fields.size() < 2) throw DataError(where + ": expected id,v0,...");
    Eigen::VectorXd v(static_cast<Eigen::Index>(fields.size() - 1));
    for (size_t j = 1; j < fields.size(); ++j) v(static_cast<Eigen::Index>(j - 1)) = ParseDouble(fields[j], where);
    if (dim >= 0 && v.size() != dim) throw DataError(where + ": inconsistent embedding dimension");
    dim = v.size();
    std::string id(Trim(fields[0]));
    if (!table.emplace(id, std::move(v)).second) throw DataError(where + ": duplicate id '" + id + "'");
  }
  return table;
}

EmbeddingSet BuildEmbeddingSet(const std::vector<UtteranceRecord>& records,
                               const std::map<std::string, Eigen::VectorXd>* table,
                               std::vector<std::string>* missing) {
  EmbeddingSet set;
  for (const auto& rec : records) {
    Eigen::VectorXd v;
    if (table) {
      auto it = table->find(rec.id);
      if (it == table->end()) {
        if (missing) missing->push_back(rec.id);
        continue;
      }
      v = it->second;
    } else if (rec.embedding_path) {
      const auto raw = LoadEmbeddingFile(*rec.embedding_path);
      v = Eigen::Map<const Eigen::VectorXd>(raw.data(), static_cast<Eigen::Index>(raw.size()));
    } else {
      if (missing) missing->push_back(rec.id);
      continue;
    }
    set.vectors[rec.id] = std::move(v);
    set.speaker_of[rec.id] = rec.speaker;
  }
  set.Validate();
  return set;
}

}  // namespace speechdist
