// src/attributes.cc

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

#include "speechdist/attributes.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "speechdist/error.h"
#include "speechdist/io.h"

namespace speechdist {

namespace {

using nlohmann::json;

double LogGaussianDiag(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const Eigen::VectorXd& var) {
  double acc = 0.0;
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    const double diff = x(d) - mean(d);
    acc += std::log(2.0 * std::numbers::pi * var(d)) + diff * diff / var(d);
  }
  return -0.5 * acc;
}

double LogSumExp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// E-step: fills responsibilities (n x k) and returns the total log-likelihood.
double EStep(const GmmModel& model, const std::vector<Eigen::VectorXd>& samples, Eigen::MatrixXd& resp) {
  const int k = model.num_components();
  resp.resize(static_cast<Eigen::Index>(samples.size()), k);
  std::vector<double> logp(k);
  double total = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    for (int c = 0; c < k; ++c)
      logp[c] = model.weights[c] > 0.0
                    ? std::log(model.weights[c]) + LogGaussianDiag(samples[i], model.means[c], model.variances[c])
                    : -std::numeric_limits<double>::infinity();
    const double lse = LogSumExp(logp);
    total += lse;
    for (int c = 0; c < k; ++c) resp(static_cast<Eigen::Index>(i), c) = std::exp(logp[c] - lse);
  }
  return total;
}

void MStep(const std::vector<Eigen::VectorXd>& samples, const Eigen::MatrixXd& resp, double floor,
           GmmModel& model) {
  const int k = model.num_components();
  const Eigen::Index d = model.dim();
  const double n = static_cast<double>(samples.size());
  for (int c = 0; c < k; ++c) {
    const double nk = resp.col(c).sum();
    if (!(nk > 1e-300)) {
      // No support: the component's parameters cannot change the likelihood.
      model.weights[c] = 0.0;
      continue;
    }
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (size_t i = 0; i < samples.size(); ++i) mean += resp(static_cast<Eigen::Index>(i), c) * samples[i];
    mean /= nk;
    Eigen::VectorXd var = Eigen::VectorXd::Zero(d);
    for (size_t i = 0; i < samples.size(); ++i)
      var += resp(static_cast<Eigen::Index>(i), c) * (samples[i] - mean).cwiseAbs2();
    var /= nk;
    model.weights[c] = nk / n;
    model.means[c] = std::move(mean);
    model.variances[c] = var.cwiseMax(floor);
  }
  const double wsum = std::accumulate(model.weights.begin(), model.weights.end(), 0.0);
  for (double& w : model.weights) w /= wsum;
}

GmmModel KMeansPlusPlusInit(const std::vector<Eigen::VectorXd>& samples, int k, double floor, uint64_t seed) {
  Rng rng(seed);
  const size_t n = samples.size();
  const Eigen::Index d = samples.front().size();

  Eigen::VectorXd global_mean = Eigen::VectorXd::Zero(d);
  for (const auto& s : samples) global_mean += s;
  global_mean /= static_cast<double>(n);
  Eigen::VectorXd global_var = Eigen::VectorXd::Zero(d);
  for (const auto& s : samples) global_var += (s - global_mean).cwiseAbs2();
  global_var = (global_var / static_cast<double>(n)).cwiseMax(floor);

  std::vector<size_t> centers;
  centers.push_back(static_cast<size_t>(rng.Uniform() * static_cast<double>(n)) % n);
  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
  while (static_cast<int>(centers.size()) < k) {
    const auto& last = samples[centers.back()];
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i], (samples[i] - last).squaredNorm());
      total += dist2[i];
    }
    size_t pick = n - 1;
    if (total > 0.0) {
      double target = rng.Uniform() * total;
      for (size_t i = 0; i < n; ++i) {
        target -= dist2[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<size_t>(rng.Uniform() * static_cast<double>(n)) % n;
    }
    centers.push_back(pick);
  }

  GmmModel model;
  for (size_t c : centers) {
    model.weights.push_back(1.0 / k);
    model.means.push_back(samples[c]);
    model.variances.push_back(global_var);
  }
  return model;
}

json VectorToJson(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd VectorFromJson(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

json GmmToJson(const GmmModel& m) {
  json j;
  j["weights"] = m.weights;
  j["means"] = json::array();
  j["variances"] = json::array();
  for (int c = 0; c < m.num_components(); ++c) {
    j["means"].push_back(VectorToJson(m.means[c]));
    j["variances"].push_back(VectorToJson(m.variances[c]));
  }
  return j;
}

GmmModel GmmFromJson(const json& j) {
  GmmModel m;
  m.weights = j.at("weights").get<std::vector<double>>();
  for (const auto& v : j.at("means")) m.means.push_back(VectorFromJson(v));
  for (const auto& v : j.at("variances")) m.variances.push_back(VectorFromJson(v));
  m.Validate();
  return m;
}

NormStats ComputeNorm(const std::vector<double>& values) {
  NormStats s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (sd > 0.0) s.sd = sd;
  }
  return s;
}

}  // namespace

void GmmModel::Validate(double floor) const {
  if (weights.empty()) throw DataError("GMM: no components");
  if (means.size() != weights.size() || variances.size() != weights.size())
    throw DataError("GMM: inconsistent component counts");
  double sum = 0.0;
  for (int c = 0; c < num_components(); ++c) {
    if (!(weights[c] >= 0.0)) throw DataError("GMM: negative weight");
    sum += weights[c];
    if (means[c].size() != dim() || variances[c].size() != dim()) throw DataError("GMM: dimension mismatch");
    if (!means[c].allFinite()) throw DataError("GMM: non-finite mean");
    for (Eigen::Index d = 0; d < dim(); ++d)
      if (!(variances[c](d) > 0.0) || variances[c](d) < floor) throw DataError("GMM: variance below floor");
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DataError("GMM: weights do not sum to 1");
}

double GmmModel::LogLikelihood(const std::vector<Eigen::VectorXd>& samples) const {
  Eigen::MatrixXd resp;
  return EStep(*this, samples, resp);
}

GmmFit FitGmm(const std::vector<Eigen::VectorXd>& samples, const GmmFitOptions& options) {
  if (options.components < 1) throw ConfigError("GMM: need at least one component");
  if (!(options.variance_floor > 0.0)) throw ConfigError("GMM: variance floor must be positive");
  if (samples.empty()) throw DataError("GMM: no samples");
  const Eigen::Index d = samples.front().size();
  for (const auto& s : samples) {
    if (s.size() != d || d < 1) throw DataError("GMM: inconsistent sample dimension");
    if (!s.allFinite()) throw DataError("GMM: non-finite sample");
  }

  GmmFit fit;
  int k = options.components;
  if (samples.size() < static_cast<size_t>(k)) {
    fit.warnings.push_back("only " + std::to_string(samples.size()) + " samples for " + std::to_string(k) +
                           " components; falling back to k=1");
    k = 1;
  }

  GmmModel model = KMeansPlusPlusInit(samples, k, options.variance_floor, options.seed);
  Eigen::MatrixXd resp;
  double ll = EStep(model, samples, resp);
  fit.log_likelihood.push_back(ll);
  for (int it = 0; it < options.max_iterations; ++it) {
    MStep(samples, resp, options.variance_floor, model);
    const double next = EStep(model, samples, resp);
    fit.log_likelihood.push_back(next);
    ++fit.iterations;
    if (!std::isfinite(next)) throw NumericError("GMM: non-finite log-likelihood");
    const bool done = std::abs(next - ll) < options.tolerance * std::max(1.0, std::abs(ll));
    ll = next;
    if (done) {
      fit.converged = true;
      break;
    }
  }
  fit.model = std::move(model);
  return fit;
}

GmmFit FitGmm1d(const std::vector<double>& samples, const GmmFitOptions& options) {
  std::vector<Eigen::VectorXd> v;
  v.reserve(samples.size());
  for (double s : samples) v.push_back(Eigen::VectorXd::Constant(1, s));
  return FitGmm(v, options);
}

Eigen::VectorXd SampleGmm(const GmmModel& model, Rng& rng) {
  const double u = rng.Uniform();
  int comp = model.num_components() - 1;
  double cum = 0.0;
  for (int c = 0; c < model.num_components(); ++c) {
    cum += model.weights[c];
    if (u < cum) {
      comp = c;
      break;
    }
  }
  while (comp > 0 && model.weights[comp] == 0.0) --comp;
  Eigen::VectorXd x(model.dim());
  for (Eigen::Index d = 0; d < model.dim(); ++d)
    x(d) = model.means[comp](d) + std::sqrt(model.variances[comp](d)) * rng.Normal();
  return x;
}

QuantizerCodebook QuantizerCodebook::FromValues(const std::vector<double>& values) {
  if (values.empty()) throw DataError("quantizer: no training values");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw DataError("quantizer: degenerate range (min == max)");
  QuantizerCodebook cb;
  cb.edges.resize(kQuantizerBins + 1);
  for (int i = 0; i <= kQuantizerBins; ++i) cb.edges[i] = lo + (hi - lo) * i / kQuantizerBins;
  cb.edges.back() = hi;
  return cb;
}

int QuantizerCodebook::Quantize(double value) const {
  if (edges.size() != kQuantizerBins + 1 || !(edges.back() > edges.front()))
    throw DataError("quantizer: degenerate codebook");
  const double lo = edges.front(), hi = edges.back();
  const double pos = (value - lo) / (hi - lo) * kQuantizerBins;
  if (!(pos >= 0.0)) return 0;
  return std::min(static_cast<int>(std::floor(pos)), kQuantizerBins - 1);
}

double QuantizerCodebook::BinCenter(int index) const {
  if (index < 0 || index >= kQuantizerBins) throw DataError("quantizer: bin index out of range");
  return 0.5 * (edges[index] + edges[index + 1]);
}

AttributeModelSet FitSpeakerModels(const std::vector<MeasureRow>& measures, const EmbeddingSet* embeddings,
                                   const AttributeFitOptions& options) {
  AttributeModelSet set;
  set.components = options.components;
  set.variance_floor = options.variance_floor;
  set.seed = options.seed;

  // Sorted by id so that input order cannot leak into sums or k-means++ picks.
  std::vector<MeasureRow> sorted = measures;
  std::sort(sorted.begin(), sorted.end(), [](const MeasureRow& a, const MeasureRow& b) { return a.id < b.id; });
  std::map<std::string, std::vector<const MeasureRow*>> by_speaker;
  for (const auto& row : sorted) by_speaker[row.speaker].push_back(&row);

  for (Measure m : kAllMeasures) {
    std::vector<double> all;
    for (const auto& row : sorted)
      if (const auto& v = row.measures.get(m); v.value) all.push_back(*v.value);
    if (all.empty()) {
      set.warnings.push_back("measure " + std::string(MeasureKey(m)) + " has no values; no models fit");
      continue;
    }
    set.measure_norm[m] = ComputeNorm(all);
    try {
      set.codebooks[m] = QuantizerCodebook::FromValues(all);
    } catch (const DataError& e) {
      set.warnings.push_back("measure " + std::string(MeasureKey(m)) + ": " + e.what());
    }
  }

  if (embeddings) {
    embeddings->Validate();
    const Eigen::Index d = embeddings->dim();
    if (d > 0) {
      const double n = static_cast<double>(embeddings->vectors.size());
      set.dvector_mean = Eigen::VectorXd::Zero(d);
      for (const auto& [id, v] : embeddings->vectors) set.dvector_mean += v;
      set.dvector_mean /= n;
      Eigen::VectorXd ss = Eigen::VectorXd::Zero(d);
      for (const auto& [id, v] : embeddings->vectors) ss += (v - set.dvector_mean).cwiseAbs2();
      set.dvector_sd = n >= 2 ? Eigen::VectorXd((ss / (n - 1.0)).cwiseSqrt()) : Eigen::VectorXd::Ones(d);
      for (Eigen::Index i = 0; i < d; ++i)
        if (!(set.dvector_sd(i) > 0.0)) set.dvector_sd(i) = 1.0;
    }
  }

  for (const auto& [speaker, rows] : by_speaker) {
    SpeakerAttributeModel model;
    for (const auto& [m, norm] : set.measure_norm) {
      std::vector<double> values;
      for (const MeasureRow* row : rows)
        if (const auto& v = row->measures.get(m); v.value) values.push_back((*v.value - norm.mean) / norm.sd);
      const std::string key(MeasureKey(m));
      if (values.empty()) {
        set.warnings.push_back("speaker '" + speaker + "': no " + key + " values; model omitted");
        continue;
      }
      GmmFitOptions fit_opts;
      fit_opts.components = options.components;
      fit_opts.variance_floor = options.variance_floor;
      fit_opts.seed = DeriveSeed(options.seed, {"fit-attrs", speaker, key});
      if (values.size() < 2) {
        fit_opts.components = 1;
        set.warnings.push_back("speaker '" + speaker + "': a single " + key + " value; using k=1");
      }
      GmmFit fit = FitGmm1d(values, fit_opts);
      for (const auto& w : fit.warnings) set.warnings.push_back("speaker '" + speaker + "' " + key + ": " + w);
      model.measures[m] = std::move(fit.model);
    }

    if (embeddings && set.dvector_mean.size() > 0) {
      std::vector<Eigen::VectorXd> vecs;
      for (const auto& [id, v] : embeddings->vectors)
        if (embeddings->speaker_of.at(id) == speaker)
          vecs.push_back(((v - set.dvector_mean).array() / set.dvector_sd.array()).matrix());
      if (vecs.empty()) {
        set.warnings.push_back("speaker '" + speaker + "' absent from embeddings; d-vector model omitted");
      } else {
        GmmFitOptions fit_opts;
        fit_opts.components = vecs.size() < 2 ? 1 : options.components;
        fit_opts.variance_floor = options.variance_floor;
        fit_opts.seed = DeriveSeed(options.seed, {"fit-attrs", speaker, "dvector"});
        if (vecs.size() < 2) set.warnings.push_back("speaker '" + speaker + "': a single d-vector; using k=1");
        GmmFit fit = FitGmm(vecs, fit_opts);
        for (const auto& w : fit.warnings) set.warnings.push_back("speaker '" + speaker + "' dvector: " + w);
        model.dvector = std::move(fit.model);
      }
    }
    set.speakers[speaker] = std::move(model);
  }
  return set;
}

json AttributeModelSet::ToJson() const {
  json j;
  j["format"] = "speechdist-attribute-models";
  j["version"] = kFormatVersion;
  j["components"] = components;
  j["variance_floor"] = variance_floor;
  j["seed"] = seed;
  json norm = json::object();
  for (const auto& [m, s] : measure_norm) norm[std::string(MeasureKey(m))] = {{"mean", s.mean}, {"sd", s.sd}};
  j["normalization"] = norm;
  j["dvector_normalization"] =
      dvector_mean.size() > 0 ? json{{"mean", VectorToJson(dvector_mean)}, {"sd", VectorToJson(dvector_sd)}}
                              : json(nullptr);
  json cbs = json::object();
  for (const auto& [m, cb] : codebooks) cbs[std::string(MeasureKey(m))] = cb.edges;
  j["codebooks"] = cbs;
  json spk = json::object();
  for (const auto& [name, model] : speakers) {
    json s;
    json ms = json::object();
    for (const auto& [m, g] : model.measures) ms[std::string(MeasureKey(m))] = GmmToJson(g);
    s["measures"] = ms;
    s["dvector"] = model.dvector ? GmmToJson(*model.dvector) : json(nullptr);
    spk[name] = s;
  }
  j["speakers"] = spk;
  return j;
}

AttributeModelSet AttributeModelSet::FromJson(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "speechdist-attribute-models")
      throw DataError("attribute model: unexpected format tag");
    if (j.at("version").get<int>() != kFormatVersion)
      throw DataError("attribute model: unsupported version " + std::to_string(j.at("version").get<int>()));
    AttributeModelSet set;
    set.components = j.at("components").get<int>();
    set.variance_floor = j.at("variance_floor").get<double>();
    set.seed = j.at("seed").get<uint64_t>();
    auto measure_of = [](const std::string& key) {
      auto m = MeasureFromKey(key);
      if (!m) throw DataError("attribute model: unknown measure '" + key + "'");
      return *m;
    };
    for (const auto& [key, s] : j.at("normalization").items())
      set.measure_norm[measure_of(key)] = {s.at("mean").get<double>(), s.at("sd").get<double>()};
    if (const auto& dn = j.at("dvector_normalization"); !dn.is_null()) {
      set.dvector_mean = VectorFromJson(dn.at("mean"));
      set.dvector_sd = VectorFromJson(dn.at("sd"));
    }
    for (const auto& [key, edges] : j.at("codebooks").items())
      set.codebooks[measure_of(key)].edges = edges.get<std::vector<double>>();
    for (const auto& [name, s] : j.at("speakers").items()) {
      SpeakerAttributeModel model;
      for (const auto& [key, g] : s.at("measures").items()) model.measures[measure_of(key)] = GmmFromJson(g);
      if (const auto& dv = s.at("dvector"); !dv.is_null()) model.dvector = GmmFromJson(dv);
      set.speakers[name] = std::move(model);
    }
    return set;
  } catch (const json::exception& e) {
    throw DataError(std::string("attribute model: malformed JSON (") + e.what() + ")");
  }
}

std::vector<AttributeSample> SampleSpeakerAttributes(const AttributeModelSet& models, const std::string& speaker,
                                                     size_t n, uint64_t seed) {
  auto it = models.speakers.find(speaker);
  if (it == models.speakers.end()) throw DataError("no attribute model for speaker '" + speaker + "'");
  const SpeakerAttributeModel& model = it->second;
  Rng rng(DeriveSeed(seed, {"sample-attrs", speaker}));
  std::vector<AttributeSample> out(n);
  for (auto& sample : out) {
    for (const auto& [m, gmm] : model.measures) {
      const NormStats& norm = models.measure_norm.at(m);
      const double v = SampleGmm(gmm, rng)(0) * norm.sd + norm.mean;
      sample.values[m] = v;
      if (auto cb = models.codebooks.find(m); cb != models.codebooks.end())
        sample.bins[m] = cb->second.Quantize(v);
    }
    if (model.dvector) {
      Eigen::VectorXd z = SampleGmm(*model.dvector, rng);
      sample.dvector = (z.array() * models.dvector_sd.array() + models.dvector_mean.array()).matrix();
    }
  }
  return out;
}

std::string FormatAttributeSamplesCsv(const AttributeModelSet& models, const std::string& speaker,
                                      const std::vector<AttributeSample>& samples) {
  auto it = models.speakers.find(speaker);
  if (it == models.speakers.end()) throw DataError("no attribute model for speaker '" + speaker + "'");
  const SpeakerAttributeModel& model = it->second;
  std::string out = "speaker,index";
  for (const auto& [m, gmm] : model.measures) out += "," + std::string(MeasureKey(m));
  for (const auto& [m, gmm] : model.measures)
    if (models.codebooks.count(m)) out += "," + std::string(MeasureKey(m)) + "_bin";
  const Eigen::Index d = model.dvector ? model.dvector->dim() : 0;
  for (Eigen::Index i = 0; i < d; ++i) out += ",dv" + std::to_string(i);
  out += '\n';
  for (size_t s = 0; s < samples.size(); ++s) {
    out += speaker + "," + std::to_string(s);
    for (const auto& [m, gmm] : model.measures) out += "," + FormatG(samples[s].values.at(m), 6);
    for (const auto& [m, gmm] : model.measures)
      if (models.codebooks.count(m)) out += "," + std::to_string(samples[s].bins.at(m));
    for (Eigen::Index i = 0; i < d; ++i) out += "," + FormatG((*samples[s].dvector)(i), 6);
    out += '\n';
  }
  return out;
}

}  // namespace speechdist
