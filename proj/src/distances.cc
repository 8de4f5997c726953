// src/distances.cc

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

#include "speechdist/distances.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>

#include "speechdist/error.h"
#include "speechdist/io.h"

namespace speechdist {

EmpiricalSample::EmpiricalSample(std::vector<double> values, std::string source, std::string measure)
    : values_(std::move(values)), source_(std::move(source)), measure_(std::move(measure)) {
  if (values_.empty()) throw DataError("empirical sample '" + measure_ + "' is empty");
  for (double v : values_)
    if (!std::isfinite(v)) throw DataError("empirical sample '" + measure_ + "' has a non-finite value");
  std::sort(values_.begin(), values_.end());
}

std::pair<EmpiricalSample, EmpiricalSample> NormalizeByReference(const EmpiricalSample& reference,
                                                                 const EmpiricalSample& candidate) {
  const auto& r = reference.values();
  if (r.size() < 2) throw NumericError("normalize: reference needs at least 2 values");
  const double n = static_cast<double>(r.size());
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : r) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0)) throw NumericError("normalize: reference '" + reference.measure() + "' has zero variance");

  auto transform = [&](const EmpiricalSample& s) {
    std::vector<double> out(s.values());
    for (double& v : out) v = (v - mean) / sd;
    return EmpiricalSample(std::move(out), s.source(), s.measure());
  };
  return {transform(reference), transform(candidate)};
}

double Wasserstein2EqualSize(const EmpiricalSample& p, const EmpiricalSample& q) {
  if (p.size() != q.size()) throw DataError("Wasserstein2EqualSize: sizes differ");
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double d = p.values()[i] - q.values()[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(p.size()));
}

double Wasserstein2Quantile(const EmpiricalSample& p, const EmpiricalSample& q) {
  const uint64_t np = p.size(), nq = q.size();
  // p's i-th order statistic covers [i*nq, (i+1)*nq), q's j-th covers
  // [j*np, (j+1)*np), in units of 1/(np*nq).
  uint64_t pos = 0;
  size_t i = 0, j = 0;
  double acc = 0.0;
  const uint64_t total = np * nq;
  while (pos < total) {
    const uint64_t end_p = (i + 1) * nq;
    const uint64_t end_q = (j + 1) * np;
    const uint64_t next = std::min(end_p, end_q);
    const double d = p.values()[i] - q.values()[j];
    acc += static_cast<double>(next - pos) * d * d;
    pos = next;
    if (end_p == next) ++i;
    if (end_q == next) ++j;
  }
  return std::sqrt(acc / static_cast<double>(total));
}

double Wasserstein2(const EmpiricalSample& p, const EmpiricalSample& q) {
  if (p.size() == q.size()) return Wasserstein2EqualSize(p, q);
  return Wasserstein2Quantile(p, q);
}

NormalizedPair NormalizedMeasureSamples(const std::vector<MeasureRow>& reference,
                                        const std::vector<MeasureRow>& candidate, Measure measure) {
  NormalizedPair out;
  std::map<std::string, const MeasureRow*> cand_by_id;
  for (const auto& row : candidate) cand_by_id.emplace(row.id, &row);

  const auto has = [measure](const MeasureRow& r) { return r.measures.get(measure).has_value(); };
  const bool ref_any = std::any_of(reference.begin(), reference.end(), has);
  const bool cand_any = std::any_of(candidate.begin(), candidate.end(), has);

  std::vector<double> ref_values, cand_values;
  for (const auto& row : reference) {
    auto it = cand_by_id.find(row.id);
    if (it == cand_by_id.end()) continue;
    const auto& rv = row.measures.get(measure);
    const auto& cv = it->second->measures.get(measure);
    if (!rv.value || !cv.value) {
      ++out.n_dropped;
      continue;
    }
    ref_values.push_back(*rv.value);
    cand_values.push_back(*cv.value);
  }

  if (!ref_any) {
    out.note = "measure absent in reference corpus";
  } else if (!cand_any) {
    out.note = "measure absent in candidate corpus";
  } else if (ref_values.size() < 2) {
    out.note = "fewer than 2 paired values";
  } else {
    const std::string key(MeasureKey(measure));
    try {
      out.samples = NormalizeByReference(EmpiricalSample(std::move(ref_values), "reference", key),
                                         EmpiricalSample(std::move(cand_values), "candidate", key));
    } catch (const NumericError& e) {
      out.note = e.what();
    }
  }
  return out;
}

std::vector<DistanceReportRow> MeasureDistanceTable(const std::vector<MeasureRow>& reference,
                                                    const std::vector<MeasureRow>& candidate) {
  std::vector<DistanceReportRow> rows;
  for (Measure m : kAllMeasures) {
    DistanceReportRow row;
    row.measure = m;
    NormalizedPair pair = NormalizedMeasureSamples(reference, candidate, m);
    row.n_dropped = pair.n_dropped;
    row.note = pair.note;
    if (pair.samples) {
      row.n_reference = pair.samples->first.size();
      row.n_candidate = pair.samples->second.size();
      row.w2_normalized = Wasserstein2(pair.samples->first, pair.samples->second);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string FormatDistanceCsv(const std::vector<DistanceReportRow>& rows) {
  std::string out = "measure,w2_normalized,n_reference,n_candidate,n_dropped\n";
  for (const auto& r : rows) {
    out += std::string(MeasureLabel(r.measure)) + ",";
    if (r.w2_normalized) out += FormatG(*r.w2_normalized, 6);
    out += "," + std::to_string(r.n_reference) + "," + std::to_string(r.n_candidate) + "," +
           std::to_string(r.n_dropped) + "\n";
  }
  return out;
}

nlohmann::json DistanceRowsToJson(const std::vector<DistanceReportRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["measure"] = std::string(MeasureLabel(r.measure));
    j["key"] = std::string(MeasureKey(r.measure));
    j["unit"] = std::string(MeasureUnit(r.measure));
    j["w2_normalized"] = r.w2_normalized ? nlohmann::json(*r.w2_normalized) : nlohmann::json(nullptr);
    j["n_reference"] = r.n_reference;
    j["n_candidate"] = r.n_candidate;
    j["n_dropped"] = r.n_dropped;
    j["available"] = r.available();
    j["note"] = r.note;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<HistogramBin> PooledHistogram(const EmpiricalSample& reference,
                                          const EmpiricalSample& candidate, int bins) {
  if (bins < 1) throw ConfigError("histogram: need at least one bin");
  double lo = std::min(reference.values().front(), candidate.values().front());
  double hi = std::max(reference.values().back(), candidate.values().back());
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / bins;
  std::vector<HistogramBin> out(bins);
  for (int b = 0; b < bins; ++b) {
    out[b].left = lo + b * width;
    out[b].right = b + 1 == bins ? hi : lo + (b + 1) * width;
  }
  auto index = [&](double v) {
    int b = static_cast<int>(std::floor((v - lo) / width));
    return std::clamp(b, 0, bins - 1);
  };
  for (double v : reference.values()) ++out[index(v)].count_reference;
  for (double v : candidate.values()) ++out[index(v)].count_candidate;
  return out;
}

std::string FormatHistogramCsv(const std::vector<HistogramBin>& bins) {
  std::string out = "bin_left,bin_right,count_reference,count_candidate\n";
  for (const auto& b : bins)
    out += FormatG(b.left, 9) + "," + FormatG(b.right, 9) + "," + std::to_string(b.count_reference) +
           "," + std::to_string(b.count_candidate) + "\n";
  return out;
}

}  // namespace speechdist
