// include/speechdist/distances.h

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

#ifndef SPEECHDIST_DISTANCES_H_
#define SPEECHDIST_DISTANCES_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechdist/measures.h"

namespace speechdist {

// Sorted sample of one measure from one corpus; represents its empirical CDF.
class EmpiricalSample {
 public:
  // Sorts `values`; throws DataError if empty or non-finite.
  EmpiricalSample(std::vector<double> values, std::string source = {}, std::string measure = {});

  const std::vector<double>& values() const { return values_; }
  size_t size() const { return values_.size(); }
  const std::string& source() const { return source_; }
  const std::string& measure() const { return measure_; }

 private:
  std::vector<double> values_;
  std::string source_;
  std::string measure_;
};

// z-scores both samples with the reference mean and (n-1) standard deviation.
// Throws NumericError if the reference has zero variance.
std::pair<EmpiricalSample, EmpiricalSample> NormalizeByReference(const EmpiricalSample& reference,
                                                                 const EmpiricalSample& candidate);

// Exact W2 between two empirical distributions: the L2 distance between their
// quantile functions. Dispatches to the equal-size form when sizes agree.
double Wasserstein2(const EmpiricalSample& p, const EmpiricalSample& q);
// ((1/N) sum |p_(n) - q_(n)|^2)^(1/2); requires equal sizes.
double Wasserstein2EqualSize(const EmpiricalSample& p, const EmpiricalSample& q);
// Piecewise-constant quantile integral over the merged breakpoints
// {i/N_p} U {j/N_q}, accumulated in exact integer units of 1/(N_p N_q).
double Wasserstein2Quantile(const EmpiricalSample& p, const EmpiricalSample& q);

struct DistanceReportRow {
  Measure measure = Measure::kF0;
  std::optional<double> w2_normalized;  // absent when the row is unavailable
  size_t n_reference = 0;
  size_t n_candidate = 0;
  size_t n_dropped = 0;
  std::string note;  // reason when unavailable

  bool available() const { return w2_normalized.has_value(); }
};

struct NormalizedPair {
  std::optional<std::pair<EmpiricalSample, EmpiricalSample>> samples;
  size_t n_dropped = 0;
  std::string note;
};

// Pairs rows by id, drops ids missing `measure` on either side, and
// normalizes by the reference. `samples` is empty (with `note`) when the
// measure cannot be compared.
NormalizedPair NormalizedMeasureSamples(const std::vector<MeasureRow>& reference,
                                        const std::vector<MeasureRow>& candidate, Measure measure);

// One row per measure in the order F0, Energy, SR, SRMR, WADA SNR.
std::vector<DistanceReportRow> MeasureDistanceTable(const std::vector<MeasureRow>& reference,
                                                    const std::vector<MeasureRow>& candidate);

// `measure,w2_normalized,n_reference,n_candidate,n_dropped`
std::string FormatDistanceCsv(const std::vector<DistanceReportRow>& rows);
nlohmann::json DistanceRowsToJson(const std::vector<DistanceReportRow>& rows);

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  size_t count_reference = 0;
  size_t count_candidate = 0;
};

inline constexpr int kHistogramBins = 50;

// Equal-width bins spanning the pooled range of both samples.
std::vector<HistogramBin> PooledHistogram(const EmpiricalSample& reference,
                                          const EmpiricalSample& candidate, int bins = kHistogramBins);
std::string FormatHistogramCsv(const std::vector<HistogramBin>& bins);

}  // namespace speechdist

#endif  // SPEECHDIST_DISTANCES_H_
