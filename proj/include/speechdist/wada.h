// include/speechdist/wada.h

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

#ifndef SPEECHDIST_WADA_H_
#define SPEECHDIST_WADA_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "speechdist/corpus.h"

namespace speechdist {

// Waveform-amplitude-distribution SNR estimation. Speech amplitudes are
// modelled as Gamma(shape 0.4) with random sign, noise as Gaussian, and the
// statistic G = ln(mean|x|) - mean(ln|x|) is inverted through a table of its
// expected value against SNR.

inline constexpr double kWadaSpeechShape = 0.4;
inline constexpr double kWadaMinSnr = -20.0;
inline constexpr double kWadaMaxSnr = 100.0;
inline constexpr double kWadaSnrStep = 0.5;

struct WadaTable {
  int version = 0;
  std::vector<double> snr_db;  // ascending
  std::vector<double> g;       // strictly ascending

  // Throws NumericError unless both columns are strictly ascending.
  void Validate() const;
  // Linear interpolation of SNR at statistic `g_value`, clamped to the grid.
  double Invert(double g_value) const;
};

// Table shipped with the library, parsed once.
const WadaTable& DefaultWadaTable();

WadaTable ParseWadaTable(std::string_view text);
std::string FormatWadaTable(const WadaTable& table);

// Monte Carlo generation: `samples` Gamma/Gaussian pairs drawn once from
// `seed` and reused at every grid point, with the noise scaled so the realized
// SNR of the drawn sequences equals the grid value exactly.
WadaTable GenerateWadaTable(uint64_t seed, size_t samples, int version = 1);

// Pool-adjacent-violators fit of `g` (least squares under nondecreasing
// order), then each value raised to at least its predecessor + min_step.
// Returns the number of entries changed. The Monte Carlo curve is flat to
// within sampling noise below about -10 dB, so raw tables need this.
size_t EnforceAscending(std::vector<double>& g, double min_step = 1e-9);

// G over the nonzero samples. Throws NumericError when all samples are zero.
double WadaStatistic(std::span<const double> x);

// Estimated SNR in dB, clamped to [-20, 100]. Throws DataError for audio
// shorter than 0.5 s, NumericError for all-zero audio.
double WadaSnr(const AudioBuffer& audio, const WadaTable& table = DefaultWadaTable());

}  // namespace speechdist

#endif  // SPEECHDIST_WADA_H_
