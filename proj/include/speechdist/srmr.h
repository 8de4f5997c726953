// include/speechdist/srmr.h

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

#ifndef SPEECHDIST_SRMR_H_
#define SPEECHDIST_SRMR_H_

#include <array>
#include <vector>

#include "speechdist/corpus.h"

namespace speechdist {

// Speech-to-reverberation modulation energy ratio.
//
// Front end: 23 fourth-order gammatone channels, centers equally spaced on the
// ERB-rate scale between 125 Hz and 7.8 kHz. Each channel's temporal envelope
// is the magnitude of its analytic signal. The envelope goes through 8
// second-order modulation bandpass filters (Q = 2, centers log-spaced 4-128 Hz)
// and is framed with 256 ms Hamming windows every 32 ms. E_k is the energy of
// modulation band k summed over channels and frames; the result is
// (E_1 + ... + E_4) / (E_5 + ... + E_8).
struct SrmrConfig {
  int num_channels = 23;
  double min_cf = 125.0;
  double max_cf = 7800.0;
  int num_mod_bands = 8;
  double min_mod_cf = 4.0;
  double max_mod_cf = 128.0;
  double mod_q = 2.0;
  double frame_seconds = 0.256;
  double shift_seconds = 0.032;
  double min_duration = 0.5;
};

std::vector<double> ErbSpacedFrequencies(double low, double high, int n);
std::vector<double> ModulationCenterFrequencies(const SrmrConfig& config = {});

// Per-band energies E_1..E_K (summed over channels and frames).
std::vector<double> ModulationBandEnergies(const AudioBuffer& audio,
                                           const SrmrConfig& config = {});

// Throws DataError for audio shorter than 0.5 s or a rate other than 16 kHz,
// NumericError for all-zero input.
double Srmr(const AudioBuffer& audio, const SrmrConfig& config = {});

}  // namespace speechdist

#endif  // SPEECHDIST_SRMR_H_
