// src/srmr.cc

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

#include "speechdist/srmr.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "speechdist/dsp.h"
#include "speechdist/error.h"

namespace speechdist {

namespace {

using Complex = std::complex<double>;

constexpr double kGammatoneSeconds = 0.08;

double ErbRate(double f) { return 21.4 * std::log10(1.0 + 0.00437 * f); }
double InverseErbRate(double e) { return (std::pow(10.0, e / 21.4) - 1.0) / 0.00437; }
double Erb(double f) { return 24.7 * (0.00437 * f + 1.0); }

// Fourth-order gammatone impulse response, unit gain at its center frequency.
std::vector<double> GammatoneKernel(double cf, double sample_rate) {
  const size_t len = static_cast<size_t>(std::lround(kGammatoneSeconds * sample_rate));
  const double b = 1.019 * Erb(cf);
  std::vector<double> g(len);
  Complex response = 0.0;
  for (size_t n = 0; n < len; ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    g[n] = t * t * t * std::exp(-2.0 * std::numbers::pi * b * t) *
           std::cos(2.0 * std::numbers::pi * cf * t);
    response += g[n] * std::polar(1.0, -2.0 * std::numbers::pi * cf * t);
  }
  const double gain = std::abs(response);
  for (double& v : g) v /= gain;
  return g;
}

}  // namespace

std::vector<double> ErbSpacedFrequencies(double low, double high, int n) {
  std::vector<double> cfs(n);
  const double lo = ErbRate(low), hi = ErbRate(high);
  for (int i = 0; i < n; ++i) {
    const double e = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    cfs[i] = InverseErbRate(e);
  }
  return cfs;
}

std::vector<double> ModulationCenterFrequencies(const SrmrConfig& config) {
  std::vector<double> cfs(config.num_mod_bands);
  const double ratio = config.max_mod_cf / config.min_mod_cf;
  for (int k = 0; k < config.num_mod_bands; ++k) {
    const double frac = config.num_mod_bands == 1 ? 0.0 : static_cast<double>(k) / (config.num_mod_bands - 1);
    cfs[k] = config.min_mod_cf * std::pow(ratio, frac);
  }
  return cfs;
}

std::vector<double> ModulationBandEnergies(const AudioBuffer& audio, const SrmrConfig& config) {
  if (audio.sample_rate != kInternalSampleRate)
    throw DataError("SRMR: expected 16000 Hz audio, got " + std::to_string(audio.sample_rate));
  if (audio.duration() < config.min_duration)
    throw DataError("SRMR: audio shorter than 0.5 s");
  const auto& x = audio.samples;
  if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; }))
    throw NumericError("SRMR: all-zero audio");

  const double fs = audio.sample_rate;
  const size_t n = x.size();
  const size_t frame = static_cast<size_t>(std::lround(config.frame_seconds * fs));
  const size_t shift = static_cast<size_t>(std::lround(config.shift_seconds * fs));
  const std::vector<double> window = dsp::HammingWindow(frame);

  const auto channel_cfs = ErbSpacedFrequencies(config.min_cf, config.max_cf, config.num_channels);
  const auto mod_cfs = ModulationCenterFrequencies(config);
  std::vector<dsp::Biquad> mod_filters;
  for (double cf : mod_cfs) mod_filters.push_back(dsp::Biquad::Bandpass(cf, config.mod_q, fs));

  const size_t kernel_len = static_cast<size_t>(std::lround(kGammatoneSeconds * fs));
  const size_t fft_len = dsp::NextPow2(n + kernel_len - 1);
  std::vector<Complex> spectrum(fft_len);
  std::copy(x.begin(), x.end(), spectrum.begin());
  dsp::Fft(spectrum, false);

  std::vector<double> energies(config.num_mod_bands, 0.0);
  std::vector<Complex> work(fft_len);
  std::vector<double> envelope(n);
  for (double cf : channel_cfs) {
    // Filter and take the analytic signal in one pass: multiply by the
    // gammatone response, then drop negative frequencies.
    const auto kernel = GammatoneKernel(cf, fs);
    std::fill(work.begin(), work.end(), Complex(0.0));
    std::copy(kernel.begin(), kernel.end(), work.begin());
    dsp::Fft(work, false);
    for (size_t k = 0; k < fft_len; ++k) {
      double scale = 0.0;
      if (k == 0 || k == fft_len / 2) scale = 1.0;
      else if (k < fft_len / 2) scale = 2.0;
      work[k] = spectrum[k] * work[k] * scale;
    }
    dsp::Fft(work, true);
    for (size_t i = 0; i < n; ++i) envelope[i] = std::abs(work[i]);

    // DC carries no modulation energy; removing it avoids a start-up transient.
    const double mean = std::accumulate(envelope.begin(), envelope.end(), 0.0) / static_cast<double>(n);
    for (double& e : envelope) e -= mean;

    for (size_t band = 0; band < mod_filters.size(); ++band) {
      const auto filtered = mod_filters[band].Filter(envelope);
      double e = 0.0;
      for (size_t start = 0; start + frame <= n; start += shift) {
        for (size_t j = 0; j < frame; ++j) {
          const double v = window[j] * filtered[start + j];
          e += v * v;
        }
      }
      energies[band] += e;
    }
  }
  return energies;
}

double Srmr(const AudioBuffer& audio, const SrmrConfig& config) {
  const auto energies = ModulationBandEnergies(audio, config);
  const size_t split = energies.size() / 2;
  const double low = std::accumulate(energies.begin(), energies.begin() + split, 0.0);
  const double high = std::accumulate(energies.begin() + split, energies.end(), 0.0);
  if (!(high > 0.0) || !(low > 0.0) || !std::isfinite(low / high))
    throw NumericError("SRMR: degenerate modulation energy");
  return low / high;
}

}  // namespace speechdist
