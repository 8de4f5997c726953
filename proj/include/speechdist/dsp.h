// include/speechdist/dsp.h

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

#ifndef SPEECHDIST_DSP_H_
#define SPEECHDIST_DSP_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace speechdist::dsp {

size_t NextPow2(size_t n);

// In-place radix-2 FFT; data.size() must be a power of two. The inverse
// transform includes the 1/N scaling.
void Fft(std::vector<std::complex<double>>& data, bool inverse);

// Full linear convolution, length a.size() + b.size() - 1. Short kernels are
// convolved directly so that e.g. a unit impulse reproduces the input exactly.
std::vector<double> Convolve(std::span<const double> a, std::span<const double> b);

// Magnitude of the analytic signal (Hilbert envelope).
std::vector<double> HilbertEnvelope(std::span<const double> x);

// Second-order bandpass section, constant 0 dB peak gain (RBJ cookbook form).
class Biquad {
 public:
  static Biquad Bandpass(double center_hz, double q, double sample_rate);
  std::vector<double> Filter(std::span<const double> x) const;

 private:
  double b0_ = 0, b1_ = 0, b2_ = 0, a1_ = 0, a2_ = 0;
};

// Band-limited resampling with a Hann-windowed sinc kernel. Output length is
// floor(n * out_rate / in_rate); equal rates return the input unchanged.
std::vector<double> Resample(std::span<const double> x, int in_rate, int out_rate);

std::vector<double> HammingWindow(size_t n);

}  // namespace speechdist::dsp

#endif  // SPEECHDIST_DSP_H_
