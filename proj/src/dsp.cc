// src/dsp.cc

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

#include "speechdist/dsp.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace speechdist::dsp {

using Complex = std::complex<double>;

size_t NextPow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void Fft(std::vector<Complex>& data, bool inverse) {
  const size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("Fft: size must be a power of two");

  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t half = len / 2;
    std::vector<Complex> twiddle(half);
    for (size_t k = 0; k < half; ++k)
      twiddle[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi *
                                       static_cast<double>(k) / static_cast<double>(len));
    for (size_t start = 0; start < n; start += len) {
      for (size_t k = 0; k < half; ++k) {
        Complex u = data[start + k];
        Complex v = data[start + k + half] * twiddle[k];
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : data) c *= scale;
  }
}

std::vector<double> Convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const size_t out_len = a.size() + b.size() - 1;
  std::vector<double> out(out_len, 0.0);
  if (std::min(a.size(), b.size()) <= 64) {
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  }
  const size_t n = NextPow2(out_len);
  std::vector<Complex> fa(n), fb(n);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  Fft(fa, false);
  Fft(fb, false);
  for (size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  Fft(fa, true);
  for (size_t i = 0; i < out_len; ++i) out[i] = fa[i].real();
  return out;
}

std::vector<double> HilbertEnvelope(std::span<const double> x) {
  if (x.empty()) return {};
  const size_t n = NextPow2(x.size());
  std::vector<Complex> spec(n);
  std::copy(x.begin(), x.end(), spec.begin());
  Fft(spec, false);
  // Keep DC and Nyquist, double positive frequencies, zero the negative ones.
  for (size_t k = 1; k < n / 2; ++k) spec[k] *= 2.0;
  for (size_t k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;
  Fft(spec, true);
  std::vector<double> env(x.size());
  for (size_t i = 0; i < x.size(); ++i) env[i] = std::abs(spec[i]);
  return env;
}

Biquad Biquad::Bandpass(double center_hz, double q, double sample_rate) {
  const double w0 = 2.0 * std::numbers::pi * center_hz / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  Biquad bq;
  bq.b0_ = alpha / a0;
  bq.b1_ = 0.0;
  bq.b2_ = -alpha / a0;
  bq.a1_ = -2.0 * std::cos(w0) / a0;
  bq.a2_ = (1.0 - alpha) / a0;
  return bq;
}

std::vector<double> Biquad::Filter(std::span<const double> x) const {
  std::vector<double> y(x.size());
  double s1 = 0.0, s2 = 0.0;  // transposed direct form II state
  for (size_t i = 0; i < x.size(); ++i) {
    const double in = x[i];
    const double out = b0_ * in + s1;
    s1 = b1_ * in - a1_ * out + s2;
    s2 = b2_ * in - a2_ * out;
    y[i] = out;
  }
  return y;
}

std::vector<double> Resample(std::span<const double> x, int in_rate, int out_rate) {
  if (in_rate <= 0 || out_rate <= 0)
    throw std::invalid_argument("Resample: rates must be positive");
  if (in_rate == out_rate) return {x.begin(), x.end()};

  const size_t out_len = static_cast<size_t>(
      (static_cast<unsigned long long>(x.size()) * static_cast<unsigned>(out_rate)) /
      static_cast<unsigned>(in_rate));
  std::vector<double> y(out_len, 0.0);

  constexpr int kNumZeros = 16;
  const double cutoff = 0.99 * 0.5 * std::min(in_rate, out_rate);
  const double half_width = kNumZeros / (2.0 * cutoff);  // seconds
  const double in_rate_d = in_rate;

  for (size_t i = 0; i < out_len; ++i) {
    const double t = static_cast<double>(i) / out_rate;
    const long first = std::max<long>(0, static_cast<long>(std::ceil((t - half_width) * in_rate_d)));
    const long last = std::min<long>(static_cast<long>(x.size()) - 1,
                                     static_cast<long>(std::floor((t + half_width) * in_rate_d)));
    double acc = 0.0;
    for (long j = first; j <= last; ++j) {
      const double dt = t - static_cast<double>(j) / in_rate_d;
      if (std::abs(dt) >= half_width) continue;
      const double window = 0.5 * (1.0 + std::cos(std::numbers::pi * dt / half_width));
      const double arg = 2.0 * cutoff * dt;
      const double sinc = arg == 0.0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
      acc += x[j] * window * sinc;
    }
    y[i] = acc * 2.0 * cutoff / in_rate_d;
  }
  return y;
}

std::vector<double> HammingWindow(size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (size_t i = 0; i < n; ++i)
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(n - 1));
  return w;
}

}  // namespace speechdist::dsp
