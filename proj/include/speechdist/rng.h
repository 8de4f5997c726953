// include/speechdist/rng.h

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

#ifndef SPEECHDIST_RNG_H_
#define SPEECHDIST_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace speechdist {

// Derives a child seed from a root seed and a path of names, e.g.
// DeriveSeed(seed, {"augment", speaker, utt_id}). Stable across platforms and
// independent of the order in which different paths are requested.
uint64_t DeriveSeed(uint64_t root, std::initializer_list<std::string_view> path);

// Random stream with platform-stable uniform, normal and gamma draws.
// std::*_distribution output is implementation-defined, so only the engine
// (whose sequence is fixed by the standard) is borrowed from <random>.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  double Normal();
  double Normal(double mean, double sd) { return mean + sd * Normal(); }
  // Gamma(shape, scale), Marsaglia-Tsang; shape < 1 via the U^(1/shape) boost.
  double Gamma(double shape, double scale = 1.0);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace speechdist

#endif  // SPEECHDIST_RNG_H_
