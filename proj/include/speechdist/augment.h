// include/speechdist/augment.h

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

#ifndef SPEECHDIST_AUGMENT_H_
#define SPEECHDIST_AUGMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechdist/corpus.h"
#include "speechdist/rng.h"

namespace speechdist {

struct AugmentPolicy {
  double snr_min = 5.0;   // dB
  double snr_max = 40.0;  // dB
  double rir_probability = 0.8;
  double rt60_min = 0.15;  // seconds
  double rt60_max = 0.8;   // seconds
  bool per_speaker = true;

  void Validate() const;
};

struct SpeakerAugmentParams {
  double snr_db = 0.0;
  bool apply_rir = false;
  std::optional<double> rt60;  // present iff apply_rir
};

// One parameter draw per key (speaker id, or utterance id when the policy is
// not per-speaker). Each key draws from its own stream derived from
// (seed, key), so the plan does not depend on iteration order.
std::map<std::string, SpeakerAugmentParams> PlanSpeakerAugmentation(const AugmentPolicy& policy,
                                                                    const std::set<std::string>& keys,
                                                                    uint64_t seed);

nlohmann::json AugmentPlanToJson(const AugmentPolicy& policy,
                                 const std::map<std::string, SpeakerAugmentParams>& plan, uint64_t seed);

// Adds white Gaussian noise whose mean power over the utterance is exactly
// P_signal / 10^(snr_db / 10); the generated sequence is rescaled to that
// power. The output is not renormalized. Throws DataError on silent input.
AudioBuffer AddNoiseAtSnr(const AudioBuffer& audio, double snr_db, Rng& rng);

struct Rir {
  std::vector<double> taps;
  int sample_rate = kInternalSampleRate;
  double target_rt60 = 0.0;
};

// Exponentially decaying white Gaussian noise, -60 dB after rt60 seconds,
// ceil(1.5 * rt60 * sample_rate) taps, normalized to unit energy.
Rir SynthRir(double rt60, int sample_rate, Rng& rng);

// Schroeder backward integration with a least-squares line over the -5 dB to
// -25 dB span of the energy decay curve. Throws NumericError when the decay
// never reaches -25 dB.
double EstimateRt60(const Rir& rir);

struct RirResult {
  AudioBuffer audio;
  double scale = 1.0;  // applied peak normalization, 1 when none was needed
};

// Convolution truncated to the input length; peak-normalized only when the
// result exceeds full scale. Throws DataError on a sample-rate mismatch.
RirResult ApplyRir(const AudioBuffer& audio, const Rir& rir);

}  // namespace speechdist

#endif  // SPEECHDIST_AUGMENT_H_
