// src/augment.cc

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

#include "speechdist/augment.h"

#include <algorithm>
#include <cmath>

#include "speechdist/dsp.h"
#include "speechdist/error.h"

namespace speechdist {

void AugmentPolicy::Validate() const {
  if (!(snr_min <= snr_max)) throw ConfigError("augment: snr range must be ascending");
  if (!(rir_probability >= 0.0 && rir_probability <= 1.0))
    throw ConfigError("augment: rir probability must lie in [0, 1]");
  if (!(rt60_min > 0.0 && rt60_min <= rt60_max))
    throw ConfigError("augment: rt60 range must be positive and ascending");
}

std::map<std::string, SpeakerAugmentParams> PlanSpeakerAugmentation(const AugmentPolicy& policy,
                                                                    const std::set<std::string>& keys,
                                                                    uint64_t seed) {
  policy.Validate();
  std::map<std::string, SpeakerAugmentParams> plan;
  for (const auto& key : keys) {
    Rng rng(DeriveSeed(seed, {"augment-plan", key}));
    SpeakerAugmentParams p;
    p.snr_db = rng.Uniform(policy.snr_min, policy.snr_max);
    p.apply_rir = rng.Uniform() < policy.rir_probability;
    // Drawn unconditionally so every key consumes the same stream length.
    const double rt60 = rng.Uniform(policy.rt60_min, policy.rt60_max);
    if (p.apply_rir) p.rt60 = rt60;
    plan[key] = p;
  }
  return plan;
}

nlohmann::json AugmentPlanToJson(const AugmentPolicy& policy,
                                 const std::map<std::string, SpeakerAugmentParams>& plan, uint64_t seed) {
  nlohmann::json j;
  j["seed"] = seed;
  j["policy"] = {{"snr_min", policy.snr_min},
                 {"snr_max", policy.snr_max},
                 {"rir_probability", policy.rir_probability},
                 {"rt60_min", policy.rt60_min},
                 {"rt60_max", policy.rt60_max},
                 {"per_speaker", policy.per_speaker},
                 {"order", "rir_then_noise"}};
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [key, p] : plan) {
    params[key] = {{"snr_db", p.snr_db},
                   {"apply_rir", p.apply_rir},
                   {"rt60", p.rt60 ? nlohmann::json(*p.rt60) : nlohmann::json(nullptr)}};
  }
  j[policy.per_speaker ? "speakers" : "utterances"] = params;
  return j;
}

AudioBuffer AddNoiseAtSnr(const AudioBuffer& audio, double snr_db, Rng& rng) {
  const size_t n = audio.samples.size();
  if (n == 0) throw DataError("add noise: empty audio");
  double signal_power = 0.0;
  for (double s : audio.samples) signal_power += s * s;
  signal_power /= static_cast<double>(n);
  if (!(signal_power > 0.0)) throw DataError("add noise: silent input (zero power)");

  std::vector<double> noise(n);
  double noise_power = 0.0;
  for (double& v : noise) {
    v = rng.Normal();
    noise_power += v * v;
  }
  noise_power /= static_cast<double>(n);
  const double target = signal_power / std::pow(10.0, snr_db / 10.0);
  const double gain = std::sqrt(target / noise_power);

  AudioBuffer out = audio;
  for (size_t i = 0; i < n; ++i) out.samples[i] += gain * noise[i];
  return out;
}

Rir SynthRir(double rt60, int sample_rate, Rng& rng) {
  if (!(rt60 > 0.0)) throw ConfigError("synth rir: rt60 must be positive");
  if (sample_rate <= 0) throw ConfigError("synth rir: sample rate must be positive");
  // 1.5 * 0.4 * 16000 lands a hair above 9600 in binary.
  const size_t len = static_cast<size_t>(std::ceil(1.5 * rt60 * sample_rate - 1e-9));
  const double decay = 3.0 * std::log(10.0) / (sample_rate * rt60);
  Rir rir;
  rir.sample_rate = sample_rate;
  rir.target_rt60 = rt60;
  rir.taps.resize(len);
  double energy = 0.0;
  for (size_t i = 0; i < len; ++i) {
    rir.taps[i] = rng.Normal() * std::exp(-decay * static_cast<double>(i));
    energy += rir.taps[i] * rir.taps[i];
  }
  const double norm = 1.0 / std::sqrt(energy);
  for (double& t : rir.taps) t *= norm;
  return rir;
}

double EstimateRt60(const Rir& rir) {
  if (rir.taps.empty()) throw DataError("estimate rt60: empty rir");
  if (rir.sample_rate <= 0) throw DataError("estimate rt60: invalid sample rate");
  const size_t n = rir.taps.size();
  std::vector<double> tail(n);
  double acc = 0.0;
  for (size_t i = n; i-- > 0;) {
    acc += rir.taps[i] * rir.taps[i];
    tail[i] = acc;
  }
  if (!(acc > 0.0)) throw NumericError("estimate rt60: rir has no energy");

  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  size_t count = 0;
  bool reached_end = false;
  for (size_t i = 0; i < n; ++i) {
    if (tail[i] <= 0.0) {
      reached_end = true;
      break;
    }
    const double edc = 10.0 * std::log10(tail[i] / acc);
    if (edc < -25.0) {
      reached_end = true;
      break;
    }
    if (edc > -5.0) continue;
    const double t = static_cast<double>(i) / rir.sample_rate;
    st += t;
    sy += edc;
    stt += t * t;
    sty += t * edc;
    ++count;
  }
  if (!reached_end || count < 2)
    throw NumericError("estimate rt60: decay curve does not span -5 dB to -25 dB");
  const double cn = static_cast<double>(count);
  const double denom = cn * stt - st * st;
  const double slope = (cn * sty - st * sy) / denom;  // dB per second
  if (!(slope < 0.0) || !std::isfinite(slope)) throw NumericError("estimate rt60: non-decaying response");
  return -60.0 / slope;
}

RirResult ApplyRir(const AudioBuffer& audio, const Rir& rir) {
  if (audio.sample_rate != rir.sample_rate)
    throw DataError("apply rir: sample rate mismatch (" + std::to_string(audio.sample_rate) + " vs " +
                    std::to_string(rir.sample_rate) + ")");
  if (rir.taps.empty()) throw DataError("apply rir: empty rir");
  RirResult result;
  auto full = dsp::Convolve(audio.samples, rir.taps);
  full.resize(audio.samples.size());
  double peak = 0.0;
  for (double v : full) peak = std::max(peak, std::abs(v));
  if (peak > 1.0) {
    result.scale = 1.0 / peak;
    for (double& v : full) v *= result.scale;
  }
  result.audio.sample_rate = audio.sample_rate;
  result.audio.samples = std::move(full);
  return result;
}

}  // namespace speechdist
