// tests/augment_test.cc

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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "speechdist/augment.h"
#include "speechdist/error.h"
#include "speechdist/srmr.h"

namespace speechdist {
namespace {

double Power(const std::vector<double>& x) {
  double p = 0.0;
  for (double v : x) p += v * v;
  return p / x.size();
}

double RealizedSnr(const AudioBuffer& in, const AudioBuffer& out) {
  std::vector<double> noise(in.samples.size());
  for (size_t i = 0; i < noise.size(); ++i) noise[i] = out.samples[i] - in.samples[i];
  return 10.0 * std::log10(Power(in.samples) / Power(noise));
}

AudioBuffer Speech(double duration, uint64_t seed) {
  Rng rng(seed);
  fixtures::SpeechLikeParams p;
  p.duration = duration;
  return fixtures::SpeechLike(p, rng);
}

TEST(Policy, Validate) {
  EXPECT_NO_THROW(AugmentPolicy{}.Validate());
  AugmentPolicy p;
  p.snr_min = 50;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.rir_probability = 1.5;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.rt60_min = 0.0;
  EXPECT_THROW(p.Validate(), ConfigError);
}

TEST(Plan, RangesAndFraction) {
  std::set<std::string> speakers;
  for (int i = 0; i < 10000; ++i) speakers.insert("spk" + std::to_string(i));
  AugmentPolicy policy;
  auto plan = PlanSpeakerAugmentation(policy, speakers, 5);
  ASSERT_EQ(plan.size(), 10000u);
  size_t with_rir = 0;
  for (const auto& [spk, p] : plan) {
    EXPECT_GE(p.snr_db, 5.0);
    EXPECT_LE(p.snr_db, 40.0);
    EXPECT_EQ(p.apply_rir, p.rt60.has_value());
    if (p.rt60) {
      EXPECT_GE(*p.rt60, 0.15);
      EXPECT_LE(*p.rt60, 0.8);
      ++with_rir;
    }
  }
  EXPECT_NEAR(with_rir / 10000.0, 0.8, 0.02);
}

TEST(Plan, DeterministicAndSubsetStable) {
  std::set<std::string> all = {"a", "b", "c", "d", "e"}, some = {"e", "b"};
  auto p1 = PlanSpeakerAugmentation({}, all, 3);
  auto p2 = PlanSpeakerAugmentation({}, all, 3);
  auto p3 = PlanSpeakerAugmentation({}, some, 3);
  auto p4 = PlanSpeakerAugmentation({}, all, 4);
  EXPECT_EQ(AugmentPlanToJson({}, p1, 3).dump(), AugmentPlanToJson({}, p2, 3).dump());
  for (const auto& [k, v] : p3) {
    EXPECT_EQ(v.snr_db, p1.at(k).snr_db);
    EXPECT_EQ(v.rt60, p1.at(k).rt60);
  }
  EXPECT_NE(p1.at("a").snr_db, p4.at("a").snr_db);
}

TEST(Noise, VanishingLimit) {
  AudioBuffer x = Speech(1.0, 1);
  Rng rng(2);
  AudioBuffer y = AddNoiseAtSnr(x, 100.0, rng);
  EXPECT_LT(std::sqrt(Power(std::vector<double>(y.samples)) / Power(x.samples)) - 1.0, 1e-4);
  std::vector<double> diff(x.samples.size());
  for (size_t i = 0; i < diff.size(); ++i) diff[i] = y.samples[i] - x.samples[i];
  EXPECT_LT(std::sqrt(Power(diff) / Power(x.samples)), 1e-4);
}

TEST(Noise, UnitPowerZeroDb) {
  AudioBuffer x;
  x.samples.resize(16000);
  for (size_t i = 0; i < x.samples.size(); ++i) x.samples[i] = (i % 2) ? 1.0 : -1.0;
  Rng rng(3);
  AudioBuffer y = AddNoiseAtSnr(x, 0.0, rng);
  std::vector<double> noise(x.samples.size());
  for (size_t i = 0; i < noise.size(); ++i) noise[i] = y.samples[i] - x.samples[i];
  EXPECT_NEAR(Power(noise), 1.0, 0.01);
}

TEST(Noise, CalibratedAcrossTargets) {
  for (double duration : {1.0, 3.0})
    for (double snr : {5.0, 12.5, 20.0, 33.0, 40.0}) {
      AudioBuffer x = Speech(duration, 4);
      Rng rng(static_cast<uint64_t>(snr * 10));
      EXPECT_NEAR(RealizedSnr(x, AddNoiseAtSnr(x, snr, rng)), snr, 0.1) << snr;
    }
  AudioBuffer silent;
  silent.samples.assign(100, 0.0);
  Rng rng(1);
  EXPECT_THROW(AddNoiseAtSnr(silent, 10, rng), DataError);
}

TEST(Rir, LengthEnergyDeterminism) {
  Rng a(5), b(5);
  Rir r = SynthRir(0.4, 16000, a);
  EXPECT_EQ(r.taps.size(), 9600u);
  double e = 0.0;
  for (double t : r.taps) e += t * t;
  EXPECT_NEAR(e, 1.0, 1e-9);
  EXPECT_EQ(r.taps, SynthRir(0.4, 16000, b).taps);
  Rng c(1);
  EXPECT_THROW(SynthRir(0.0, 16000, c), ConfigError);
}

TEST(Rir, EnvelopeAtHalfRt60) {
  Rng rng(6);
  const double rt60 = 0.4;
  Rir r = SynthRir(rt60, 16000, rng);
  auto mean_abs = [&](size_t centre) {
    double s = 0.0;
    for (size_t i = centre - 200; i < centre + 200; ++i) s += std::abs(r.taps[i]);
    return s / 400;
  };
  // Window at t=0 is one-sided; use a 400-tap window centred just after it.
  double head = 0.0;
  for (size_t i = 0; i < 400; ++i) head += std::abs(r.taps[i]) / std::exp(-3.0 * std::log(10.0) * i / (16000 * rt60));
  head /= 400;
  const double ratio = mean_abs(static_cast<size_t>(0.5 * rt60 * 16000)) / head;
  EXPECT_NEAR(20.0 * std::log10(ratio), -30.0, 1.5);
}

TEST(Rir, Rt60RoundTrip) {
  for (double t : {0.15, 0.3, 0.4, 0.6, 0.8})
    for (uint64_t seed = 0; seed < 5; ++seed) {
      Rng rng(seed);
      const double est = EstimateRt60(SynthRir(t, 16000, rng));
      EXPECT_GE(est, 0.85 * t) << t;
      EXPECT_LE(est, 1.15 * t) << t;
    }
}

TEST(Rir, IdealDecayExact) {
  for (double t : {0.2, 0.5}) {
    Rir r;
    r.target_rt60 = t;
    r.taps.resize(static_cast<size_t>(1.5 * t * 16000));
    for (size_t n = 0; n < r.taps.size(); ++n) r.taps[n] = std::exp(-3.0 * std::log(10.0) * n / (16000 * t));
    EXPECT_NEAR(EstimateRt60(r), t, 0.01 * t);
  }
  Rir impulse;
  impulse.taps = {1.0};
  EXPECT_THROW(EstimateRt60(impulse), NumericError);
}

TEST(ApplyRir, IdentityAndShift) {
  AudioBuffer x = Speech(0.5, 7);
  Rir id;
  id.taps = {1.0};
  RirResult r = ApplyRir(x, id);
  EXPECT_EQ(r.audio.samples, x.samples);
  EXPECT_EQ(r.scale, 1.0);

  Rir shift;
  shift.taps.assign(11, 0.0);
  shift.taps[10] = 1.0;
  RirResult s = ApplyRir(x, shift);
  ASSERT_EQ(s.audio.samples.size(), x.samples.size());
  for (size_t i = 0; i < 10; ++i) EXPECT_EQ(s.audio.samples[i], 0.0);
  for (size_t i = 10; i < x.samples.size(); ++i) EXPECT_NEAR(s.audio.samples[i], x.samples[i - 10], 1e-12);

  Rir wrong = id;
  wrong.sample_rate = 8000;
  EXPECT_THROW(ApplyRir(x, wrong), DataError);
}

TEST(ApplyRir, PeakNormalizedOnlyWhenNeeded) {
  AudioBuffer x;
  x.samples.assign(100, 0.6);
  Rir two;
  two.taps = {1.0, 1.0};
  RirResult r = ApplyRir(x, two);
  EXPECT_NEAR(r.scale, 1.0 / 1.2, 1e-12);
  double peak = 0.0;
  for (double v : r.audio.samples) peak = std::max(peak, std::abs(v));
  EXPECT_NEAR(peak, 1.0, 1e-12);
}

TEST(ApplyRir, ReverbLowersSrmr) {
  AudioBuffer x = Speech(2.0, 8);
  Rng rng(9);
  RirResult r = ApplyRir(x, SynthRir(0.8, 16000, rng));
  EXPECT_LT(Srmr(r.audio), Srmr(x));
}

}  // namespace
}  // namespace speechdist
