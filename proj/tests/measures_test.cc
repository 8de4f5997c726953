// tests/measures_test.cc

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

#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "speechdist/error.h"
#include "speechdist/io.h"
#include "speechdist/measures.h"
#include "speechdist/rng.h"

namespace speechdist {
namespace {

namespace fs = std::filesystem;

AudioBuffer Noise(double seconds, uint64_t seed, double sd = 0.1) {
  Rng rng(seed);
  AudioBuffer a;
  a.samples.resize(static_cast<size_t>(seconds * a.sample_rate));
  for (double& v : a.samples) v = rng.Normal(0.0, sd);
  return a;
}

TEST(FrameParams, Validation) {
  FrameParams p;
  EXPECT_NO_THROW(p.Validate());
  p.hop = 0.05;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.f0_min = 500;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = {};
  p.f0_window = 0.02;  // < 2 / 60 Hz
  EXPECT_THROW(p.Validate(), ConfigError);
}

TEST(F0, PureSine200) {
  MeasureValue v = ExtractF0(fixtures::Sine(200.0, 0.5, 1.0), FrameParams{});
  ASSERT_TRUE(v.has_value());
  EXPECT_NEAR(*v.value, 200.0, 2.0);
}

TEST(F0, SinesAcrossRange) {
  for (double f : {65.0, 110.0, 150.0, 333.0, 390.0}) {
    MeasureValue v = ExtractF0(fixtures::Sine(f, 0.3, 1.0), FrameParams{});
    ASSERT_TRUE(v.has_value()) << f;
    EXPECT_NEAR(*v.value, f, 0.01 * f) << f;
  }
}

TEST(F0, WhiteNoiseIsMissing) {
  MeasureValue v = ExtractF0(Noise(1.0, 11), FrameParams{});
  EXPECT_FALSE(v.has_value());
  EXPECT_FALSE(v.missing_reason.empty());
}

TEST(F0, TwoHalves) {
  AudioBuffer a = fixtures::Sine(100.0, 0.5, 0.5);
  AudioBuffer b = fixtures::Sine(300.0, 0.5, 0.5);
  a.samples.insert(a.samples.end(), b.samples.begin(), b.samples.end());
  MeasureValue v = ExtractF0(a, FrameParams{});
  ASSERT_TRUE(v.has_value());
  EXPECT_NEAR(*v.value, 200.0, 5.0);
}

TEST(F0, WithinRangeAndTooShort) {
  FrameParams p;
  MeasureValue v = ExtractF0(fixtures::Sine(50.0, 0.5, 1.0), p);  // below range
  if (v.has_value()) {
    EXPECT_GE(*v.value, p.f0_min);
    EXPECT_LE(*v.value, p.f0_max);
  }
  EXPECT_THROW(ExtractF0(fixtures::Sine(200.0, 0.5, 0.02), p), DataError);
}

TEST(F0, QuietFramesAreUnvoiced) {
  // 0.5 s of 300 Hz at -60 dB then 0.5 s of 150 Hz. Ungated, the mean would
  // sit near 225 Hz; only the onset frame may straddle both.
  AudioBuffer a = fixtures::Sine(300.0, 0.0005, 0.5);
  AudioBuffer b = fixtures::Sine(150.0, 0.5, 0.5);
  a.samples.insert(a.samples.end(), b.samples.begin(), b.samples.end());
  MeasureValue v = ExtractF0(a, FrameParams{});
  ASSERT_TRUE(v.has_value());
  EXPECT_NEAR(*v.value, 150.0, 5.0);
}

TEST(Energy, Cases) {
  FrameParams p;
  AudioBuffer zero;
  zero.samples.assign(16000, 0.0);
  EXPECT_EQ(ExtractEnergy(zero, p), 0.0);
  AudioBuffer half;
  half.samples.assign(16000, 0.5);
  EXPECT_NEAR(ExtractEnergy(half, p), 0.5, 1e-12);
  EXPECT_NEAR(ExtractEnergy(fixtures::Sine(200.0, 1.0, 1.0), p), 1.0 / std::sqrt(2.0), 0.01);
  AudioBuffer tiny = fixtures::Sine(200.0, 1.0, 0.01);
  EXPECT_THROW(ExtractEnergy(tiny, p), DataError);
}

TEST(Energy, ScalesLinearly) {
  Rng rng(4);
  AudioBuffer a = fixtures::SpeechLike({}, rng);
  AudioBuffer b = a;
  for (double& v : b.samples) v *= 0.3;
  FrameParams p;
  EXPECT_NEAR(ExtractEnergy(b, p), 0.3 * ExtractEnergy(a, p), 1e-9);
}

TEST(SpeechRate, Cases) {
  EXPECT_NEAR(SpeechRate({{{"a", 0.0, 0.1}}}), 0.1, 1e-12);
  EXPECT_NEAR(SpeechRate({{{"a", 0.0, 0.05}, {"b", 0.05, 0.2}}}), 0.1, 1e-12);
  EXPECT_NEAR(SpeechRate({{{"sil", 0.0, 1.0}, {"a", 1.0, 1.05}, {"b", 1.05, 1.2}}}), 0.1, 1e-12);
  EXPECT_NEAR(SpeechRate({{{"SP", 0.0, 1.0}, {"a", 1.0, 1.2}, {"", 1.2, 2.0}}}), 0.2, 1e-12);
  EXPECT_THROW(SpeechRate({}), DataError);
  EXPECT_THROW(SpeechRate({{{"sil", 0.0, 1.0}}}), DataError);
  EXPECT_NEAR(SpeechRate({{{"sil", 0.0, 1.0}, {"a", 1.0, 1.2}}}, {"a"}), 1.0, 1e-12);
}

TEST(MeasureUtterance, HappyPathAndMissingAlignment) {
  fs::path dir = fixtures::ScratchDir("measure_utt");
  Rng rng(8);
  AudioBuffer a = fixtures::SpeechLike({}, rng);
  fixtures::WriteWavFile(dir / "a.wav", a.samples, 16000);
  WriteFileAtomic(dir / "a.tsv", "sil\t0\t0.2\naa\t0.2\t0.3\nb\t0.3\t0.45\nsil\t0.45\t2.0\n");
  UtteranceRecord rec;
  rec.id = "a";
  rec.speaker = "s";
  rec.audio_path = dir / "a.wav";
  rec.alignment_path = dir / "a.tsv";
  UtteranceMeasures m = MeasureUtterance(rec);
  for (Measure k : kAllMeasures) EXPECT_TRUE(m.get(k).has_value()) << MeasureKey(k) << m.get(k).missing_reason;
  EXPECT_NEAR(*m.speech_rate.value, 0.125, 1e-12);
  EXPECT_GT(*m.srmr.value, 0.0);
  EXPECT_GE(*m.wada_snr.value, -20.0);
  EXPECT_LE(*m.wada_snr.value, 100.0);

  rec.alignment_path.reset();
  UtteranceMeasures n = MeasureUtterance(rec);
  EXPECT_FALSE(n.speech_rate.has_value());
  EXPECT_TRUE(n.f0_mean.has_value());
  EXPECT_EQ(*n.f0_mean.value, *m.f0_mean.value);

  rec.audio_path = dir / "missing.wav";
  EXPECT_THROW(MeasureUtterance(rec), DataError);
}

TEST(MeasureUtterance, WhiteNoiseMissesOnlyF0) {
  AudioBuffer a = Noise(2.0, 21);
  Alignment al{{{"a", 0.0, 0.1}}};
  UtteranceMeasures m = MeasureAudio(a, al);
  EXPECT_FALSE(m.f0_mean.has_value());
  EXPECT_TRUE(m.energy_mean.has_value());
  EXPECT_TRUE(m.speech_rate.has_value());
  EXPECT_TRUE(m.srmr.has_value());
  EXPECT_TRUE(m.wada_snr.has_value());
}

TEST(MeasureUtterance, ShortAudioGivesMissingNotCrash) {
  AudioBuffer a = fixtures::Sine(200.0, 0.5, 0.3);
  UtteranceMeasures m = MeasureAudio(a, std::nullopt);
  EXPECT_TRUE(m.f0_mean.has_value());
  EXPECT_FALSE(m.srmr.has_value());
  EXPECT_FALSE(m.wada_snr.has_value());
}

TEST(MeasureUtterance, DeterministicBitForBit) {
  Rng r1(5), r2(5);
  AudioBuffer a = fixtures::SpeechLike({}, r1);
  AudioBuffer b = fixtures::SpeechLike({}, r2);
  UtteranceMeasures x = MeasureAudio(a, std::nullopt);
  UtteranceMeasures y = MeasureAudio(b, std::nullopt);
  for (Measure k : {Measure::kF0, Measure::kEnergy, Measure::kSrmr, Measure::kWadaSnr})
    EXPECT_EQ(*x.get(k).value, *y.get(k).value);
}

TEST(MeasuresCsv, FormatAndParse) {
  MeasureRow r1{"b", "s1", {}};
  r1.measures.f0_mean = MeasureValue::Present(123.456789);
  r1.measures.energy_mean = MeasureValue::Present(0.5);
  r1.measures.speech_rate = MeasureValue::Missing("no alignment");
  r1.measures.srmr = MeasureValue::Present(3.0);
  r1.measures.wada_snr = MeasureValue::Present(-20.0);
  MeasureRow r2{"a", "s2", {}};
  r2.measures.energy_mean = MeasureValue::Present(1e-7);
  std::string csv = FormatMeasuresCsv({r1, r2});
  EXPECT_EQ(csv,
            "id,speaker,f0_mean,energy_mean,speech_rate,srmr,wada_snr\n"
            "a,s2,,1e-07,,,\n"
            "b,s1,123.457,0.5,,3,-20\n");
  auto rows = ParseMeasuresCsv(csv, "t");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].id, "a");
  EXPECT_FALSE(rows[0].measures.f0_mean.has_value());
  EXPECT_DOUBLE_EQ(*rows[1].measures.f0_mean.value, 123.457);
  EXPECT_EQ(FormatMeasuresCsv(rows), csv);
  EXPECT_THROW(ParseMeasuresCsv("id,speaker\n", "t"), DataError);
  EXPECT_THROW(ParseMeasuresCsv("id,speaker,f0_mean,energy_mean,speech_rate,srmr,wada_snr\na,s,x,,,,\n", "t"),
               DataError);
}

TEST(Measures, KeysAndLabels) {
  EXPECT_EQ(MeasureKey(Measure::kWadaSnr), "wada_snr");
  EXPECT_EQ(MeasureLabel(Measure::kSpeechRate), "SR");
  EXPECT_EQ(MeasureFromKey("srmr"), Measure::kSrmr);
  EXPECT_FALSE(MeasureFromKey("pitch"));
}

}  // namespace
}  // namespace speechdist
