// tests/fixtures.cc

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

#include "fixtures.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <queue>
#include <set>
#include <string>

#include <unistd.h>

#include <Eigen/Dense>

#include "speechdist/io.h"
#include "speechdist/wav.h"

namespace speechdist {
namespace fixtures {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const char* const kVocab[] = {"the",  "cat", "sat",   "on",    "a",   "mat", "dog",
                              "ran",  "to",  "park",  "bird",  "sang", "in", "tree",
                              "red",  "blue", "green", "house", "sun", "sky"};
constexpr int kVocabSize = sizeof(kVocab) / sizeof(kVocab[0]);
const char* const kPhones[] = {"aa", "b", "k", "d", "eh", "s", "t", "n", "iy", "ow"};
constexpr int kNumPhones = sizeof(kPhones) / sizeof(kPhones[0]);

void WritePcm16(const fs::path& path, const AudioBuffer& audio) {
  WavData wav;
  wav.sample_rate = audio.sample_rate;
  wav.channels = 1;
  wav.interleaved = audio.samples;
  WriteWav(path, wav, WavEncoding::kPcm16);
}

void AddNoise(AudioBuffer& audio, double snr_db, Rng& rng) {
  double power = 0.0;
  for (double x : audio.samples) power += x * x;
  const double sd = std::sqrt(power / audio.samples.size() / std::pow(10.0, snr_db / 10.0));
  for (double& x : audio.samples) x = std::clamp(x + rng.Normal(0.0, sd), -1.0, 1.0);
}

std::string FormatVector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += FormatG(v(i), 9);
  }
  return out + "\n";
}

Eigen::VectorXd NormalVector(Rng& rng, double sd) {
  Eigen::VectorXd v(kMiniEmbeddingDim);
  for (int i = 0; i < kMiniEmbeddingDim; ++i) v(i) = rng.Normal(0.0, sd);
  return v;
}

std::string Alignment(double duration, double min_phone, double max_phone, Rng& rng) {
  std::string out;
  char buf[96];
  const double lead = 0.15;
  std::snprintf(buf, sizeof(buf), "sil\t%.3f\t%.3f\n", 0.0, lead);
  out += buf;
  double t = lead;
  while (t < duration - lead - max_phone) {
    const double d = rng.Uniform(min_phone, max_phone);
    const char* phone = kPhones[rng.NextU64() % kNumPhones];
    std::snprintf(buf, sizeof(buf), "%s\t%.3f\t%.3f\n", phone, t, t + d);
    out += buf;
    t += d;
  }
  std::snprintf(buf, sizeof(buf), "sil\t%.3f\t%.3f\n", t, duration);
  out += buf;
  return out;
}

std::string Corrupt(const std::vector<std::string>& words, double p, Rng& rng) {
  std::string out;
  for (const auto& w : words) {
    const double u = rng.Uniform();
    std::string tok = w;
    if (u < p / 3) {
      continue;  // deletion
    } else if (u < 2 * p / 3) {
      tok = kVocab[rng.NextU64() % kVocabSize];
    } else if (u < p) {
      tok = w + " " + kVocab[rng.NextU64() % kVocabSize];
    }
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

}  // namespace

fs::path ScratchDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("speechdist_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void WriteWavFile(const fs::path& path, const std::vector<double>& interleaved, int sample_rate, int channels,
                  bool pcm16) {
  WavData wav;
  wav.sample_rate = sample_rate;
  wav.channels = channels;
  wav.interleaved = interleaved;
  WriteWav(path, wav, pcm16 ? WavEncoding::kPcm16 : WavEncoding::kFloat32);
}

AudioBuffer Sine(double freq, double amplitude, double duration, int sample_rate) {
  AudioBuffer a;
  a.sample_rate = sample_rate;
  const size_t n = static_cast<size_t>(std::llround(duration * sample_rate));
  a.samples.resize(n);
  for (size_t i = 0; i < n; ++i) a.samples[i] = amplitude * std::sin(kTwoPi * freq * i / sample_rate);
  return a;
}

AudioBuffer SpeechLike(const SpeechLikeParams& p, Rng& rng) {
  AudioBuffer a;
  a.sample_rate = p.sample_rate;
  const size_t n = static_cast<size_t>(std::llround(p.duration * p.sample_rate));
  a.samples.resize(n);
  const double glide_phase = rng.Uniform(0.0, kTwoPi);
  const double env_phase = rng.Uniform(0.0, kTwoPi);
  double phase = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / p.sample_rate;
    const double f = p.f0 * (1.0 + 0.08 * std::sin(kTwoPi * 0.7 * t + glide_phase));
    phase += kTwoPi * f / p.sample_rate;
    double s = 0.0;
    for (int k = 1; k * f < 4000.0; ++k) {
      const double hz = k * f;
      const double formant = 1.0 / (1.0 + std::pow((hz - 500.0) / 300.0, 2)) +
                             0.5 / (1.0 + std::pow((hz - 1500.0) / 400.0, 2)) + 0.05;
      s += formant / k * std::sin(k * phase);
    }
    const double env = 0.05 + 0.95 * std::sqrt(std::max(0.0, std::sin(kTwoPi * p.syllable_rate * t + env_phase)));
    a.samples[i] = env * s + rng.Normal(0.0, 1e-3);
  }
  double peak = 0.0;
  for (double s : a.samples) peak = std::max(peak, std::abs(s));
  for (double& s : a.samples) s *= p.amplitude / peak;
  return a;
}

std::vector<double> WadaMixture(double snr_db, size_t n, Rng& rng) {
  std::vector<double> speech(n), noise(n);
  double ps = 0.0, pn = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double g = rng.Gamma(0.4, 1.0);
    speech[i] = rng.Uniform() < 0.5 ? -g : g;
    noise[i] = rng.Normal();
    ps += speech[i] * speech[i];
    pn += noise[i] * noise[i];
  }
  const double scale = std::sqrt(ps / (pn * std::pow(10.0, snr_db / 10.0)));
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = speech[i] + scale * noise[i];
  return x;
}

MiniCorpus WriteMiniCorpus(const fs::path& root, uint64_t seed) {
  static const double kBaseF0[kMiniSpeakers] = {110.0, 135.0, 185.0, 220.0};
  static const double kRate[kMiniSpeakers] = {3.5, 4.0, 4.5, 5.0};

  MiniCorpus mc;
  mc.root = root;
  const fs::path ref_dir = root / "reference";
  const fs::path cand_dir = root / "candidate";
  for (const auto& d : {ref_dir, cand_dir}) {
    fs::create_directories(d / "wav");
    fs::create_directories(d / "align");
    fs::create_directories(d / "dvector");
  }

  std::vector<UtteranceRecord> ref_records, cand_records;
  std::string ref_hyp, cand_hyp;
  for (int s = 0; s < kMiniSpeakers; ++s) {
    const std::string speaker = "spk" + std::to_string(s + 1);
    Rng spk_rng(DeriveSeed(seed, {"mini-speaker", speaker}));
    const Eigen::VectorXd centroid = NormalVector(spk_rng, 1.0);
    const Eigen::VectorXd cand_centroid = centroid + NormalVector(spk_rng, 0.4);

    for (int u = 0; u < kMiniUtterancesPerSpeaker; ++u) {
      char idbuf[32];
      std::snprintf(idbuf, sizeof(idbuf), "%s_u%02d", speaker.c_str(), u + 1);
      const std::string id = idbuf;
      Rng rng(DeriveSeed(seed, {"mini-utt", id}));

      const double duration = std::round(rng.Uniform(1.6, 2.4) * 100.0) / 100.0;
      std::vector<std::string> words(4 + rng.NextU64() % 4);
      for (auto& w : words) w = kVocab[rng.NextU64() % kVocabSize];

      SpeechLikeParams rp;
      rp.duration = duration;
      rp.f0 = kBaseF0[s] * (1.0 + 0.03 * rng.Normal());
      rp.syllable_rate = kRate[s];
      rp.amplitude = 0.5;
      SpeechLikeParams cp = rp;
      cp.f0 *= 1.06;
      cp.syllable_rate *= 0.9;
      cp.amplitude = 0.4;

      Rng ref_audio_rng(DeriveSeed(seed, {"mini-audio", "reference", id}));
      Rng cand_audio_rng(DeriveSeed(seed, {"mini-audio", "candidate", id}));
      AudioBuffer ref_audio = SpeechLike(rp, ref_audio_rng);
      AudioBuffer cand_audio = SpeechLike(cp, cand_audio_rng);
      AddNoise(ref_audio, rng.Uniform(30.0, 40.0), ref_audio_rng);
      AddNoise(cand_audio, rng.Uniform(15.0, 25.0), cand_audio_rng);

      struct Side {
        const fs::path& dir;
        const AudioBuffer& audio;
        double min_phone, max_phone;
        Eigen::VectorXd dvector;
        std::vector<UtteranceRecord>& records;
      };
      Side sides[2] = {
          {ref_dir, ref_audio, 0.06, 0.12, centroid + NormalVector(rng, 0.3), ref_records},
          {cand_dir, cand_audio, 0.07, 0.14, cand_centroid + NormalVector(rng, 0.35), cand_records}};
      for (auto& side : sides) {
        UtteranceRecord rec;
        rec.id = id;
        rec.speaker = speaker;
        rec.transcript = words;
        rec.audio_path = fs::path("wav") / (id + ".wav");
        rec.alignment_path = fs::path("align") / (id + ".tsv");
        rec.embedding_path = fs::path("dvector") / (id + ".txt");
        WritePcm16(side.dir / rec.audio_path, side.audio);
        WriteFileAtomic(side.dir / *rec.alignment_path,
                        Alignment(duration, side.min_phone, side.max_phone, rng));
        WriteFileAtomic(side.dir / *rec.embedding_path, FormatVector(side.dvector));
        side.records.push_back(rec);
      }
      ref_hyp += id + "\t" + Corrupt(words, 0.1, rng) + "\n";
      cand_hyp += id + "\t" + Corrupt(words, 0.35, rng) + "\n";
    }
  }

  mc.reference_manifest = ref_dir / "manifest.jsonl";
  mc.candidate_manifest = cand_dir / "manifest.jsonl";
  mc.test_manifest = mc.reference_manifest;
  mc.reference_hypotheses = root / "hyp_reference.txt";
  mc.candidate_hypotheses = root / "hyp_candidate.txt";
  WriteManifest(mc.reference_manifest, ref_records);
  WriteManifest(mc.candidate_manifest, cand_records);
  WriteFileAtomic(mc.reference_hypotheses, ref_hyp);
  WriteFileAtomic(mc.candidate_hypotheses, cand_hyp);
  return mc;
}

double BruteForceW2Squared(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<size_t> perm(q.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double c = 0.0;
    for (size_t i = 0; i < p.size(); ++i) c += (p[i] - q[perm[i]]) * (p[i] - q[perm[i]]);
    best = std::min(best, c / static_cast<double>(p.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

size_t BfsEditDistance(const std::vector<std::string>& from, const std::vector<std::string>& to,
                       const std::vector<std::string>& alphabet) {
  using Tokens = std::vector<std::string>;
  const size_t limit = std::max(from.size(), to.size()) + 1;
  std::set<Tokens> seen = {from};
  std::queue<std::pair<Tokens, size_t>> q;
  q.push({from, 0});
  while (!q.empty()) {
    auto [cur, d] = q.front();
    q.pop();
    if (cur == to) return d;
    std::vector<Tokens> next;
    for (size_t i = 0; i <= cur.size(); ++i) {
      if (cur.size() < limit)
        for (const auto& a : alphabet) {
          Tokens t = cur;
          t.insert(t.begin() + i, a);
          next.push_back(t);
        }
      if (i < cur.size()) {
        Tokens t = cur;
        t.erase(t.begin() + i);
        next.push_back(t);
        for (const auto& a : alphabet) {
          Tokens s = cur;
          s[i] = a;
          next.push_back(s);
        }
      }
    }
    for (auto& t : next)
      if (seen.insert(t).second) q.push({std::move(t), d + 1});
  }
  return SIZE_MAX;
}

double NaiveFrechet(const Eigen::VectorXd& ma, const Eigen::MatrixXd& sa, const Eigen::VectorXd& mb,
                    const Eigen::MatrixXd& sb) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(sa * sb);
  double tr_sqrt = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) tr_sqrt += std::sqrt(es.eigenvalues()(i)).real();
  return (ma - mb).squaredNorm() + sa.trace() + sb.trace() - 2.0 * tr_sqrt;
}

Eigen::MatrixXd RandomSpd(int d, Rng& rng) {
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.Normal();
  return a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d);
}

}  // namespace fixtures
}  // namespace speechdist
