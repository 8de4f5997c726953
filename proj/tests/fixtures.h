// tests/fixtures.h

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

#ifndef SPEECHDIST_TESTS_FIXTURES_H_
#define SPEECHDIST_TESTS_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "speechdist/corpus.h"
#include "speechdist/rng.h"

namespace speechdist {
namespace fixtures {

// Fresh empty directory under the system temp dir, unique per process.
std::filesystem::path ScratchDir(const std::string& name);

void WriteWavFile(const std::filesystem::path& path, const std::vector<double>& interleaved, int sample_rate,
                  int channels = 1, bool pcm16 = false);

AudioBuffer Sine(double freq, double amplitude, double duration, int sample_rate = kInternalSampleRate);

struct SpeechLikeParams {
  double duration = 2.0;       // seconds
  double f0 = 150.0;           // Hz, centre of a slow +-8% glide
  double syllable_rate = 4.0;  // Hz
  double amplitude = 0.5;      // peak
  int sample_rate = kInternalSampleRate;
};

// Harmonic source with a drifting pitch under a syllable-rate envelope that
// dips to -26 dB between syllables.
AudioBuffer SpeechLike(const SpeechLikeParams& params, Rng& rng);

// Gamma(0.4) amplitudes with random sign plus Gaussian noise, scaled so the
// realized SNR of the two drawn parts is exactly `snr_db`.
std::vector<double> WadaMixture(double snr_db, size_t n, Rng& rng);

struct MiniCorpus {
  std::filesystem::path root;
  std::filesystem::path reference_manifest;
  std::filesystem::path candidate_manifest;
  std::filesystem::path test_manifest;
  std::filesystem::path reference_hypotheses;
  std::filesystem::path candidate_hypotheses;
};

inline constexpr int kMiniSpeakers = 4;
inline constexpr int kMiniUtterancesPerSpeaker = 5;
inline constexpr int kMiniEmbeddingDim = 8;

// 4 speakers x 5 utterances per corpus with 16-bit WAVs, phone alignments,
// d-vector files and two hypothesis files over the reference transcripts.
// Reference utterances carry 30-40 dB of white noise; the candidate is a
// pitch-shifted, slower rendering of the same ids at 15-25 dB.
MiniCorpus WriteMiniCorpus(const std::filesystem::path& root, uint64_t seed = 7);

// Reference oracles, deliberately naive.

// Minimum over all N! pairings of the mean squared difference; p and q must
// have the same size.
double BruteForceW2Squared(const std::vector<double>& p, const std::vector<double>& q);

// Unit-cost edit distance found by breadth-first search over token sequences.
size_t BfsEditDistance(const std::vector<std::string>& from, const std::vector<std::string>& to,
                       const std::vector<std::string>& alphabet);

// Squared Frechet distance with tr((S_a S_b)^1/2) summed from the square roots
// of the eigenvalues of the unsymmetrized product.
double NaiveFrechet(const Eigen::VectorXd& ma, const Eigen::MatrixXd& sa, const Eigen::VectorXd& mb,
                    const Eigen::MatrixXd& sb);

Eigen::MatrixXd RandomSpd(int d, Rng& rng);

}  // namespace fixtures
}  // namespace speechdist

#endif  // SPEECHDIST_TESTS_FIXTURES_H_
