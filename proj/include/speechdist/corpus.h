// include/speechdist/corpus.h

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

#ifndef SPEECHDIST_CORPUS_H_
#define SPEECHDIST_CORPUS_H_

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace speechdist {

// All measure extraction runs at this rate; inputs are resampled on load.
inline constexpr int kInternalSampleRate = 16000;

struct UtteranceRecord {
  std::string id;
  std::string speaker;
  std::filesystem::path audio_path;
  std::vector<std::string> transcript;
  std::optional<std::filesystem::path> alignment_path;
  std::optional<std::filesystem::path> embedding_path;

  bool operator==(const UtteranceRecord&) const = default;
};

struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = kInternalSampleRate;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

struct AlignmentEntry {
  std::string phone;
  double start = 0.0;
  double end = 0.0;
};

struct Alignment {
  std::vector<AlignmentEntry> entries;
};

struct PairedCorpus {
  std::vector<std::pair<UtteranceRecord, UtteranceRecord>> pairs;  // sorted by id
  std::set<std::string> speakers;
  std::vector<std::string> warnings;
};

enum class PairingMode { kStrict, kLenient };

// JSON Lines manifest: keys id, speaker, audio, transcript (string or array of
// tokens), optional alignment and dvector. Relative paths resolve against the
// manifest's directory.
std::vector<UtteranceRecord> LoadManifest(const std::filesystem::path& path);
void WriteManifest(const std::filesystem::path& path,
                   const std::vector<UtteranceRecord>& records);

// Decodes, averages channels and resamples to `target_rate`.
AudioBuffer LoadAudio(const UtteranceRecord& record, int target_rate = kInternalSampleRate);
AudioBuffer LoadAudioFile(const std::filesystem::path& path, int target_rate = kInternalSampleRate);

// Tab-separated `phone<TAB>start<TAB>end`, one entry per line.
Alignment LoadAlignment(const std::filesystem::path& path);
void ValidateAlignment(const Alignment& alignment, const std::string& context);

PairedCorpus PairCorpora(const std::vector<UtteranceRecord>& reference,
                         const std::vector<UtteranceRecord>& candidate,
                         PairingMode mode = PairingMode::kLenient);

// One line of whitespace-separated decimals.
std::vector<double> LoadEmbeddingFile(const std::filesystem::path& path);

}  // namespace speechdist

#endif  // SPEECHDIST_CORPUS_H_
