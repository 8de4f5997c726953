// include/speechdist/measures.h

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

#ifndef SPEECHDIST_MEASURES_H_
#define SPEECHDIST_MEASURES_H_

#include <array>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "speechdist/corpus.h"

namespace speechdist {

struct FrameParams {
  double window = 0.025;     // energy frame, seconds
  double hop = 0.010;        // seconds
  double f0_window = 0.040;  // pitch analysis frame, seconds
  double f0_min = 60.0;      // Hz
  double f0_max = 400.0;     // Hz
  double voicing_threshold = 0.30;

  // Throws ConfigError when 0 < hop <= window, f0_min < f0_max or
  // f0_window >= 2 / f0_min is violated.
  void Validate() const;
};

// A measure that is either present or absent with a reason. Absent values
// never take a sentinel number.
struct MeasureValue {
  std::optional<double> value;
  std::string missing_reason;

  static MeasureValue Present(double v) { return {v, {}}; }
  static MeasureValue Missing(std::string reason) { return {std::nullopt, std::move(reason)}; }
  bool has_value() const { return value.has_value(); }
};

enum class Measure { kF0 = 0, kEnergy, kSpeechRate, kSrmr, kWadaSnr };
inline constexpr size_t kNumMeasures = 5;
inline constexpr std::array<Measure, kNumMeasures> kAllMeasures = {
    Measure::kF0, Measure::kEnergy, Measure::kSpeechRate, Measure::kSrmr, Measure::kWadaSnr};

// CSV column name, e.g. "f0_mean".
std::string_view MeasureKey(Measure m);
// Report label, e.g. "F0", "WADA SNR".
std::string_view MeasureLabel(Measure m);
std::string_view MeasureUnit(Measure m);
std::optional<Measure> MeasureFromKey(std::string_view key);

struct UtteranceMeasures {
  MeasureValue f0_mean;      // Hz
  MeasureValue energy_mean;  // RMS, sample scale
  MeasureValue speech_rate;  // seconds per phone
  MeasureValue srmr;
  MeasureValue wada_snr;     // dB

  const MeasureValue& get(Measure m) const;
  MeasureValue& get(Measure m);
};

const std::set<std::string>& DefaultSilenceLabels();

// Mean F0 over voiced frames of a normalized-autocorrelation tracker. Missing
// when fewer than 5 frames are voiced; throws DataError when shorter than one
// analysis frame.
MeasureValue ExtractF0(const AudioBuffer& audio, const FrameParams& params);

// Mean of per-frame RMS over raw samples.
double ExtractEnergy(const AudioBuffer& audio, const FrameParams& params);

// Mean phone duration in seconds, excluding labels in `silence`.
double SpeechRate(const Alignment& alignment,
                  const std::set<std::string>& silence = DefaultSilenceLabels());

struct MeasureOptions {
  FrameParams frame;
  std::set<std::string> silence_labels = DefaultSilenceLabels();
};

// Every measure is populated or marked missing with a reason; only failures to
// read the audio propagate as exceptions.
UtteranceMeasures MeasureUtterance(const UtteranceRecord& record, const MeasureOptions& options = {});
UtteranceMeasures MeasureAudio(const AudioBuffer& audio, const std::optional<Alignment>& alignment,
                               const MeasureOptions& options = {});

struct MeasureRow {
  std::string id;
  std::string speaker;
  UtteranceMeasures measures;
};

// Header id,speaker,f0_mean,energy_mean,speech_rate,srmr,wada_snr; missing
// values as empty fields; 6 significant digits. Rows are written sorted by id.
std::string FormatMeasuresCsv(std::vector<MeasureRow> rows);
void WriteMeasuresCsv(const std::filesystem::path& path, const std::vector<MeasureRow>& rows);
std::vector<MeasureRow> ReadMeasuresCsv(const std::filesystem::path& path);
std::vector<MeasureRow> ParseMeasuresCsv(std::string_view text, const std::string& source);

}  // namespace speechdist

#endif  // SPEECHDIST_MEASURES_H_
