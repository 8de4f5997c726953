// src/measures.cc

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

#include "speechdist/measures.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <utility>

#include "speechdist/error.h"
#include "speechdist/io.h"
#include "speechdist/srmr.h"
#include "speechdist/wada.h"

namespace speechdist {

namespace {

constexpr size_t kMinVoicedFrames = 5;
constexpr double kRelativeRmsFloor = 0.01;
// A shorter lag wins over the global peak if it reaches this fraction of it;
// this suppresses subharmonic (octave-down) picks.
constexpr double kEarlyPeakFraction = 0.9;

const char* const kCsvHeader = "id,speaker,f0_mean,energy_mean,speech_rate,srmr,wada_snr";

size_t Samples(double seconds, int rate) {
  return static_cast<size_t>(std::lround(seconds * rate));
}

double FrameRms(const std::vector<double>& x, size_t start, size_t len) {
  double acc = 0.0;
  for (size_t i = start; i < start + len; ++i) acc += x[i] * x[i];
  return std::sqrt(acc / static_cast<double>(len));
}

}  // namespace

void FrameParams::Validate() const {
  if (!(hop > 0.0 && hop <= window)) throw ConfigError("frame params: require 0 < hop <= window");
  if (!(f0_min > 0.0 && f0_min < f0_max)) throw ConfigError("frame params: require 0 < f0_min < f0_max");
  if (!(f0_window >= 2.0 / f0_min)) throw ConfigError("frame params: require f0_window >= 2 / f0_min");
  if (!(voicing_threshold > 0.0 && voicing_threshold < 1.0))
    throw ConfigError("frame params: voicing threshold must lie in (0, 1)");
}

std::string_view MeasureKey(Measure m) {
  switch (m) {
    case Measure::kF0: return "f0_mean";
    case Measure::kEnergy: return "energy_mean";
    case Measure::kSpeechRate: return "speech_rate";
    case Measure::kSrmr: return "srmr";
    case Measure::kWadaSnr: return "wada_snr";
  }
  return "";
}

std::string_view MeasureLabel(Measure m) {
  switch (m) {
    case Measure::kF0: return "F0";
    case Measure::kEnergy: return "Energy";
    case Measure::kSpeechRate: return "SR";
    case Measure::kSrmr: return "SRMR";
    case Measure::kWadaSnr: return "WADA SNR";
  }
  return "";
}

std::string_view MeasureUnit(Measure m) {
  switch (m) {
    case Measure::kF0: return "Hz";
    case Measure::kEnergy: return "rms";
    case Measure::kSpeechRate: return "seconds_per_phone";
    case Measure::kSrmr: return "ratio";
    case Measure::kWadaSnr: return "dB";
  }
  return "";
}

std::optional<Measure> MeasureFromKey(std::string_view key) {
  for (Measure m : kAllMeasures)
    if (MeasureKey(m) == key || MeasureLabel(m) == key) return m;
  return std::nullopt;
}

const MeasureValue& UtteranceMeasures::get(Measure m) const {
  switch (m) {
    case Measure::kF0: return f0_mean;
    case Measure::kEnergy: return energy_mean;
    case Measure::kSpeechRate: return speech_rate;
    case Measure::kSrmr: return srmr;
    case Measure::kWadaSnr: return wada_snr;
  }
  return f0_mean;
}

MeasureValue& UtteranceMeasures::get(Measure m) {
  return const_cast<MeasureValue&>(std::as_const(*this).get(m));
}

const std::set<std::string>& DefaultSilenceLabels() {
  static const std::set<std::string> labels = {"sil", "sp", "spn", ""};
  return labels;
}

MeasureValue ExtractF0(const AudioBuffer& audio, const FrameParams& params) {
  params.Validate();
  const int fs = audio.sample_rate;
  const auto& x = audio.samples;
  const size_t frame = Samples(params.f0_window, fs);
  const size_t hop = std::max<size_t>(1, Samples(params.hop, fs));
  if (x.size() < frame) throw DataError("F0: audio shorter than one analysis frame");

  const size_t lag_min = static_cast<size_t>(std::floor(fs / params.f0_max));
  const size_t lag_max = static_cast<size_t>(std::ceil(fs / params.f0_min));
  // Correlation span; lags up to lag_max + 1 stay inside the frame.
  const size_t span = frame - lag_max - 1;

  std::vector<size_t> starts;
  for (size_t s = 0; s + frame <= x.size(); s += hop) starts.push_back(s);
  std::vector<double> rms(starts.size());
  for (size_t i = 0; i < starts.size(); ++i) rms[i] = FrameRms(x, starts[i], frame);
  const double max_rms = *std::max_element(rms.begin(), rms.end());
  if (max_rms == 0.0) return MeasureValue::Missing("no voiced frames (silent audio)");

  std::vector<double> nccf(lag_max + 2, 0.0);
  double f0_sum = 0.0;
  size_t voiced = 0;
  for (size_t i = 0; i < starts.size(); ++i) {
    if (rms[i] < kRelativeRmsFloor * max_rms) continue;
    const double* f = x.data() + starts[i];
    double e0 = 0.0;
    for (size_t n = 0; n < span; ++n) e0 += f[n] * f[n];
    if (e0 == 0.0) continue;
    // Energy of the lagged span, updated incrementally.
    double el = 0.0;
    for (size_t n = 0; n < span; ++n) el += f[n + lag_min - 1] * f[n + lag_min - 1];
    for (size_t lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
      if (lag > lag_min - 1) {
        el += f[lag + span - 1] * f[lag + span - 1] - f[lag - 1] * f[lag - 1];
        el = std::max(el, 0.0);
      }
      double cross = 0.0;
      for (size_t n = 0; n < span; ++n) cross += f[n] * f[n + lag];
      const double denom = std::sqrt(e0 * el);
      nccf[lag] = denom > 0.0 ? cross / denom : 0.0;
    }

    double best = -1.0;
    for (size_t lag = lag_min; lag <= lag_max; ++lag) best = std::max(best, nccf[lag]);
    if (best < params.voicing_threshold) continue;

    size_t pick = 0;
    for (size_t lag = lag_min; lag <= lag_max; ++lag) {
      const bool local_max = nccf[lag] >= nccf[lag - 1] && nccf[lag] >= nccf[lag + 1];
      if (local_max && nccf[lag] >= std::max(params.voicing_threshold, kEarlyPeakFraction * best)) {
        pick = lag;
        break;
      }
    }
    if (pick == 0) continue;

    double period = static_cast<double>(pick);
    const double a = nccf[pick - 1], b = nccf[pick], c = nccf[pick + 1];
    const double curvature = a - 2.0 * b + c;
    if (curvature < 0.0) period += std::clamp(0.5 * (a - c) / curvature, -0.5, 0.5);
    f0_sum += std::clamp(fs / period, params.f0_min, params.f0_max);
    ++voiced;
  }
  if (voiced < kMinVoicedFrames)
    return MeasureValue::Missing("only " + std::to_string(voiced) + " voiced frames (need 5)");
  return MeasureValue::Present(f0_sum / static_cast<double>(voiced));
}

double ExtractEnergy(const AudioBuffer& audio, const FrameParams& params) {
  params.Validate();
  const size_t frame = Samples(params.window, audio.sample_rate);
  const size_t hop = std::max<size_t>(1, Samples(params.hop, audio.sample_rate));
  if (frame == 0 || audio.samples.size() < frame)
    throw DataError("energy: audio shorter than one frame");
  double sum = 0.0;
  size_t frames = 0;
  for (size_t s = 0; s + frame <= audio.samples.size(); s += hop) {
    sum += FrameRms(audio.samples, s, frame);
    ++frames;
  }
  return sum / static_cast<double>(frames);
}

double SpeechRate(const Alignment& alignment, const std::set<std::string>& silence) {
  if (alignment.entries.empty()) throw DataError("speech rate: empty alignment");
  double total = 0.0;
  size_t count = 0;
  for (const auto& e : alignment.entries) {
    std::string label = e.phone;
    std::transform(label.begin(), label.end(), label.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (silence.count(label)) continue;
    total += e.end - e.start;
    ++count;
  }
  if (count == 0) throw DataError("speech rate: alignment contains only silence");
  return total / static_cast<double>(count);
}

namespace {

template <typename Fn>
MeasureValue Guard(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return MeasureValue::Missing(e.what());
  }
}

}  // namespace

UtteranceMeasures MeasureAudio(const AudioBuffer& audio, const std::optional<Alignment>& alignment,
                               const MeasureOptions& options) {
  options.frame.Validate();
  UtteranceMeasures m;
  m.f0_mean = Guard([&] { return ExtractF0(audio, options.frame); });
  m.energy_mean = Guard([&] { return MeasureValue::Present(ExtractEnergy(audio, options.frame)); });
  if (alignment) {
    m.speech_rate = Guard([&] { return MeasureValue::Present(SpeechRate(*alignment, options.silence_labels)); });
  } else {
    m.speech_rate = MeasureValue::Missing("no alignment");
  }
  m.srmr = Guard([&] { return MeasureValue::Present(Srmr(audio)); });
  m.wada_snr = Guard([&] { return MeasureValue::Present(WadaSnr(audio)); });
  return m;
}

UtteranceMeasures MeasureUtterance(const UtteranceRecord& record, const MeasureOptions& options) {
  const AudioBuffer audio = LoadAudio(record, kInternalSampleRate);
  std::optional<Alignment> alignment;
  std::string alignment_error;
  if (record.alignment_path) {
    try {
      alignment = LoadAlignment(*record.alignment_path);
    } catch (const DataError& e) {
      alignment_error = e.what();
    }
  }
  UtteranceMeasures m = MeasureAudio(audio, alignment, options);
  if (!alignment_error.empty()) m.speech_rate = MeasureValue::Missing(alignment_error);
  return m;
}

std::string FormatMeasuresCsv(std::vector<MeasureRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const MeasureRow& a, const MeasureRow& b) { return a.id < b.id; });
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& row : rows) {
    out += row.id + "," + row.speaker;
    for (Measure m : kAllMeasures) {
      out += ',';
      const auto& v = row.measures.get(m);
      if (v.value) out += FormatG(*v.value, 6);
    }
    out += '\n';
  }
  return out;
}

void WriteMeasuresCsv(const std::filesystem::path& path, const std::vector<MeasureRow>& rows) {
  WriteFileAtomic(path, FormatMeasuresCsv(rows));
}

std::vector<MeasureRow> ParseMeasuresCsv(std::string_view text, const std::string& source) {
  const auto lines = SplitLines(text);
  if (lines.empty() || Trim(lines[0]) != kCsvHeader)
    throw DataError(source + ": expected header '" + std::string(kCsvHeader) + "'");
  std::vector<MeasureRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const std::string where = source + ":" + std::to_string(i + 1);
    auto fields = SplitChar(lines[i], ',');
    if (fields.size() != 2 + kNumMeasures) throw DataError(where + ": expected 7 fields");
    MeasureRow row;
    row.id = fields[0];
    row.speaker = fields[1];
    if (row.id.empty() || row.speaker.empty()) throw DataError(where + ": empty id or speaker");
    for (size_t k = 0; k < kNumMeasures; ++k) {
      const auto& f = fields[2 + k];
      auto& slot = row.measures.get(kAllMeasures[k]);
      slot = Trim(f).empty() ? MeasureValue::Missing("missing in " + source)
                             : MeasureValue::Present(ParseDouble(f, where));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<MeasureRow> ReadMeasuresCsv(const std::filesystem::path& path) {
  return ParseMeasuresCsv(ReadFile(path), path.string());
}

}  // namespace speechdist
