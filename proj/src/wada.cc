// src/wada.cc

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

#include "speechdist/wada.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "speechdist/error.h"
#include "speechdist/io.h"
#include "speechdist/rng.h"

// Text of data/wada_snr_table_v1.csv, compiled in by the build.
extern const char kWadaTableText[];

namespace speechdist {

void WadaTable::Validate() const {
  if (snr_db.size() != g.size() || snr_db.size() < 2)
    throw NumericError("WADA table: need at least two grid points with matching columns");
  for (size_t i = 1; i < g.size(); ++i) {
    if (!(snr_db[i] > snr_db[i - 1]))
      throw NumericError("WADA table: SNR grid not strictly ascending at row " + std::to_string(i));
    if (!(g[i] > g[i - 1]))
      throw NumericError("WADA table: G not strictly ascending at " + FormatG(snr_db[i]) + " dB");
  }
}

double WadaTable::Invert(double g_value) const {
  if (g_value <= g.front()) return snr_db.front();
  if (g_value >= g.back()) return snr_db.back();
  auto it = std::upper_bound(g.begin(), g.end(), g_value);
  const size_t hi = static_cast<size_t>(it - g.begin());
  const size_t lo = hi - 1;
  const double t = (g_value - g[lo]) / (g[hi] - g[lo]);
  return snr_db[lo] + t * (snr_db[hi] - snr_db[lo]);
}

WadaTable ParseWadaTable(std::string_view text) {
  WadaTable table;
  bool header_seen = false;
  for (const auto& raw : SplitLines(text)) {
    std::string_view line = Trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto pos = line.find("version=");
      if (pos != std::string_view::npos)
        table.version = static_cast<int>(ParseDouble(SplitWhitespace(line.substr(pos + 8)).at(0), "WADA table version"));
      continue;
    }
    if (!header_seen) {
      if (line != "snr_db,g") throw DataError("WADA table: expected header 'snr_db,g'");
      header_seen = true;
      continue;
    }
    auto fields = SplitChar(line, ',');
    if (fields.size() != 2) throw DataError("WADA table: malformed row '" + std::string(line) + "'");
    table.snr_db.push_back(ParseDouble(fields[0], "WADA table"));
    table.g.push_back(ParseDouble(fields[1], "WADA table"));
  }
  table.Validate();
  return table;
}

std::string FormatWadaTable(const WadaTable& table) {
  std::string out = "# WADA SNR lookup: expected G = ln(mean|x|) - mean(ln|x|) against SNR\n";
  out += "# version=" + std::to_string(table.version) + "\n";
  out += "snr_db,g\n";
  char buf[96];
  for (size_t i = 0; i < table.g.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.1f,%.17g\n", table.snr_db[i], table.g[i]);
    out += buf;
  }
  return out;
}

const WadaTable& DefaultWadaTable() {
  static const WadaTable table = ParseWadaTable(kWadaTableText);
  return table;
}

WadaTable GenerateWadaTable(uint64_t seed, size_t samples, int version) {
  if (samples < 2) throw ConfigError("GenerateWadaTable: need at least two samples");
  Rng rng(seed);
  std::vector<double> speech(samples), noise(samples);
  double speech_power = 0.0, noise_power = 0.0;
  for (size_t i = 0; i < samples; ++i) {
    const double amp = rng.Gamma(kWadaSpeechShape, 1.0);
    speech[i] = rng.Uniform() < 0.5 ? -amp : amp;
    noise[i] = rng.Normal();
    speech_power += speech[i] * speech[i];
    noise_power += noise[i] * noise[i];
  }
  speech_power /= static_cast<double>(samples);
  noise_power /= static_cast<double>(samples);

  WadaTable table;
  table.version = version;
  const int steps = static_cast<int>(std::lround((kWadaMaxSnr - kWadaMinSnr) / kWadaSnrStep));
  std::vector<double> mix(samples);
  for (int s = 0; s <= steps; ++s) {
    const double snr = kWadaMinSnr + s * kWadaSnrStep;
    const double noise_gain = std::sqrt(speech_power / (noise_power * std::pow(10.0, snr / 10.0)));
    for (size_t i = 0; i < samples; ++i) mix[i] = speech[i] + noise_gain * noise[i];
    table.snr_db.push_back(snr);
    table.g.push_back(WadaStatistic(mix));
  }
  return table;
}

size_t EnforceAscending(std::vector<double>& g, double min_step) {
  // PAV blocks: (mean, count).
  std::vector<std::pair<double, size_t>> blocks;
  for (double v : g) {
    blocks.emplace_back(v, 1);
    while (blocks.size() > 1 && blocks[blocks.size() - 2].first >= blocks.back().first) {
      auto [m2, n2] = blocks.back();
      blocks.pop_back();
      auto& [m1, n1] = blocks.back();
      m1 = (m1 * n1 + m2 * n2) / static_cast<double>(n1 + n2);
      n1 += n2;
    }
  }
  std::vector<double> fitted;
  fitted.reserve(g.size());
  for (const auto& [m, n] : blocks) fitted.insert(fitted.end(), n, m);
  for (size_t i = 1; i < fitted.size(); ++i) fitted[i] = std::max(fitted[i], fitted[i - 1] + min_step);
  size_t changed = 0;
  for (size_t i = 0; i < g.size(); ++i) {
    if (fitted[i] != g[i]) ++changed;
    g[i] = fitted[i];
  }
  return changed;
}

double WadaStatistic(std::span<const double> x) {
  double sum_abs = 0.0, sum_log = 0.0;
  size_t n = 0;
  for (double v : x) {
    const double a = std::abs(v);
    if (a == 0.0) continue;
    sum_abs += a;
    sum_log += std::log(a);
    ++n;
  }
  if (n == 0) throw NumericError("WADA: all samples are zero");
  const double count = static_cast<double>(n);
  return std::log(sum_abs / count) - sum_log / count;
}

double WadaSnr(const AudioBuffer& audio, const WadaTable& table) {
  if (audio.duration() < 0.5)
    throw DataError("WADA SNR: audio shorter than 0.5 s");
  const double snr = table.Invert(WadaStatistic(audio.samples));
  return std::clamp(snr, kWadaMinSnr, kWadaMaxSnr);
}

}  // namespace speechdist
