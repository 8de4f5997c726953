// src/corpus.cc

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

#include "speechdist/corpus.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "speechdist/dsp.h"
#include "speechdist/error.h"
#include "speechdist/io.h"
#include "speechdist/wav.h"

namespace speechdist {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path Resolve(const fs::path& base_dir, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

std::string RequiredString(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(where + ": missing required key '" + key + "'");
  if (!it->is_string()) throw DataError(where + ": key '" + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

std::vector<UtteranceRecord> LoadManifest(const fs::path& path) {
  if (!fs::exists(path)) throw DataError("manifest not found: " + path.string());
  const std::string text = ReadFile(path);
  const fs::path base = path.parent_path();

  std::vector<UtteranceRecord> records;
  std::unordered_set<std::string> seen;
  const auto lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    json obj;
    try {
      obj = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      throw DataError(where + ": malformed JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) throw DataError(where + ": expected a JSON object");

    UtteranceRecord rec;
    rec.id = RequiredString(obj, "id", where);
    rec.speaker = RequiredString(obj, "speaker", where);
    rec.audio_path = Resolve(base, RequiredString(obj, "audio", where));
    if (rec.id.empty()) throw DataError(where + ": empty id");
    if (rec.speaker.empty()) throw DataError(where + ": empty speaker");

    auto tr = obj.find("transcript");
    if (tr == obj.end()) throw DataError(where + ": missing required key 'transcript'");
    if (tr->is_string()) {
      rec.transcript = SplitWhitespace(tr->get<std::string>());
    } else if (tr->is_array()) {
      for (const auto& tok : *tr) {
        if (!tok.is_string()) throw DataError(where + ": transcript tokens must be strings");
        rec.transcript.push_back(tok.get<std::string>());
      }
    } else {
      throw DataError(where + ": transcript must be a string or an array of strings");
    }

    if (auto al = obj.find("alignment"); al != obj.end() && !al->is_null()) {
      if (!al->is_string()) throw DataError(where + ": alignment must be a string");
      rec.alignment_path = Resolve(base, al->get<std::string>());
    }
    if (auto dv = obj.find("dvector"); dv != obj.end() && !dv->is_null()) {
      if (!dv->is_string()) throw DataError(where + ": dvector must be a string");
      rec.embedding_path = Resolve(base, dv->get<std::string>());
    }

    if (!seen.insert(rec.id).second) throw DataError(where + ": duplicate id '" + rec.id + "'");
    records.push_back(std::move(rec));
  }
  return records;
}

void WriteManifest(const fs::path& path, const std::vector<UtteranceRecord>& records) {
  std::string out;
  for (const auto& rec : records) {
    json obj;
    obj["id"] = rec.id;
    obj["speaker"] = rec.speaker;
    obj["audio"] = rec.audio_path.string();
    std::string transcript;
    for (size_t i = 0; i < rec.transcript.size(); ++i) {
      if (i) transcript += ' ';
      transcript += rec.transcript[i];
    }
    obj["transcript"] = transcript;
    if (rec.alignment_path) obj["alignment"] = rec.alignment_path->string();
    if (rec.embedding_path) obj["dvector"] = rec.embedding_path->string();
    out += obj.dump();
    out += '\n';
  }
  WriteFileAtomic(path, out);
}

AudioBuffer LoadAudioFile(const fs::path& path, int target_rate) {
  if (target_rate <= 0) throw ConfigError("target sample rate must be positive");
  WavData wav = ReadWav(path);
  const size_t frames = wav.num_frames();
  std::vector<double> mono(frames, 0.0);
  for (size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (int c = 0; c < wav.channels; ++c) acc += wav.interleaved[f * wav.channels + c];
    mono[f] = acc / wav.channels;
  }
  AudioBuffer buf;
  buf.sample_rate = target_rate;
  buf.samples = dsp::Resample(mono, wav.sample_rate, target_rate);
  if (buf.samples.empty()) throw DataError(path.string() + ": zero-length audio after resampling");
  for (double& s : buf.samples) s = std::clamp(s, -1.0, 1.0);
  return buf;
}

AudioBuffer LoadAudio(const UtteranceRecord& record, int target_rate) {
  return LoadAudioFile(record.audio_path, target_rate);
}

void ValidateAlignment(const Alignment& alignment, const std::string& context) {
  double prev_start = -1.0;
  for (size_t i = 0; i < alignment.entries.size(); ++i) {
    const auto& e = alignment.entries[i];
    const std::string where = context + " entry " + std::to_string(i + 1);
    if (!(e.start >= 0.0)) throw DataError(where + ": negative start time");
    if (!(e.end > e.start)) throw DataError(where + ": end must exceed start");
    if (e.start < prev_start) throw DataError(where + ": entries not sorted by start");
    prev_start = e.start;
  }
}

Alignment LoadAlignment(const fs::path& path) {
  const std::string text = ReadFile(path);
  Alignment alignment;
  const auto lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    auto fields = SplitChar(lines[i], '\t');
    if (fields.size() != 3) throw DataError(where + ": expected phone<TAB>start<TAB>end");
    alignment.entries.push_back({std::string(Trim(fields[0])), ParseDouble(fields[1], where),
                                 ParseDouble(fields[2], where)});
  }
  ValidateAlignment(alignment, path.string());
  return alignment;
}

PairedCorpus PairCorpora(const std::vector<UtteranceRecord>& reference,
                         const std::vector<UtteranceRecord>& candidate, PairingMode mode) {
  std::map<std::string, const UtteranceRecord*> cand_by_id;
  for (const auto& rec : candidate) cand_by_id.emplace(rec.id, &rec);
  std::map<std::string, const UtteranceRecord*> ref_by_id;
  for (const auto& rec : reference) ref_by_id.emplace(rec.id, &rec);

  PairedCorpus paired;
  std::vector<std::string> only_ref, only_cand;
  for (const auto& [id, ref] : ref_by_id) {
    auto it = cand_by_id.find(id);
    if (it == cand_by_id.end()) {
      only_ref.push_back(id);
      continue;
    }
    if (ref->speaker != it->second->speaker)
      throw DataError("speaker mismatch for id '" + id + "': reference '" + ref->speaker +
                      "' vs candidate '" + it->second->speaker + "'");
    paired.pairs.emplace_back(*ref, *it->second);
    paired.speakers.insert(ref->speaker);
  }
  for (const auto& [id, rec] : cand_by_id)
    if (!ref_by_id.count(id)) only_cand.push_back(id);

  auto join = [](const std::vector<std::string>& ids) {
    std::string s;
    for (const auto& id : ids) s += (s.empty() ? "" : ",") + id;
    return s;
  };
  if (mode == PairingMode::kStrict && (!only_ref.empty() || !only_cand.empty())) {
    std::string msg = "strict pairing failed:";
    if (!only_ref.empty()) msg += " reference-only ids [" + join(only_ref) + "]";
    if (!only_cand.empty()) msg += " candidate-only ids [" + join(only_cand) + "]";
    throw DataError(msg);
  }
  if (!only_ref.empty()) paired.warnings.push_back("ids only in reference: " + join(only_ref));
  if (!only_cand.empty()) paired.warnings.push_back("ids only in candidate: " + join(only_cand));
  return paired;
}

std::vector<double> LoadEmbeddingFile(const fs::path& path) {
  const std::string text = ReadFile(path);
  std::vector<double> v;
  for (const auto& tok : SplitWhitespace(text)) v.push_back(ParseDouble(tok, path.string()));
  if (v.empty()) throw DataError(path.string() + ": empty embedding");
  return v;
}

}  // namespace speechdist
