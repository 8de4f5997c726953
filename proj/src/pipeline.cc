// src/pipeline.cc

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

#include "speechdist/pipeline.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <utility>

#include "speechdist/error.h"
#include "speechdist/io.h"
#include "speechdist/json_schema.h"
#include "speechdist/parallel.h"
#include "speechdist/rng.h"
#include "speechdist/wada.h"
#include "speechdist/wav.h"

extern const char kReportSchemaText[];

namespace speechdist {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json OptPath(const std::optional<fs::path>& p) { return p ? json(p->string()) : json(nullptr); }
json OptDouble(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

template <typename T>
T Get(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

void CheckKeys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

fs::path ResolveAgainst(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return base.empty() || path.is_absolute() ? path : base / path;
}

void MergePath(const json& j, const char* key, const fs::path& base, fs::path& dst) {
  if (j.contains(key)) dst = ResolveAgainst(base, Get<std::string>(j, key, "config"));
}

void MergeOptPath(const json& j, const char* key, const fs::path& base, std::optional<fs::path>& dst) {
  if (!j.contains(key)) return;
  if (j[key].is_null()) {
    dst.reset();
  } else {
    dst = ResolveAgainst(base, Get<std::string>(j, key, "config"));
  }
}

template <typename T>
void MergeValue(const json& j, const char* key, T& dst, const std::string& where) {
  if (j.contains(key)) dst = Get<T>(j, key, where);
}

void RequireFile(const fs::path& p, const std::string& what) {
  if (p.empty()) throw ConfigError(what + " is required");
  if (!fs::exists(p)) throw ConfigError(what + " does not exist: " + p.string());
}

template <typename Fn>
auto Stage(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (Error& e) {
    if (e.stage().empty()) e.set_stage(name);
    throw;
  } catch (const std::exception& e) {
    DataError wrapped(e.what());
    wrapped.set_stage(name);
    throw wrapped;
  }
}

uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string Hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::optional<double> FdOrNote(const EmbeddingSet& a, const EmbeddingSet& b, const char* what,
                               std::vector<std::string>& notes) {
  if (a.vectors.size() < 2 || b.vectors.size() < 2) {
    notes.push_back(std::string(what) + ": fewer than 2 vectors on one side");
    return std::nullopt;
  }
  if (a.dim() != b.dim()) throw DataError(std::string(what) + ": embedding dimensions differ");
  return FrechetDistance(FitGaussian(a.Values()), FitGaussian(b.Values()));
}

}  // namespace

void RunConfig::MergeJson(const json& j, const fs::path& base_dir) {
  CheckKeys(j,
            {"reference_manifest", "candidate_manifest", "output_dir", "reference_embeddings",
             "candidate_embeddings", "score_manifest", "reference_hypotheses", "candidate_hypotheses",
             "seed", "jobs", "strict_pairing", "frame", "silence_labels", "augment", "attributes"},
            "config");
  MergePath(j, "reference_manifest", base_dir, reference_manifest);
  MergePath(j, "candidate_manifest", base_dir, candidate_manifest);
  MergePath(j, "output_dir", base_dir, output_dir);
  MergeOptPath(j, "reference_embeddings", base_dir, reference_embeddings);
  MergeOptPath(j, "candidate_embeddings", base_dir, candidate_embeddings);
  MergeOptPath(j, "score_manifest", base_dir, score_manifest);
  MergeOptPath(j, "reference_hypotheses", base_dir, reference_hypotheses);
  MergeOptPath(j, "candidate_hypotheses", base_dir, candidate_hypotheses);
  MergeValue(j, "seed", seed, "config");
  MergeValue(j, "jobs", jobs, "config");
  MergeValue(j, "strict_pairing", strict_pairing, "config");
  if (j.contains("frame")) {
    const json& f = j["frame"];
    CheckKeys(f, {"window", "hop", "f0_window", "f0_min", "f0_max", "voicing_threshold"}, "config.frame");
    MergeValue(f, "window", measure.frame.window, "config.frame");
    MergeValue(f, "hop", measure.frame.hop, "config.frame");
    MergeValue(f, "f0_window", measure.frame.f0_window, "config.frame");
    MergeValue(f, "f0_min", measure.frame.f0_min, "config.frame");
    MergeValue(f, "f0_max", measure.frame.f0_max, "config.frame");
    MergeValue(f, "voicing_threshold", measure.frame.voicing_threshold, "config.frame");
  }
  if (j.contains("silence_labels")) {
    auto labels = Get<std::vector<std::string>>(j, "silence_labels", "config");
    measure.silence_labels = std::set<std::string>(labels.begin(), labels.end());
  }
  if (j.contains("augment")) {
    const json& a = j["augment"];
    CheckKeys(a, {"enabled", "snr_min", "snr_max", "rir_probability", "rt60_min", "rt60_max", "per_speaker"},
              "config.augment");
    MergeValue(a, "enabled", run_augment, "config.augment");
    MergeValue(a, "snr_min", augment.snr_min, "config.augment");
    MergeValue(a, "snr_max", augment.snr_max, "config.augment");
    MergeValue(a, "rir_probability", augment.rir_probability, "config.augment");
    MergeValue(a, "rt60_min", augment.rt60_min, "config.augment");
    MergeValue(a, "rt60_max", augment.rt60_max, "config.augment");
    MergeValue(a, "per_speaker", augment.per_speaker, "config.augment");
  }
  if (j.contains("attributes")) {
    const json& a = j["attributes"];
    CheckKeys(a, {"enabled", "components", "variance_floor"}, "config.attributes");
    MergeValue(a, "enabled", run_attributes, "config.attributes");
    MergeValue(a, "components", attribute_components, "config.attributes");
    MergeValue(a, "variance_floor", attribute_variance_floor, "config.attributes");
  }
}

json RunConfig::ToJson() const {
  json j;
  j["reference_manifest"] = reference_manifest.string();
  j["candidate_manifest"] = candidate_manifest.string();
  j["output_dir"] = output_dir.string();
  j["reference_embeddings"] = OptPath(reference_embeddings);
  j["candidate_embeddings"] = OptPath(candidate_embeddings);
  j["score_manifest"] = OptPath(score_manifest);
  j["reference_hypotheses"] = OptPath(reference_hypotheses);
  j["candidate_hypotheses"] = OptPath(candidate_hypotheses);
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["strict_pairing"] = strict_pairing;
  const FrameParams& f = measure.frame;
  j["frame"] = {{"window", f.window},   {"hop", f.hop},       {"f0_window", f.f0_window},
                {"f0_min", f.f0_min},   {"f0_max", f.f0_max}, {"voicing_threshold", f.voicing_threshold}};
  j["silence_labels"] = std::vector<std::string>(measure.silence_labels.begin(), measure.silence_labels.end());
  j["augment"] = {{"enabled", run_augment},
                  {"snr_min", augment.snr_min},
                  {"snr_max", augment.snr_max},
                  {"rir_probability", augment.rir_probability},
                  {"rt60_min", augment.rt60_min},
                  {"rt60_max", augment.rt60_max},
                  {"per_speaker", augment.per_speaker}};
  j["attributes"] = {{"enabled", run_attributes},
                     {"components", attribute_components},
                     {"variance_floor", attribute_variance_floor}};
  return j;
}

void RunConfig::Validate() const {
  RequireFile(reference_manifest, "reference_manifest");
  RequireFile(candidate_manifest, "candidate_manifest");
  if (output_dir.empty()) throw ConfigError("output_dir is required");
  if (reference_embeddings) RequireFile(*reference_embeddings, "reference_embeddings");
  if (candidate_embeddings) RequireFile(*candidate_embeddings, "candidate_embeddings");
  if (score_manifest) RequireFile(*score_manifest, "score_manifest");
  if (reference_hypotheses) RequireFile(*reference_hypotheses, "reference_hypotheses");
  if (candidate_hypotheses) RequireFile(*candidate_hypotheses, "candidate_hypotheses");
  if (reference_hypotheses && !candidate_hypotheses)
    throw ConfigError("reference_hypotheses given without candidate_hypotheses");
  if (jobs < 0) throw ConfigError("jobs must be >= 0");
  measure.frame.Validate();
  if (run_augment) augment.Validate();
  if (attribute_components < 1) throw ConfigError("attributes.components must be >= 1");
  if (!(attribute_variance_floor > 0.0)) throw ConfigError("attributes.variance_floor must be > 0");
}

std::string RunConfig::Hash() const {
  json j = ToJson();
  j.erase("output_dir");
  j.erase("jobs");
  for (auto& [key, value] : j.items()) {
    if (value.is_string()) value = fs::weakly_canonical(value.get<std::string>()).string();
  }
  return Hex64(Fnv1a(j.dump()));
}

std::vector<MeasureRow> MeasureCorpus(const std::vector<UtteranceRecord>& records, const MeasureOptions& options,
                                      int jobs) {
  std::vector<MeasureRow> rows(records.size());
  ParallelFor(records.size(), ResolveJobs(jobs), [&](size_t i) {
    rows[i] = {records[i].id, records[i].speaker, MeasureUtterance(records[i], options)};
  });
  std::sort(rows.begin(), rows.end(), [](const MeasureRow& a, const MeasureRow& b) { return a.id < b.id; });
  return rows;
}

std::string FormatMissingMeasuresCsv(const std::vector<MeasureRow>& rows) {
  std::string out = "id,measure,reason\n";
  for (const auto& r : rows) {
    for (Measure m : kAllMeasures) {
      const MeasureValue& v = r.measures.get(m);
      if (v.has_value()) continue;
      std::string reason = v.missing_reason;
      std::replace(reason.begin(), reason.end(), ',', ';');
      std::replace(reason.begin(), reason.end(), '\n', ' ');
      out += r.id + "," + std::string(MeasureKey(m)) + "," + reason + "\n";
    }
  }
  return out;
}

json EmbeddingDistances::ToJson() const {
  return {{"fd_intra", OptDouble(fd_intra)},
          {"fd_inter", OptDouble(fd_inter)},
          {"dimension", dimension},
          {"n_reference", n_reference},
          {"n_candidate", n_candidate},
          {"pca_explained", pca_explained},
          {"notes", notes}};
}

EmbeddingDistances ComputeEmbeddingDistances(const EmbeddingSet& reference, const EmbeddingSet& candidate) {
  reference.Validate();
  candidate.Validate();
  EmbeddingDistances out;
  out.n_reference = reference.vectors.size();
  out.n_candidate = candidate.vectors.size();
  out.dimension = reference.dim();
  if (reference.vectors.empty() || candidate.vectors.empty()) {
    out.notes.push_back("no embeddings on one side");
    return out;
  }
  if (reference.dim() != candidate.dim())
    throw DataError("embedding dimensions differ: " + std::to_string(reference.dim()) + " vs " +
                    std::to_string(candidate.dim()));

  SpeakerViews rv = PrepareSpeakerViews(reference);
  SpeakerViews cv = PrepareSpeakerViews(candidate);
  for (const auto& w : rv.warnings) out.notes.push_back("reference: " + w);
  for (const auto& w : cv.warnings) out.notes.push_back("candidate: " + w);
  out.fd_intra = FdOrNote(rv.intra, cv.intra, "fd_intra", out.notes);
  out.fd_inter = FdOrNote(rv.inter, cv.inter, "fd_inter", out.notes);

  std::vector<Eigen::VectorXd> pooled;
  std::vector<std::pair<std::string, const char*>> labels;
  for (const auto& [id, v] : reference.vectors) {
    pooled.push_back(v);
    labels.emplace_back(id, "reference");
  }
  for (const auto& [id, v] : candidate.vectors) {
    pooled.push_back(v);
    labels.emplace_back(id, "candidate");
  }
  PcaResult pca = PcaProject(pooled, 2);
  out.pca_explained = pca.explained;
  out.pca_csv = "id,corpus,pc1,pc2\n";
  for (size_t i = 0; i < pooled.size(); ++i) {
    out.pca_csv += labels[i].first + "," + labels[i].second + "," + FormatG(pca.coords[i](0), 9) + "," +
                   FormatG(pca.coords[i](1), 9) + "\n";
  }
  return out;
}

EmbeddingSet LoadCorpusEmbeddings(const std::vector<UtteranceRecord>& records,
                                  const std::optional<fs::path>& csv, const std::string& label,
                                  std::vector<std::string>& notes) {
  std::vector<std::string> missing;
  EmbeddingSet set;
  if (csv) {
    auto table = LoadEmbeddingsCsv(*csv);
    set = BuildEmbeddingSet(records, &table, &missing);
  } else {
    set = BuildEmbeddingSet(records, nullptr, &missing);
  }
  if (!missing.empty()) {
    std::string msg = label + ": " + std::to_string(missing.size()) + " utterances without embeddings";
    if (missing.size() <= 5) {
      msg += " (";
      for (size_t i = 0; i < missing.size(); ++i) msg += (i ? " " : "") + missing[i];
      msg += ")";
    }
    notes.push_back(msg);
  }
  return set;
}

json AugmentCorpus(const std::vector<UtteranceRecord>& records, const AugmentPolicy& policy, uint64_t seed,
                   const fs::path& out_dir, int jobs) {
  policy.Validate();
  std::set<std::string> keys;
  for (const auto& r : records) keys.insert(policy.per_speaker ? r.speaker : r.id);
  const auto plan = PlanSpeakerAugmentation(policy, keys, seed);

  std::map<std::string, Rir> rirs;
  for (const auto& [key, p] : plan) {
    if (!p.apply_rir) continue;
    Rng rng(DeriveSeed(seed, {"augment-rir", key}));
    rirs.emplace(key, SynthRir(*p.rt60, kInternalSampleRate, rng));
  }

  fs::create_directories(out_dir / "wav");
  struct Output {
    UtteranceRecord record;
    json params;
  };
  std::vector<Output> outputs(records.size());
  ParallelFor(records.size(), ResolveJobs(jobs), [&](size_t i) {
    const UtteranceRecord& rec = records[i];
    const std::string key = policy.per_speaker ? rec.speaker : rec.id;
    const SpeakerAugmentParams& p = plan.at(key);
    AudioBuffer audio = LoadAudio(rec);
    double rir_scale = 1.0;
    auto rir = rirs.find(key);
    if (rir != rirs.end()) {
      RirResult r = ApplyRir(audio, rir->second);
      audio = std::move(r.audio);
      rir_scale = r.scale;
    }
    Rng rng(DeriveSeed(seed, {"augment-noise", rec.speaker, rec.id}));
    audio = AddNoiseAtSnr(audio, p.snr_db, rng);
    double peak = 0.0;
    for (double s : audio.samples) peak = std::max(peak, std::abs(s));
    double peak_scale = 1.0;
    if (peak > 1.0) {
      peak_scale = 1.0 / peak;
      for (double& s : audio.samples) s *= peak_scale;
    }
    const fs::path rel = fs::path("wav") / (rec.id + ".wav");
    WavData wav;
    wav.sample_rate = audio.sample_rate;
    wav.channels = 1;
    wav.interleaved = std::move(audio.samples);
    WriteWav(out_dir / rel, wav, WavEncoding::kFloat32);

    UtteranceRecord out = rec;
    out.audio_path = rel;
    if (out.alignment_path) out.alignment_path = fs::absolute(*out.alignment_path).lexically_normal();
    if (out.embedding_path) out.embedding_path = fs::absolute(*out.embedding_path).lexically_normal();
    outputs[i].record = std::move(out);
    outputs[i].params = {{"id", rec.id},
                         {"speaker", rec.speaker},
                         {"key", key},
                         {"snr_db", p.snr_db},
                         {"rt60", p.rt60 ? json(*p.rt60) : json(nullptr)},
                         {"rir_scale", rir_scale},
                         {"peak_scale", peak_scale}};
  });
  std::sort(outputs.begin(), outputs.end(),
            [](const Output& a, const Output& b) { return a.record.id < b.record.id; });

  std::vector<UtteranceRecord> manifest;
  json per_utt = json::array();
  for (auto& o : outputs) {
    manifest.push_back(o.record);
    per_utt.push_back(o.params);
  }
  WriteManifest(out_dir / "manifest.jsonl", manifest);
  json sidecar = AugmentPlanToJson(policy, plan, seed);
  sidecar["outputs"] = per_utt;
  WriteFileAtomic(out_dir / "augment_params.json", sidecar.dump(2) + "\n");
  return sidecar;
}

json ScoreSummary::ToJson() const {
  json j;
  j["candidate"] = BreakdownToJson(candidate.pooled);
  j["reference"] = reference ? BreakdownToJson(reference->pooled) : json(nullptr);
  j["wr"] = OptDouble(wr);
  std::vector<std::string> warnings;
  for (const auto& w : candidate.warnings) warnings.push_back("candidate: " + w);
  if (reference)
    for (const auto& w : reference->warnings) warnings.push_back("reference: " + w);
  j["warnings"] = warnings;
  return j;
}

ScoreSummary ScoreHypotheses(const std::vector<UtteranceRecord>& test_set, const fs::path& candidate_hypotheses,
                             const std::optional<fs::path>& reference_hypotheses) {
  ScoreSummary s;
  s.candidate = ScoreCorpus(test_set, LoadTranscripts(candidate_hypotheses));
  if (reference_hypotheses) {
    s.reference = ScoreCorpus(test_set, LoadTranscripts(*reference_hypotheses));
    if (s.candidate.pooled.reference_length == 0)
      throw DataError("score: no scorable reference transcripts");
    s.wr = WerRatio(s.candidate.pooled.wer(), s.reference->pooled.wer());
  }
  return s;
}

const json& ReportSchema() {
  static const json schema = json::parse(kReportSchemaText);
  return schema;
}

json RunReport(const RunConfig& config) {
  Stage("config", [&] { config.Validate(); });
  const fs::path& out = config.output_dir;
  Stage("output", [&] { fs::create_directories(out); });

  std::vector<std::string> warnings;
  std::vector<UtteranceRecord> ref_records, cand_records;
  Stage("load-manifests", [&] {
    ref_records = LoadManifest(config.reference_manifest);
    cand_records = LoadManifest(config.candidate_manifest);
  });
  PairedCorpus paired = Stage("pairing", [&] {
    return PairCorpora(ref_records, cand_records,
                       config.strict_pairing ? PairingMode::kStrict : PairingMode::kLenient);
  });
  warnings.insert(warnings.end(), paired.warnings.begin(), paired.warnings.end());
  std::vector<UtteranceRecord> ref_paired, cand_paired;
  for (const auto& [r, c] : paired.pairs) {
    ref_paired.push_back(r);
    cand_paired.push_back(c);
  }

  // Distances are computed from the written CSVs, so a standalone `distance`
  // run over those files reproduces the report exactly.
  auto measure_stage = [&](const std::vector<UtteranceRecord>& recs, const char* label) {
    std::vector<MeasureRow> rows = MeasureCorpus(recs, config.measure, config.jobs);
    const std::string csv = FormatMeasuresCsv(rows);
    const std::string base = std::string("measures_") + label;
    WriteFileAtomic(out / (base + ".csv"), csv);
    WriteFileAtomic(out / (base + ".missing.csv"), FormatMissingMeasuresCsv(rows));
    return ParseMeasuresCsv(csv, base + ".csv");
  };
  auto ref_rows = Stage("measure-reference", [&] { return measure_stage(ref_paired, "reference"); });
  auto cand_rows = Stage("measure-candidate", [&] { return measure_stage(cand_paired, "candidate"); });

  auto rows = Stage("distance", [&] {
    auto table = MeasureDistanceTable(ref_rows, cand_rows);
    WriteFileAtomic(out / "distance.csv", FormatDistanceCsv(table));
    for (Measure m : kAllMeasures) {
      NormalizedPair pair = NormalizedMeasureSamples(ref_rows, cand_rows, m);
      if (!pair.samples) continue;
      auto bins = PooledHistogram(pair.samples->first, pair.samples->second);
      WriteFileAtomic(out / ("hist_" + std::string(MeasureKey(m)) + ".csv"), FormatHistogramCsv(bins));
    }
    return table;
  });

  std::vector<std::string> embed_notes;
  EmbeddingSet ref_emb, cand_emb;
  EmbeddingDistances emb = Stage("embed-distance", [&] {
    ref_emb = LoadCorpusEmbeddings(ref_paired, config.reference_embeddings, "reference", embed_notes);
    cand_emb = LoadCorpusEmbeddings(cand_paired, config.candidate_embeddings, "candidate", embed_notes);
    EmbeddingDistances d = ComputeEmbeddingDistances(ref_emb, cand_emb);
    if (!d.pca_csv.empty()) WriteFileAtomic(out / "pca.csv", d.pca_csv);
    return d;
  });
  emb.notes.insert(emb.notes.begin(), embed_notes.begin(), embed_notes.end());

  json attributes = nullptr;
  if (config.run_attributes) {
    attributes = Stage("fit-attrs", [&] {
      AttributeFitOptions opts;
      opts.components = config.attribute_components;
      opts.variance_floor = config.attribute_variance_floor;
      opts.seed = config.seed;
      AttributeModelSet models = FitSpeakerModels(ref_rows, ref_emb.vectors.empty() ? nullptr : &ref_emb, opts);
      WriteFileAtomic(out / "attribute_models.json", models.ToJson().dump(2) + "\n");
      for (const auto& w : models.warnings) warnings.push_back("fit-attrs: " + w);
      return json{{"path", "attribute_models.json"}, {"speakers", models.speakers.size()}};
    });
  }

  json augment = nullptr;
  if (config.run_augment) {
    augment = Stage("augment", [&] {
      AugmentCorpus(cand_paired, config.augment, config.seed, out / "augmented", config.jobs);
      return json{{"path", "augmented/manifest.jsonl"}, {"utterances", cand_paired.size()}};
    });
  }

  json score = nullptr;
  std::optional<ScoreSummary> scores;
  if (config.candidate_hypotheses) {
    scores = Stage("score", [&] {
      std::vector<UtteranceRecord> test_set =
          config.score_manifest ? LoadManifest(*config.score_manifest) : ref_records;
      ScoreSummary s = ScoreHypotheses(test_set, *config.candidate_hypotheses, config.reference_hypotheses);
      WriteFileAtomic(out / "wer_candidate.csv", FormatUtteranceScoresCsv(s.candidate));
      if (s.reference) WriteFileAtomic(out / "wer_reference.csv", FormatUtteranceScoresCsv(*s.reference));
      return s;
    });
    score = scores->ToJson();
  }

  json report;
  report["format"] = "speechdist-report";
  report["version"] = 1;
  report["rows"] = DistanceRowsToJson(rows);
  report["fd_intra"] = OptDouble(emb.fd_intra);
  report["fd_inter"] = OptDouble(emb.fd_inter);
  report["embeddings"] = emb.ToJson();
  report["wer_candidate"] = scores ? OptDouble(scores->candidate.pooled.wer()) : json(nullptr);
  report["wer_reference"] =
      scores && scores->reference ? OptDouble(scores->reference->pooled.wer()) : json(nullptr);
  report["wr"] = scores ? OptDouble(scores->wr) : json(nullptr);
  report["score"] = score;
  report["attributes"] = attributes;
  report["augment"] = augment;
  report["counts"] = {{"reference", ref_records.size()},
                      {"candidate", cand_records.size()},
                      {"paired", paired.pairs.size()},
                      {"speakers", paired.speakers.size()}};
  report["warnings"] = warnings;
  report["provenance"] = {{"tool", "speechdist"},
                          {"version", kToolVersion},
                          {"config_hash", config.Hash()},
                          {"seed", config.seed},
                          {"wada_table_version", DefaultWadaTable().version}};

  Stage("report", [&] {
    auto errors = ValidateJsonSchema(report, ReportSchema());
    if (!errors.empty()) {
      std::string msg = "report.json fails schema validation:";
      for (const auto& e : errors) msg += " " + e + ";";
      throw DataError(msg);
    }
    WriteFileAtomic(out / "report.json", report.dump(2) + "\n");
  });
  return report;
}

}  // namespace speechdist
