// tools/speechdist.cc

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

// speechdist: distribution distances between a reference and a candidate
// speech corpus, plus the attribute, augmentation and scoring stages.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "speechdist/attributes.h"
#include "speechdist/augment.h"
#include "speechdist/corpus.h"
#include "speechdist/distances.h"
#include "speechdist/embeddings.h"
#include "speechdist/error.h"
#include "speechdist/io.h"
#include "speechdist/measures.h"
#include "speechdist/pipeline.h"
#include "speechdist/scoring.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace speechdist;

namespace {

int ReportError(const std::string& kind, const std::string& stage, const std::string& message, int code) {
  json j = {{"error", {{"kind", kind}, {"stage", stage.empty() ? json(nullptr) : json(stage)},
                       {"message", message}}}};
  std::cerr << j.dump() << "\n";
  return code;
}

struct Common {
  std::string config_path;
  uint64_t seed = 0;
  int jobs = 0;
  bool strict_pairing = false;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
  CLI::Option* strict_opt = nullptr;
};

void AddCommon(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON config; flags win on conflict");
  c.seed_opt = app->add_option("--seed", c.seed, "root seed");
  c.jobs_opt = app->add_option("--jobs", c.jobs, "worker threads (0: $SPEECHDIST_JOBS or all cores)");
  c.strict_opt = app->add_flag("--strict-pairing", c.strict_pairing, "fail when the id sets differ");
}

RunConfig LoadConfig(const Common& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) {
    json j;
    try {
      j = json::parse(ReadFile(c.config_path));
    } catch (const json::parse_error& e) {
      throw ConfigError(c.config_path + ": " + e.what());
    } catch (const DataError& e) {
      throw ConfigError(e.what());
    }
    cfg.MergeJson(j, fs::path(c.config_path).parent_path());
  }
  if (*c.seed_opt) cfg.seed = c.seed;
  if (*c.jobs_opt) cfg.jobs = c.jobs;
  if (*c.strict_opt) cfg.strict_pairing = c.strict_pairing;
  if (cfg.jobs < 0) throw ConfigError("--jobs must be >= 0");
  return cfg;
}

template <typename T>
void Override(const CLI::Option* opt, const T& value, T& dst) {
  if (*opt) dst = value;
}

bool IsManifest(const fs::path& p) { return p.extension() == ".jsonl"; }

// Embeddings for the records of `manifest`, taken from `csv` when given and
// from the manifest dvector files otherwise.
EmbeddingSet EmbeddingsFor(const fs::path& manifest, const std::optional<fs::path>& csv, const std::string& label,
                           std::vector<std::string>& notes) {
  return LoadCorpusEmbeddings(LoadManifest(manifest), csv, label, notes);
}

std::string JoinPath(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speechdist: distribution distances between speech corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // measure
  Common measure_c;
  std::string measure_manifest, measure_out;
  auto* measure = app.add_subcommand("measure", "per-utterance measures of one corpus");
  AddCommon(measure, measure_c);
  measure->add_option("--manifest", measure_manifest, "corpus manifest (JSONL)")->required();
  measure->add_option("--out", measure_out, "measures CSV")->required();

  // distance
  Common dist_c;
  std::string dist_ref, dist_cand, dist_out, dist_json, dist_hist;
  auto* distance = app.add_subcommand("distance", "normalized W2 per measure from two measures CSVs");
  AddCommon(distance, dist_c);
  distance->add_option("--reference", dist_ref, "reference measures CSV")->required();
  distance->add_option("--candidate", dist_cand, "candidate measures CSV")->required();
  distance->add_option("--out", dist_out, "distance CSV")->required();
  distance->add_option("--json", dist_json, "also write the rows as JSON");
  distance->add_option("--hist-dir", dist_hist, "write hist_<measure>.csv files here");

  // embed-distance
  Common emb_c;
  std::string emb_ref, emb_cand, emb_ref_csv, emb_cand_csv, emb_out, emb_pca;
  auto* embed = app.add_subcommand("embed-distance", "FD-Intra and FD-Inter of speaker embeddings");
  AddCommon(embed, emb_c);
  embed->add_option("--reference", emb_ref, "reference manifest (JSONL)")->required();
  embed->add_option("--candidate", emb_cand, "candidate manifest (JSONL)")->required();
  embed->add_option("--reference-embeddings", emb_ref_csv, "id,v0,... CSV instead of manifest dvector files");
  embed->add_option("--candidate-embeddings", emb_cand_csv, "id,v0,... CSV instead of manifest dvector files");
  embed->add_option("--out", emb_out, "result JSON")->required();
  embed->add_option("--pca", emb_pca, "PCA scatter CSV");

  // fit-attrs
  Common fit_c;
  std::string fit_measures, fit_embeddings, fit_out;
  int fit_components = kDefaultGmmComponents;
  double fit_floor = kDefaultVarianceFloor;
  auto* fit = app.add_subcommand("fit-attrs", "per-speaker attribute GMMs");
  AddCommon(fit, fit_c);
  fit->add_option("--measures", fit_measures, "measures CSV")->required();
  fit->add_option("--embeddings", fit_embeddings, "manifest (.jsonl) or id,v0,... CSV");
  auto* fit_components_opt = fit->add_option("--components", fit_components, "mixture components");
  auto* fit_floor_opt = fit->add_option("--variance-floor", fit_floor, "variance floor");
  fit->add_option("--out", fit_out, "model JSON")->required();

  // sample-attrs
  std::string sample_model, sample_speaker, sample_out;
  size_t sample_n = 1;
  uint64_t sample_seed = 0;
  auto* sample = app.add_subcommand("sample-attrs", "draw attributes for one speaker");
  sample->add_option("--model", sample_model, "model JSON from fit-attrs")->required();
  sample->add_option("--speaker", sample_speaker, "speaker id")->required();
  sample->add_option("--n", sample_n, "number of samples")->check(CLI::PositiveNumber);
  sample->add_option("--seed", sample_seed, "root seed");
  sample->add_option("--out", sample_out, "samples CSV")->required();

  // augment
  Common aug_c;
  std::string aug_manifest, aug_out;
  AugmentPolicy aug_flags;
  bool aug_per_utt = false;
  auto* augment = app.add_subcommand("augment", "reverberation and additive noise");
  AddCommon(augment, aug_c);
  augment->add_option("--manifest", aug_manifest, "corpus manifest (JSONL)")->required();
  augment->add_option("--out-dir", aug_out, "output directory")->required();
  auto* snr_min_opt = augment->add_option("--snr-min", aug_flags.snr_min, "dB");
  auto* snr_max_opt = augment->add_option("--snr-max", aug_flags.snr_max, "dB");
  auto* rir_prob_opt = augment->add_option("--rir-prob", aug_flags.rir_probability, "RIR probability");
  auto* rt60_min_opt = augment->add_option("--rt60-min", aug_flags.rt60_min, "seconds");
  auto* rt60_max_opt = augment->add_option("--rt60-max", aug_flags.rt60_max, "seconds");
  auto* per_utt_opt = augment->add_flag("--per-utterance", aug_per_utt, "draw parameters per utterance");

  // score
  Common score_c;
  std::string score_manifest, score_hyp, score_ref_hyp, score_out;
  auto* score = app.add_subcommand("score", "WER of hypotheses and the WER ratio");
  AddCommon(score, score_c);
  score->add_option("--manifest", score_manifest, "test-set manifest with reference transcripts")->required();
  score->add_option("--hyp", score_hyp, "candidate-trained hypotheses, id<TAB>text")->required();
  score->add_option("--reference-hyp", score_ref_hyp, "reference-trained hypotheses, id<TAB>text");
  score->add_option("--out", score_out, "result JSON")->required();

  // report
  Common rep_c;
  std::string rep_ref, rep_cand, rep_out, rep_ref_emb, rep_cand_emb, rep_score_manifest, rep_hyp, rep_ref_hyp;
  bool rep_augment = false, rep_attrs = false;
  auto* report = app.add_subcommand("report", "full pipeline and consolidated report");
  AddCommon(report, rep_c);
  auto* rep_ref_opt = report->add_option("--reference", rep_ref, "reference manifest (JSONL)");
  auto* rep_cand_opt = report->add_option("--candidate", rep_cand, "candidate manifest (JSONL)");
  auto* rep_out_opt = report->add_option("--out-dir", rep_out, "output directory");
  auto* rep_ref_emb_opt = report->add_option("--reference-embeddings", rep_ref_emb, "id,v0,... CSV");
  auto* rep_cand_emb_opt = report->add_option("--candidate-embeddings", rep_cand_emb, "id,v0,... CSV");
  auto* rep_score_opt = report->add_option("--score-manifest", rep_score_manifest, "test-set manifest");
  auto* rep_hyp_opt = report->add_option("--hyp", rep_hyp, "candidate-trained hypotheses");
  auto* rep_ref_hyp_opt = report->add_option("--reference-hyp", rep_ref_hyp, "reference-trained hypotheses");
  auto* rep_aug_opt = report->add_flag("--augment", rep_augment, "run the augmentation stage on the candidate");
  auto* rep_attrs_opt = report->add_flag("--fit-attrs", rep_attrs, "fit attribute models on the reference");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("config", "", e.what(), static_cast<int>(ErrorKind::kConfig));
  }

  try {
    if (*measure) {
      RunConfig cfg = LoadConfig(measure_c);
      cfg.measure.frame.Validate();
      auto rows = MeasureCorpus(LoadManifest(measure_manifest), cfg.measure, cfg.jobs);
      WriteMeasuresCsv(measure_out, rows);
      WriteFileAtomic(measure_out + ".missing.csv", FormatMissingMeasuresCsv(rows));
    } else if (*distance) {
      LoadConfig(dist_c);
      auto ref = ReadMeasuresCsv(dist_ref);
      auto cand = ReadMeasuresCsv(dist_cand);
      auto rows = MeasureDistanceTable(ref, cand);
      WriteFileAtomic(dist_out, FormatDistanceCsv(rows));
      if (!dist_json.empty()) WriteFileAtomic(dist_json, DistanceRowsToJson(rows).dump(2) + "\n");
      if (!dist_hist.empty()) {
        fs::create_directories(dist_hist);
        for (Measure m : kAllMeasures) {
          NormalizedPair pair = NormalizedMeasureSamples(ref, cand, m);
          if (!pair.samples) continue;
          WriteFileAtomic(JoinPath(dist_hist, "hist_" + std::string(MeasureKey(m)) + ".csv"),
                          FormatHistogramCsv(PooledHistogram(pair.samples->first, pair.samples->second)));
        }
      }
    } else if (*embed) {
      RunConfig cfg = LoadConfig(emb_c);
      std::vector<std::string> notes;
      auto opt = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<fs::path>(s); };
      auto ref_records = LoadManifest(emb_ref);
      auto cand_records = LoadManifest(emb_cand);
      PairedCorpus paired =
          PairCorpora(ref_records, cand_records, cfg.strict_pairing ? PairingMode::kStrict : PairingMode::kLenient);
      std::vector<UtteranceRecord> rp, cp;
      for (const auto& [r, c] : paired.pairs) {
        rp.push_back(r);
        cp.push_back(c);
      }
      EmbeddingSet ref = LoadCorpusEmbeddings(rp, opt(emb_ref_csv), "reference", notes);
      EmbeddingSet cand = LoadCorpusEmbeddings(cp, opt(emb_cand_csv), "candidate", notes);
      EmbeddingDistances d = ComputeEmbeddingDistances(ref, cand);
      d.notes.insert(d.notes.begin(), notes.begin(), notes.end());
      d.notes.insert(d.notes.begin(), paired.warnings.begin(), paired.warnings.end());
      WriteFileAtomic(emb_out, d.ToJson().dump(2) + "\n");
      if (!emb_pca.empty() && !d.pca_csv.empty()) WriteFileAtomic(emb_pca, d.pca_csv);
    } else if (*fit) {
      RunConfig cfg = LoadConfig(fit_c);
      AttributeFitOptions opts;
      opts.components = cfg.attribute_components;
      opts.variance_floor = cfg.attribute_variance_floor;
      Override(fit_components_opt, fit_components, opts.components);
      Override(fit_floor_opt, fit_floor, opts.variance_floor);
      opts.seed = cfg.seed;
      if (opts.components < 1) throw ConfigError("--components must be >= 1");
      if (!(opts.variance_floor > 0.0)) throw ConfigError("--variance-floor must be > 0");
      auto rows = ReadMeasuresCsv(fit_measures);
      std::optional<EmbeddingSet> emb;
      if (!fit_embeddings.empty()) {
        if (IsManifest(fit_embeddings)) {
          std::vector<std::string> notes;
          emb = EmbeddingsFor(fit_embeddings, std::nullopt, "embeddings", notes);
          for (const auto& n : notes) std::cerr << "warning: " << n << "\n";
        } else {
          auto table = LoadEmbeddingsCsv(fit_embeddings);
          EmbeddingSet set;
          for (const auto& r : rows) {
            auto it = table.find(r.id);
            if (it == table.end()) {
              std::cerr << "warning: no embedding for " << r.id << "\n";
              continue;
            }
            set.vectors[r.id] = it->second;
            set.speaker_of[r.id] = r.speaker;
          }
          emb = std::move(set);
        }
      }
      AttributeModelSet models = FitSpeakerModels(rows, emb ? &*emb : nullptr, opts);
      for (const auto& w : models.warnings) std::cerr << "warning: " << w << "\n";
      WriteFileAtomic(fit_out, models.ToJson().dump(2) + "\n");
    } else if (*sample) {
      json j;
      try {
        j = json::parse(ReadFile(sample_model));
      } catch (const json::parse_error& e) {
        throw DataError(sample_model + ": " + e.what());
      }
      AttributeModelSet models = AttributeModelSet::FromJson(j);
      auto samples = SampleSpeakerAttributes(models, sample_speaker, sample_n, sample_seed);
      WriteFileAtomic(sample_out, FormatAttributeSamplesCsv(models, sample_speaker, samples));
    } else if (*augment) {
      RunConfig cfg = LoadConfig(aug_c);
      AugmentPolicy policy = cfg.augment;
      Override(snr_min_opt, aug_flags.snr_min, policy.snr_min);
      Override(snr_max_opt, aug_flags.snr_max, policy.snr_max);
      Override(rir_prob_opt, aug_flags.rir_probability, policy.rir_probability);
      Override(rt60_min_opt, aug_flags.rt60_min, policy.rt60_min);
      Override(rt60_max_opt, aug_flags.rt60_max, policy.rt60_max);
      if (*per_utt_opt) policy.per_speaker = !aug_per_utt;
      AugmentCorpus(LoadManifest(aug_manifest), policy, cfg.seed, aug_out, cfg.jobs);
    } else if (*score) {
      LoadConfig(score_c);
      auto test_set = LoadManifest(score_manifest);
      std::optional<fs::path> ref_hyp;
      if (!score_ref_hyp.empty()) ref_hyp = score_ref_hyp;
      ScoreSummary s = ScoreHypotheses(test_set, score_hyp, ref_hyp);
      const fs::path out(score_out);
      const std::string stem = (out.parent_path() / out.stem()).string();
      WriteFileAtomic(stem + "_candidate.csv", FormatUtteranceScoresCsv(s.candidate));
      if (s.reference) WriteFileAtomic(stem + "_reference.csv", FormatUtteranceScoresCsv(*s.reference));
      WriteFileAtomic(score_out, s.ToJson().dump(2) + "\n");
    } else if (*report) {
      RunConfig cfg = LoadConfig(rep_c);
      Override(rep_ref_opt, fs::path(rep_ref), cfg.reference_manifest);
      Override(rep_cand_opt, fs::path(rep_cand), cfg.candidate_manifest);
      Override(rep_out_opt, fs::path(rep_out), cfg.output_dir);
      if (*rep_ref_emb_opt) cfg.reference_embeddings = rep_ref_emb;
      if (*rep_cand_emb_opt) cfg.candidate_embeddings = rep_cand_emb;
      if (*rep_score_opt) cfg.score_manifest = rep_score_manifest;
      if (*rep_hyp_opt) cfg.candidate_hypotheses = rep_hyp;
      if (*rep_ref_hyp_opt) cfg.reference_hypotheses = rep_ref_hyp;
      if (*rep_aug_opt) cfg.run_augment = rep_augment;
      if (*rep_attrs_opt) cfg.run_attributes = rep_attrs;
      json r = RunReport(cfg);
      std::cout << (cfg.output_dir / "report.json").string() << "\n";
    }
  } catch (const Error& e) {
    return ReportError(e.kind_name(), e.stage(), e.what(), e.exit_code());
  } catch (const std::exception& e) {
    return ReportError("data", "", e.what(), static_cast<int>(ErrorKind::kData));
  }
  return 0;
}
