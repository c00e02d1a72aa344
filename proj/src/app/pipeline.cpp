#include "zshar/app/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <unordered_set>

#include "zshar/classify/classifier.hpp"
#include "zshar/core/corpus_io.hpp"
#include "zshar/core/digest.hpp"
#include "zshar/core/errors.hpp"
#include "zshar/embedding/cache.hpp"
#include "zshar/evaluate/experiments.hpp"
#include "zshar/evaluate/report_io.hpp"
#include "zshar/ingest/ingest.hpp"
#include "zshar/textgen/descriptors.hpp"
#include "zshar/textgen/summarizer.hpp"

namespace zshar::app {
namespace {

using nlohmann::json;

void add_report(ingest::SegmentationReport& into, const ingest::SegmentationReport& r, const std::string& file) {
  into.windows_emitted += r.windows_emitted;
  into.orphan_begins += r.orphan_begins;
  into.orphan_ends += r.orphan_ends;
  into.events_in += r.events_in;
  into.events_in_windows += r.events_in_windows;
  into.events_in_orphan_spans += r.events_in_orphan_spans;
  into.events_unannotated += r.events_unannotated;
  for (const auto& s : r.skipped) into.note_skip(s.line_number, file.empty() ? s.reason : file + ": " + s.reason);
}

class ArtifactWriter {
 public:
  ArtifactWriter(std::filesystem::path dir, std::string digest) : dir_(std::move(dir)), digest_(std::move(digest)) {}

  void write(const std::string& name, const std::string& content) {
    evaluate::write_file(dir_ / name, content);
    written_.push_back(dir_ / name);
    manifest_.push_back({{"file", name}, {"sha256", sha256_hex(content)}});
  }

  std::vector<std::filesystem::path> finish(const json& config) {
    json m = {{"run_config_digest", digest_}, {"run_config", config}, {"artifacts", manifest_}};
    evaluate::write_file(dir_ / "manifest.json", m.dump(2) + "\n");
    written_.push_back(dir_ / "manifest.json");
    return written_;
  }

 private:
  std::filesystem::path dir_;
  std::string digest_;
  json manifest_ = json::array();
  std::vector<std::filesystem::path> written_;
};

std::string jsonl(const std::vector<json>& records) {
  std::string out;
  for (const auto& r : records) out += r.dump() + "\n";
  return out;
}

void write_report_set(ArtifactWriter& w, const std::string& stem, const evaluate::EvaluationReport& r) {
  w.write(stem + ".json", evaluate::to_json(r).dump(2) + "\n");
  w.write(stem + "_confusion.csv", evaluate::confusion_csv(r.confusion));
  w.write(stem + "_confusion.txt",
          "run_config_digest " + r.meta.run_config_digest + "\n" + evaluate::render_heatmap(r.confusion));
}

std::unique_ptr<embedding::EmbeddingProvider> open_provider(const embedding::ProviderSpec& spec, std::ostream& log) {
  auto p = embedding::make_provider(spec);
  if (auto* cache = dynamic_cast<const embedding::CacheProvider*>(p.get())) {
    if (cache->max_norm_deviation() > 1e-6) {
      log << "warning: " << spec.cache_path.string() << ": stored vectors deviate from unit norm by up to "
          << cache->max_norm_deviation() << "; renormalising\n";
    }
  }
  return p;
}

}  // namespace

ingest::SegmentationResult ingest_files(Adapter adapter, const std::vector<std::filesystem::path>& files,
                                        const ingest::CsvMapping* mapping, const HomeLayout* layout, bool strict) {
  ingest::SegmentationResult out;
  for (std::size_t k = 0; k < files.size(); ++k) {
    std::ifstream in(files[k], std::ios::binary);
    if (!in) throw DataError("cannot open input file: " + files[k].string());
    ingest::IngestOptions opts;
    opts.strict = strict;
    opts.id_prefix = files.size() > 1 ? "f" + std::to_string(k) + "-w" : "w";
    ingest::SegmentationResult r;
    try {
      if (adapter == Adapter::csv) {
        if (mapping == nullptr) throw ConfigError("csv adapter needs a column mapping");
        r = ingest::ingest_csv(in, *mapping, layout, opts);
      } else {
        r = ingest::ingest_casas(in, layout, opts);
      }
    } catch (const ParseError& e) {
      throw DataError(files[k].string() + ":" + std::to_string(e.line_number()) + ": " + e.reason());
    }
    add_report(out.report, r.report, files.size() > 1 ? files[k].string() : "");
    std::move(r.windows.begin(), r.windows.end(), std::back_inserter(out.windows));
  }
  return out;
}

std::vector<ActivityWindow> load_windows(const RunConfig& cfg) {
  std::vector<ActivityWindow> windows;
  if (!cfg.corpus.empty()) {
    windows = read_corpus(cfg.resolve(cfg.corpus));
  } else {
    const HomeLayout layout = HomeLayout::load(cfg.resolve(cfg.layout));
    std::optional<ingest::CsvMapping> mapping;
    if (cfg.inputs->adapter == Adapter::csv) mapping = ingest::CsvMapping::load(cfg.resolve(cfg.inputs->csv_mapping));
    std::vector<std::filesystem::path> files;
    for (const auto& f : cfg.inputs->files) files.push_back(cfg.resolve(f));
    windows = ingest_files(cfg.inputs->adapter, files, mapping ? &*mapping : nullptr, &layout, cfg.inputs->strict)
                  .windows;
  }
  std::set<std::string, std::less<>> drop(cfg.drop_labels.begin(), cfg.drop_labels.end());
  return ingest::filter_labels(std::move(windows), drop);
}

textgen::SummaryConfig load_summary_config(const RunConfig& cfg) {
  if (cfg.summary_config.empty()) {
    textgen::SummaryConfig c;
    c.validate();
    return c;
  }
  return textgen::SummaryConfig::load(cfg.resolve(cfg.summary_config));
}

std::vector<TextRecord> collect_texts(const RunConfig& cfg) {
  const HomeLayout layout = HomeLayout::load(cfg.resolve(cfg.layout));
  const auto summary_cfg = load_summary_config(cfg);
  const auto descriptors = textgen::DescriptorRegistry::load(cfg.resolve(cfg.descriptors));
  const auto windows = load_windows(cfg);
  const bool ablation = cfg.experiment.kind == ExperimentKind::ablation;

  std::vector<TextRecord> out;
  std::unordered_set<std::string> seen;
  auto add = [&](std::string id, std::string text) {
    if (seen.insert(text).second) out.push_back({std::move(id), std::move(text)});
  };
  for (const auto& label : descriptors.labels()) add("descriptor:" + label, descriptors.at(label).text);
  if (ablation) {
    for (const auto& label : descriptors.labels()) add("label:" + label, display_name(label));
  }
  for (const auto& w : windows) {
    if (!is_valid(w)) throw DataError("invalid window `" + w.window_id + "`");
    add("summary:" + w.window_id, textgen::summarize(w, layout, summary_cfg).text);
    if (ablation) add("raw:" + w.window_id, textgen::raw_event_rendering(w));
  }
  return out;
}

RunOutcome execute_run(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const std::string digest = cfg.digest();
  const HomeLayout layout = HomeLayout::load(cfg.resolve(cfg.layout));
  const auto summary_cfg = load_summary_config(cfg);
  const auto descriptors = textgen::DescriptorRegistry::load(cfg.resolve(cfg.descriptors));
  const auto windows = load_windows(cfg);
  const auto provider = open_provider(cfg.provider_spec(), log);

  evaluate::RunMetadata meta;
  meta.dataset = cfg.dataset;
  meta.layout_digest = layout.digest();
  meta.summary_config_digest = summary_cfg.digest();
  meta.descriptors_digest = descriptors.digest();
  meta.run_config_digest = digest;
  evaluate::ExperimentContext ctx{layout, summary_cfg, descriptors, *provider, cfg.metric, meta, cfg.threads};

  ArtifactWriter writer(cfg.resolve(cfg.output_dir), digest);
  RunOutcome outcome;
  std::string flat = evaluate::flat_metrics_header();
  auto add_flat = [&](const std::string& config, const evaluate::EvaluationReport& r) {
    flat += evaluate::flat_metrics_rows(cfg.dataset, config, r);
  };

  switch (cfg.experiment.kind) {
    case ExperimentKind::zero_shot: {
      auto result = evaluate::run_zero_shot(ctx, windows);
      std::vector<json> preds, summary_records;
      for (const auto& p : result.predictions) {
        auto rec = classify::prediction_record(p, result.anchors);
        rec["run_config_digest"] = digest;
        preds.push_back(std::move(rec));
      }
      const auto texts = evaluate::window_texts(ctx, windows);
      for (std::size_t i = 0; i < windows.size(); ++i) {
        summary_records.push_back(textgen::summary_record(windows[i].window_id, texts[i]));
      }
      write_report_set(writer, "report", result.report);
      writer.write("predictions.jsonl", jsonl(preds));
      writer.write("summaries.jsonl", jsonl(summary_records));
      add_flat("proposed", result.report);
      outcome.headline = evaluate::headline_table({{cfg.dataset + " zero-shot", &result.report}});
      break;
    }
    case ExperimentKind::ablation: {
      std::unique_ptr<embedding::EmbeddingProvider> alt;
      std::string reason = "no alternative encoder configured";
      if (auto spec = cfg.alt_provider_spec()) {
        try {
          alt = open_provider(*spec, log);
        } catch (const ProviderError& e) {
          reason = e.what();
          log << "warning: alternative encoder unavailable: " << reason << "\n";
        }
      }
      auto cells = evaluate::run_ablation(ctx, windows, alt.get(), reason);
      json all = json::array();
      std::vector<evaluate::HeadlineRow> rows;
      for (const auto& c : cells) {
        all.push_back(evaluate::to_json(c));
        if (c.report) {
          write_report_set(writer, "report_" + c.key, *c.report);
          add_flat(c.key, *c.report);
        } else {
          log << "warning: " << c.key << " unavailable: " << c.unavailable_reason << "\n";
        }
        rows.push_back({c.row_label, c.report ? &*c.report : nullptr});
      }
      writer.write("ablation.json", all.dump(2) + "\n");
      writer.write("ablation.csv", evaluate::ablation_table_csv(cfg.dataset, cells, digest));
      outcome.headline = evaluate::headline_table(rows);
      break;
    }
    case ExperimentKind::few_shot: {
      const auto& shots = cfg.experiment.shots;
      const std::size_t support = cfg.experiment.support_per_class.value_or(*std::max_element(shots.begin(), shots.end()));
      const auto split = evaluate::split_chronological(windows, support);
      evaluate::FewShotParams params{shots, cfg.seeds, cfg.experiment.exemplars_only};
      auto result = evaluate::run_few_shot(ctx, split, params);
      json runs = json::array();
      for (const auto& r : result.runs) {
        const std::string key = "fewshot_s" + std::to_string(r.shots_per_class) + "_seed" + std::to_string(r.seed);
        writer.write(key + ".json", evaluate::to_json(r).dump(2) + "\n");
        add_flat(key, r.report);
      }
      json agg = json::array();
      for (const auto& a : result.aggregates) agg.push_back(evaluate::to_json(a));
      json summary = {{"run_config_digest", digest},
                      {"support_per_class", support},
                      {"support_windows", split.support.size()},
                      {"evaluation_windows", split.evaluation.size()},
                      {"aggregates", agg}};
      writer.write("fewshot_aggregate.json", summary.dump(2) + "\n");
      std::string table = "shots  runs  mean_acc  mean_f1_w  var_f1_w\n";
      for (const auto& a : result.aggregates) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%5zu  %4zu  %8.4f  %9.4f  ", a.shots_per_class, a.runs, a.mean_accuracy,
                      a.mean_f1_weighted);
        table += buf;
        if (a.variance_f1_weighted) {
          std::snprintf(buf, sizeof(buf), "%8.6f\n", *a.variance_f1_weighted);
          table += buf;
        } else {
          table += "     n/a\n";
        }
      }
      outcome.headline = table;
      break;
    }
  }
  writer.write("metrics.csv", flat);
  outcome.artifacts = writer.finish(cfg.to_json());
  return outcome;
}

}  // namespace zshar::app
