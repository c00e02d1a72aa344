// zshar: zero-shot activity recognition from smart-home sensor logs.
#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "zshar/app/pipeline.hpp"
#include "zshar/app/run_config.hpp"
#include "zshar/core/corpus_io.hpp"
#include "zshar/core/errors.hpp"
#include "zshar/embedding/embedding.hpp"
#include "zshar/evaluate/report_io.hpp"
#include "zshar/ingest/ingest.hpp"
#include "zshar/textgen/descriptors.hpp"
#include "zshar/textgen/summarizer.hpp"

namespace {

using namespace zshar;

constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitProvider = 3;
constexpr std::size_t kMaxListedMisses = 20;

struct IngestArgs {
  std::string adapter = "casas";
  std::vector<std::string> inputs;
  std::string layout;
  std::string csv_mapping;
  std::vector<std::string> drop_labels;
  bool strict = false;
  std::string out;
  std::string report;
};

struct SummarizeArgs {
  std::string corpus;
  std::string layout;
  std::string summary_config;
  std::string out;
};

struct ExportArgs {
  std::string config;
  std::string descriptors;
  std::string out;
};

void cmd_ingest(const IngestArgs& a) {
  std::optional<HomeLayout> layout;
  if (!a.layout.empty()) layout = HomeLayout::load(a.layout);
  std::optional<ingest::CsvMapping> mapping;
  app::Adapter adapter = app::Adapter::casas;
  if (a.adapter == "csv") {
    adapter = app::Adapter::csv;
    if (a.csv_mapping.empty()) throw ConfigError("--csv-mapping is required with --adapter csv");
    mapping = ingest::CsvMapping::load(a.csv_mapping);
  }
  std::vector<std::filesystem::path> files(a.inputs.begin(), a.inputs.end());
  auto result = app::ingest_files(adapter, files, mapping ? &*mapping : nullptr, layout ? &*layout : nullptr, a.strict);
  const std::size_t before = result.windows.size();
  std::set<std::string, std::less<>> drop(a.drop_labels.begin(), a.drop_labels.end());
  auto windows = ingest::filter_labels(std::move(result.windows), drop);

  std::ostringstream corpus;
  write_corpus(corpus, windows);
  evaluate::write_file(a.out, corpus.str());

  auto report = result.report.to_json();
  report["windows_after_label_filter"] = windows.size();
  report["windows_dropped_by_label"] = before - windows.size();
  if (!a.report.empty()) evaluate::write_file(a.report, report.dump(2) + "\n");
  std::cout << "windows " << windows.size() << " (emitted " << result.report.windows_emitted << ", dropped by label "
            << before - windows.size() << ")\n"
            << "events " << result.report.events_in << ": in windows " << result.report.events_in_windows
            << ", orphan spans " << result.report.events_in_orphan_spans << ", unannotated "
            << result.report.events_unannotated << "\n"
            << "orphan begins " << result.report.orphan_begins << ", orphan ends " << result.report.orphan_ends
            << ", skipped lines " << result.report.lines_skipped << "\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(5, result.report.skipped.size()); ++i) {
    const auto& s = result.report.skipped[i];
    std::cerr << "skipped line " << s.line_number << ": " << s.reason << "\n";
  }
}

void cmd_summarize(const SummarizeArgs& a) {
  const auto layout = HomeLayout::load(a.layout);
  textgen::SummaryConfig cfg;
  if (a.summary_config.empty()) {
    cfg.validate();
  } else {
    cfg = textgen::SummaryConfig::load(a.summary_config);
  }
  const auto windows = read_corpus(std::filesystem::path(a.corpus));
  std::string out;
  for (const auto& w : windows) {
    auto violations = validate_window(w);
    if (!violations.empty()) {
      throw DataError("invalid window `" + w.window_id + "`: " + violations.front().code + " (" +
                      violations.front().detail + ")");
    }
    out += textgen::summary_record(w.window_id, textgen::summarize(w, layout, cfg).text).dump() + "\n";
  }
  evaluate::write_file(a.out, out);
  std::cout << "wrote " << windows.size() << " summaries to " << a.out << "\n";
}

void cmd_run(const std::string& config_path) {
  const auto cfg = app::RunConfig::load(config_path);
  std::cout << "run config digest " << cfg.digest() << "\n";
  const auto outcome = app::execute_run(cfg, std::cerr);
  std::cout << outcome.headline;
  std::cout << "artifacts in " << cfg.resolve(cfg.output_dir).string() << " (" << outcome.artifacts.size()
            << " files)\n";
}

void cmd_validate(const std::string& config_path) {
  const auto cfg = app::RunConfig::load(config_path);
  cfg.validate();
  std::cout << "ok " << cfg.digest() << "\n";
}

void cmd_export(const ExportArgs& a) {
  std::vector<app::TextRecord> records;
  if (!a.config.empty()) {
    records = app::collect_texts(app::RunConfig::load(a.config));
  } else {
    const auto reg = textgen::DescriptorRegistry::load(a.descriptors);
    for (const auto& label : reg.labels()) records.push_back({"descriptor:" + label, reg.at(label).text});
  }
  std::string out;
  for (const auto& r : records) out += nlohmann::json{{"id", r.id}, {"text", r.text}}.dump() + "\n";
  evaluate::write_file(a.out, out);
  std::cout << "wrote " << records.size() << " texts to " << a.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Zero-shot human activity recognition from smart-home sensor logs"};
  cli.require_subcommand(1);
  cli.set_help_all_flag("--help-all", "Print help for every subcommand");
  cli.footer(
      "Exit codes: 0 success, 1 config or validation error, 2 data error, 3 embedding provider error.\n"
      "Environment: EMBED_ENDPOINT overrides the HTTP provider endpoint.");

  IngestArgs ingest_args;
  auto* ingest_cmd = cli.add_subcommand("ingest", "Segment raw sensor logs into a corpus file");
  ingest_cmd->add_option("--adapter", ingest_args.adapter, "Input format")
      ->check(CLI::IsMember({"casas", "csv"}))
      ->capture_default_str();
  ingest_cmd->add_option("-i,--input", ingest_args.inputs, "Raw log file (repeatable)")->required();
  ingest_cmd->add_option("--layout", ingest_args.layout, "Home layout JSON (sensor modalities)");
  ingest_cmd->add_option("--csv-mapping", ingest_args.csv_mapping, "Column mapping JSON for --adapter csv");
  ingest_cmd->add_option("--drop-label", ingest_args.drop_labels, "Activity label to drop (repeatable)");
  ingest_cmd->add_flag("--strict", ingest_args.strict, "Fail on the first malformed line");
  ingest_cmd->add_option("-o,--out", ingest_args.out, "Output corpus (JSON Lines)")->required();
  ingest_cmd->add_option("--report", ingest_args.report, "Write the segmentation report as JSON");

  SummarizeArgs sum_args;
  auto* sum_cmd = cli.add_subcommand("summarize", "Render one summary per corpus window");
  sum_cmd->add_option("--corpus", sum_args.corpus, "Corpus file (JSON Lines)")->required();
  sum_cmd->add_option("--layout", sum_args.layout, "Home layout JSON")->required();
  sum_cmd->add_option("--summary-config", sum_args.summary_config, "Summary config JSON (defaults if omitted)");
  sum_cmd->add_option("-o,--out", sum_args.out, "Summaries file (JSON Lines)")->required();

  std::string run_config;
  auto* run_cmd = cli.add_subcommand("run", "Execute the experiment described by a run config");
  run_cmd->add_option("config", run_config, "Run config JSON")->required();

  std::string validate_config;
  auto* val_cmd = cli.add_subcommand("validate-config", "Check a run config and print its digest");
  val_cmd->add_option("config", validate_config, "Run config JSON")->required();

  ExportArgs export_args;
  auto* exp_cmd = cli.add_subcommand("export-texts", "Write every text a run will embed, for building a cache");
  auto* exp_config = exp_cmd->add_option("--config", export_args.config, "Run config JSON");
  auto* exp_desc = exp_cmd->add_option("--descriptors", export_args.descriptors, "Descriptor file only");
  exp_config->excludes(exp_desc);
  exp_desc->excludes(exp_config);
  exp_cmd->add_option("-o,--out", export_args.out, "Output texts (JSON Lines of id, text)")->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return kExitConfig;
  }

  try {
    if (*ingest_cmd) cmd_ingest(ingest_args);
    if (*sum_cmd) cmd_summarize(sum_args);
    if (*run_cmd) cmd_run(run_config);
    if (*val_cmd) cmd_validate(validate_config);
    if (*exp_cmd) {
      if (export_args.config.empty() && export_args.descriptors.empty()) {
        throw ConfigError("export-texts needs --config or --descriptors");
      }
      cmd_export(export_args);
    }
  } catch (const embedding::CacheMissError& e) {
    std::cerr << "error: " << e.what() << "\n";
    const auto& missing = e.missing();
    for (std::size_t i = 0; i < std::min(kMaxListedMisses, missing.size()); ++i) {
      std::cerr << "  missing " << missing[i].hex() << "\n";
    }
    if (missing.size() > kMaxListedMisses) std::cerr << "  ... and " << missing.size() - kMaxListedMisses << " more\n";
    std::cerr << "re-run the embedding bridge on `zshar export-texts` output to fill the cache\n";
    return kExitProvider;
  } catch (const ProviderError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitProvider;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
