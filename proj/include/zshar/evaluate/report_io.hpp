#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "zshar/evaluate/experiments.hpp"

namespace zshar::evaluate {

// Shortest round-tripping decimal for a double.
std::string format_double(double v);

// One row per metric: "dataset,config,metric,value,run_config_digest".
std::string flat_metrics_header();
std::string flat_metrics_rows(const std::string& dataset, const std::string& config, const EvaluationReport& r);

// Table rows "dataset,config,row_label,accuracy,f1_weighted,f1_macro,status,run_config_digest".
// Unavailable cells leave the metric columns empty.
std::string ablation_table_csv(const std::string& dataset, const std::vector<AblationCell>& cells,
                               const std::string& run_config_digest);

nlohmann::json to_json(const AblationCell& cell);
nlohmann::json to_json(const FewShotRun& run);
nlohmann::json to_json(const FewShotAggregate& agg);

// Aligned plain-text table of (row, accuracy, F1-w, F1-m).
struct HeadlineRow {
  std::string name;
  const EvaluationReport* report = nullptr;  // null renders as unavailable
};
std::string headline_table(const std::vector<HeadlineRow>& rows);

// Writes to a temp sibling, then renames over `path`.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace zshar::evaluate
