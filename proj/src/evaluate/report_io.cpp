#include "zshar/evaluate/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "zshar/core/errors.hpp"

namespace zshar::evaluate {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string flat_metrics_header() { return "dataset,config,metric,value,run_config_digest\n"; }

std::string flat_metrics_rows(const std::string& dataset, const std::string& config, const EvaluationReport& r) {
  std::string out;
  auto row = [&](const std::string& metric, double v) {
    out += csv_field(dataset) + "," + csv_field(config) + "," + csv_field(metric) + "," + format_double(v) + "," +
           r.meta.run_config_digest + "\n";
  };
  row("accuracy", r.accuracy);
  row("f1_weighted", r.f1_weighted);
  row("f1_macro", r.f1_macro);
  for (const auto& c : r.per_class) row("f1[" + c.label + "]", c.f1);
  return out;
}

std::string ablation_table_csv(const std::string& dataset, const std::vector<AblationCell>& cells,
                               const std::string& run_config_digest) {
  std::string out = "dataset,config,row_label,accuracy,f1_weighted,f1_macro,status,run_config_digest\n";
  for (const auto& c : cells) {
    out += csv_field(dataset) + "," + c.key + "," + csv_field(c.row_label) + ",";
    if (c.report) {
      out += format_double(c.report->accuracy) + "," + format_double(c.report->f1_weighted) + "," +
             format_double(c.report->f1_macro) + ",ok,";
    } else {
      out += ",,,unavailable,";
    }
    out += run_config_digest + "\n";
  }
  return out;
}

nlohmann::json to_json(const AblationCell& cell) {
  nlohmann::json j = {{"config", cell.key}, {"row_label", cell.row_label}};
  if (cell.report) {
    j["status"] = "ok";
    j["report"] = to_json(*cell.report);
  } else {
    j["status"] = "unavailable";
    j["reason"] = cell.unavailable_reason;
  }
  return j;
}

nlohmann::json to_json(const FewShotRun& run) {
  return {{"shots_per_class", run.shots_per_class},
          {"seed", run.seed},
          {"exemplar_ids", run.exemplar_ids},
          {"report", to_json(run.report)}};
}

nlohmann::json to_json(const FewShotAggregate& agg) {
  nlohmann::json j = {{"shots_per_class", agg.shots_per_class},
                      {"runs", agg.runs},
                      {"mean_accuracy", agg.mean_accuracy},
                      {"mean_f1_weighted", agg.mean_f1_weighted}};
  j["variance_f1_weighted"] = agg.variance_f1_weighted ? nlohmann::json(*agg.variance_f1_weighted) : nlohmann::json();
  return j;
}

std::string headline_table(const std::vector<HeadlineRow>& rows) {
  std::size_t w = 6;
  for (const auto& r : rows) w = std::max(w, r.name.size());
  auto line = [&](const std::string& name, const std::string& a, const std::string& b, const std::string& c) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%-*s  %8s  %8s  %8s\n", static_cast<int>(w), name.c_str(), a.c_str(),
                  b.c_str(), c.c_str());
    return std::string(buf);
  };
  auto fixed = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };
  std::string out = line("Method", "Acc.", "F1-w", "F1-m");
  for (const auto& r : rows) {
    out += r.report ? line(r.name, fixed(r.report->accuracy), fixed(r.report->f1_weighted), fixed(r.report->f1_macro))
                    : line(r.name, "n/a", "n/a", "n/a");
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
    if (!out.flush()) throw ConfigError("write failed: " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace zshar::evaluate
