#include "zshar/app/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "zshar/core/digest.hpp"
#include "zshar/core/errors.hpp"
#include "zshar/core/layout.hpp"
#include "zshar/ingest/csv_adapter.hpp"
#include "zshar/textgen/descriptors.hpp"
#include "zshar/textgen/summary_config.hpp"

namespace zshar::app {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError(where + ": unknown key `" + key + "`");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": `" + key + "` has the wrong type");
  }
}

std::string need_string(const json& j, const char* key, const std::string& where) {
  auto s = get_or<std::string>(j, key, {}, where);
  if (s.empty()) throw ConfigError(where + ": missing `" + key + "`");
  return s;
}

void require_file(const std::filesystem::path& p, const std::string& what) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(p, ec)) throw ConfigError(what + " not found: " + p.string());
}

}  // namespace

std::string_view experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::zero_shot: return "zero-shot";
    case ExperimentKind::ablation: return "ablation";
    case ExperimentKind::few_shot: return "few-shot";
  }
  return "zero-shot";
}

RunConfig RunConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("run config: must be a JSON object");
  reject_unknown(j,
                 {"dataset", "corpus", "inputs", "layout", "summary_config", "descriptors", "provider", "metric",
                  "drop_labels", "experiment", "output_dir", "seeds", "threads"},
                 "run config");
  RunConfig c;
  c.base_dir = base_dir;
  const std::string where = "run config";
  c.dataset = need_string(j, "dataset", where);
  c.corpus = get_or<std::string>(j, "corpus", {}, where);
  if (auto it = j.find("inputs"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw ConfigError("run config: `inputs` must be an object");
    reject_unknown(*it, {"adapter", "files", "csv_mapping", "strict"}, "inputs");
    InputSpec in;
    const auto adapter = get_or<std::string>(*it, "adapter", "casas", "inputs");
    if (adapter == "casas") {
      in.adapter = Adapter::casas;
    } else if (adapter == "csv") {
      in.adapter = Adapter::csv;
    } else {
      throw ConfigError("inputs: unknown adapter `" + adapter + "`");
    }
    in.files = get_or<std::vector<std::string>>(*it, "files", {}, "inputs");
    if (in.files.empty()) throw ConfigError("inputs: `files` is empty");
    in.csv_mapping = get_or<std::string>(*it, "csv_mapping", {}, "inputs");
    if (in.adapter == Adapter::csv && in.csv_mapping.empty()) throw ConfigError("inputs: csv adapter needs `csv_mapping`");
    in.strict = get_or<bool>(*it, "strict", false, "inputs");
    c.inputs = std::move(in);
  }
  if (c.corpus.empty() == !c.inputs.has_value()) {
    throw ConfigError("run config: give exactly one of `corpus` and `inputs`");
  }
  c.layout = need_string(j, "layout", where);
  c.summary_config = get_or<std::string>(j, "summary_config", {}, where);
  c.descriptors = need_string(j, "descriptors", where);
  auto provider = j.find("provider");
  if (provider == j.end() || !provider->is_object()) throw ConfigError("run config: missing `provider` object");
  c.provider = *provider;
  embedding::ProviderSpec::from_json(c.provider, base_dir);  // structural check only
  c.metric = classify::metric_from_name(get_or<std::string>(j, "metric", "cosine", where));
  c.drop_labels = get_or<std::vector<std::string>>(j, "drop_labels", {}, where);
  c.output_dir = get_or<std::string>(j, "output_dir", "out", where);
  c.seeds = get_or<std::vector<std::uint64_t>>(j, "seeds", {}, where);
  c.threads = get_or<std::size_t>(j, "threads", 1, where);

  if (auto it = j.find("experiment"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw ConfigError("run config: `experiment` must be an object");
    reject_unknown(*it, {"kind", "alt_provider", "shots", "support_per_class", "exemplars_only"}, "experiment");
    const auto kind = get_or<std::string>(*it, "kind", "zero-shot", "experiment");
    if (kind == "zero-shot") {
      c.experiment.kind = ExperimentKind::zero_shot;
    } else if (kind == "ablation") {
      c.experiment.kind = ExperimentKind::ablation;
    } else if (kind == "few-shot") {
      c.experiment.kind = ExperimentKind::few_shot;
    } else {
      throw ConfigError("experiment: unknown kind `" + kind + "`");
    }
    if (auto alt = it->find("alt_provider"); alt != it->end() && !alt->is_null()) {
      embedding::ProviderSpec::from_json(*alt, base_dir);
      c.experiment.alt_provider = *alt;
    }
    c.experiment.shots = get_or<std::vector<std::size_t>>(*it, "shots", {}, "experiment");
    if (auto sp = it->find("support_per_class"); sp != it->end() && !sp->is_null()) {
      c.experiment.support_per_class = get_or<std::size_t>(*it, "support_per_class", 0, "experiment");
    }
    c.experiment.exemplars_only = get_or<bool>(*it, "exemplars_only", false, "experiment");
  }
  if (c.experiment.kind == ExperimentKind::few_shot) {
    if (c.experiment.shots.empty()) throw ConfigError("experiment: few-shot needs `shots`");
    if (c.seeds.empty()) throw ConfigError("run config: few-shot needs `seeds`");
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open run config: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

json RunConfig::to_json() const {
  json j = json::object();
  j["dataset"] = dataset;
  if (!corpus.empty()) j["corpus"] = corpus;
  if (inputs) {
    j["inputs"] = {{"adapter", inputs->adapter == Adapter::casas ? "casas" : "csv"},
                   {"files", inputs->files},
                   {"strict", inputs->strict}};
    if (!inputs->csv_mapping.empty()) j["inputs"]["csv_mapping"] = inputs->csv_mapping;
  }
  j["layout"] = layout;
  if (!summary_config.empty()) j["summary_config"] = summary_config;
  j["descriptors"] = descriptors;
  j["provider"] = provider;
  j["metric"] = std::string(classify::metric_name(metric));
  j["drop_labels"] = drop_labels;
  json e = {{"kind", std::string(experiment_name(experiment.kind))}};
  if (experiment.alt_provider) e["alt_provider"] = *experiment.alt_provider;
  if (!experiment.shots.empty()) e["shots"] = experiment.shots;
  if (experiment.support_per_class) e["support_per_class"] = *experiment.support_per_class;
  if (experiment.exemplars_only) e["exemplars_only"] = true;
  j["experiment"] = std::move(e);
  j["output_dir"] = output_dir;
  j["seeds"] = seeds;
  j["threads"] = threads;
  return j;
}

std::string RunConfig::digest() const { return sha256_hex(to_json().dump()); }

std::filesystem::path RunConfig::resolve(const std::string& p) const {
  std::filesystem::path path(p);
  return (path.is_relative() && !base_dir.empty() ? base_dir / path : path).lexically_normal();
}

embedding::ProviderSpec apply_endpoint_override(embedding::ProviderSpec spec) {
  if (const char* env = std::getenv("EMBED_ENDPOINT"); env != nullptr && *env != '\0') spec.endpoint = env;
  return spec;
}

embedding::ProviderSpec RunConfig::provider_spec() const {
  return apply_endpoint_override(embedding::ProviderSpec::from_json(provider, base_dir));
}

std::optional<embedding::ProviderSpec> RunConfig::alt_provider_spec() const {
  if (!experiment.alt_provider) return std::nullopt;
  return apply_endpoint_override(embedding::ProviderSpec::from_json(*experiment.alt_provider, base_dir));
}

void RunConfig::validate() const {
  if (!corpus.empty()) require_file(resolve(corpus), "corpus");
  if (inputs) {
    for (const auto& f : inputs->files) require_file(resolve(f), "input file");
    if (inputs->adapter == Adapter::csv) {
      require_file(resolve(inputs->csv_mapping), "csv mapping");
      ingest::CsvMapping::load(resolve(inputs->csv_mapping));
    }
  }
  require_file(resolve(layout), "layout");
  HomeLayout::load(resolve(layout));
  if (!summary_config.empty()) {
    require_file(resolve(summary_config), "summary config");
    textgen::SummaryConfig::load(resolve(summary_config));
  }
  require_file(resolve(descriptors), "descriptors");
  textgen::DescriptorRegistry::load(resolve(descriptors));

  const auto spec = provider_spec();
  if (spec.backend == embedding::Backend::cache) require_file(spec.cache_path, "embedding cache");
  if (spec.backend == embedding::Backend::http && spec.endpoint.empty()) {
    throw ConfigError("provider: http backend needs `endpoint` (or EMBED_ENDPOINT)");
  }

  const auto out = resolve(output_dir);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory " + out.string() + ": " + ec.message());
  const auto probe = out / ".write-probe";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("output directory not writable: " + out.string());
  }
  std::filesystem::remove(probe, ec);
}

}  // namespace zshar::app
