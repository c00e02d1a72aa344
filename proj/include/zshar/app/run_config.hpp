#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "zshar/classify/similarity.hpp"
#include "zshar/embedding/provider.hpp"

namespace zshar::app {

enum class Adapter { casas, csv };
enum class ExperimentKind { zero_shot, ablation, few_shot };

std::string_view experiment_name(ExperimentKind k);

// Raw logs to segment on the fly, as an alternative to a prepared corpus.
struct InputSpec {
  Adapter adapter = Adapter::casas;
  std::vector<std::string> files;
  std::string csv_mapping;  // csv only
  bool strict = false;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::zero_shot;
  std::optional<nlohmann::json> alt_provider;  // ablation
  std::vector<std::size_t> shots;              // few-shot
  std::optional<std::size_t> support_per_class;  // few-shot, default max(shots)
  bool exemplars_only = false;                   // few-shot
};

// One reproducible run. Paths are stored as written and resolved against the
// directory of the config file; the digest covers the stored form, so moving
// a config together with its inputs keeps its digest.
struct RunConfig {
  std::string dataset;
  std::string corpus;                 // either this
  std::optional<InputSpec> inputs;    // or this
  std::string layout;
  std::string summary_config;         // empty = built-in defaults
  std::string descriptors;
  nlohmann::json provider = nlohmann::json::object();
  classify::Metric metric = classify::Metric::cosine;
  std::vector<std::string> drop_labels;
  ExperimentSpec experiment;
  std::string output_dir = "out";
  std::vector<std::uint64_t> seeds;
  std::size_t threads = 1;

  std::filesystem::path base_dir;  // not serialised

  // Throws ConfigError on structural problems (unknown keys included).
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  std::string digest() const;

  std::filesystem::path resolve(const std::string& p) const;
  // Provider spec with paths resolved and the EMBED_ENDPOINT override applied.
  embedding::ProviderSpec provider_spec() const;
  std::optional<embedding::ProviderSpec> alt_provider_spec() const;

  // Referenced files exist and parse, the output directory is writable.
  // Throws ConfigError naming the first problem.
  void validate() const;
};

// Returns `spec` with its endpoint replaced by $EMBED_ENDPOINT when set.
embedding::ProviderSpec apply_endpoint_override(embedding::ProviderSpec spec);

}  // namespace zshar::app
