#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "zshar/classify/anchors.hpp"
#include "zshar/classify/classifier.hpp"
#include "zshar/core/digest.hpp"
#include "zshar/core/layout.hpp"
#include "zshar/core/types.hpp"
#include "zshar/embedding/provider.hpp"
#include "zshar/evaluate/metrics.hpp"
#include "zshar/textgen/descriptors.hpp"
#include "zshar/textgen/summary_config.hpp"

namespace zshar::evaluate {

// Everything a run needs besides the windows. References must outlive the run.
struct ExperimentContext {
  const HomeLayout& layout;
  const textgen::SummaryConfig& summary_cfg;
  const textgen::DescriptorRegistry& descriptors;
  const embedding::EmbeddingProvider& provider;
  classify::Metric metric = classify::Metric::cosine;
  RunMetadata meta;  // dataset and digests; provider/metric are filled per run
  std::size_t threads = 1;
};

enum class WindowText { summary, raw_events };
enum class AnchorText { descriptor, label_name };

struct ZeroShotResult {
  EvaluationReport report;
  classify::AnchorSet anchors;
  std::vector<classify::Prediction> predictions;  // corpus order
};

// Throws DataError on an empty corpus, an invalid window, or a window with no
// ground truth; ConfigError when a ground-truth label has no descriptor.
// Both checks run before anything is embedded.
void check_corpus(const std::vector<ActivityWindow>& windows,
                  const textgen::DescriptorRegistry& descriptors);

// Summaries (or raw renderings) for every window, corpus order.
std::vector<std::string> window_texts(const ExperimentContext& ctx,
                                      const std::vector<ActivityWindow>& windows,
                                      WindowText mode = WindowText::summary);

// summarize -> embed -> classify -> compute_metrics. Anchor and window texts
// go to the provider as one batch so a cache reports every miss at once.
ZeroShotResult run_zero_shot(const ExperimentContext& ctx, const std::vector<ActivityWindow>& windows,
                             WindowText window_mode = WindowText::summary,
                             AnchorText anchor_mode = AnchorText::descriptor);

struct AblationCell {
  std::string key;        // proposed, no_summary, no_descriptor, alt_encoder, l2_metric
  std::string row_label;  // human-readable table row
  std::optional<EvaluationReport> report;
  std::string unavailable_reason;  // set when report is empty
};

// `alt_provider` may be null; that cell is then reported unavailable, as it
// is when the alternative provider misses texts.
std::vector<AblationCell> run_ablation(const ExperimentContext& ctx,
                                       const std::vector<ActivityWindow>& windows,
                                       const embedding::EmbeddingProvider* alt_provider,
                                       std::string alt_unavailable_reason = "no alternative encoder configured");

struct SupportSplit {
  std::vector<ActivityWindow> support;
  std::vector<ActivityWindow> evaluation;
};

// Per class, the earliest `support_per_class` windows (by start, then id) go
// to support; corpus order is kept inside each side.
SupportSplit split_chronological(const std::vector<ActivityWindow>& windows, std::size_t support_per_class);

struct FewShotParams {
  std::vector<std::size_t> shots;
  std::vector<std::uint64_t> seeds;
  bool exemplars_only = false;  // drop descriptor anchors
};

struct FewShotRun {
  std::size_t shots_per_class = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> exemplar_ids;
  EvaluationReport report;
};

struct FewShotAggregate {
  std::size_t shots_per_class = 0;
  std::size_t runs = 0;
  double mean_accuracy = 0.0;
  double mean_f1_weighted = 0.0;
  std::optional<double> variance_f1_weighted;  // sample variance, needs >= 2 runs
};

struct FewShotResult {
  std::vector<FewShotRun> runs;  // shots-major, then seeds, as given
  std::vector<FewShotAggregate> aggregates;
};

// Uniform index in [0, bound) from a 64-bit engine, identical on every platform.
std::size_t uniform_index(std::uint64_t bound, std::mt19937_64& rng);

// Indices of `s` distinct items out of n (all of them when n <= s), ascending.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t s, std::mt19937_64& rng);

// Shots come only from `split.support`; every report covers `split.evaluation`.
// Report seeds are the run seeds. Throws DataError when the support split is
// empty and some s > 0, ConfigError for exemplars_only with s = 0.
FewShotResult run_few_shot(const ExperimentContext& ctx, const SupportSplit& split,
                           const FewShotParams& params);

std::vector<FewShotAggregate> aggregate_few_shot(const std::vector<FewShotRun>& runs);

// Serves texts embedded up front by prime(); anything else goes to `inner`.
class MemoProvider final : public embedding::EmbeddingProvider {
 public:
  explicit MemoProvider(const embedding::EmbeddingProvider& inner) : inner_(inner) {}

  // Not thread-safe; call before sharing.
  std::vector<embedding::Embedding> prime(const std::vector<std::string>& texts);

  std::vector<embedding::Embedding> embed_batch(const std::vector<std::string>& texts) const override;
  std::size_t dim() const override { return inner_.dim(); }
  const std::string& model_name() const override { return inner_.model_name(); }
  std::string backend() const override { return inner_.backend(); }

 private:
  const embedding::EmbeddingProvider& inner_;
  std::unordered_map<Digest, embedding::Embedding, DigestHash> memo_;
};

}  // namespace zshar::evaluate
