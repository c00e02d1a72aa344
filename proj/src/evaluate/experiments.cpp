#include "zshar/evaluate/experiments.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "zshar/core/errors.hpp"
#include "zshar/evaluate/parallel.hpp"
#include "zshar/textgen/summarizer.hpp"

namespace zshar::evaluate {
namespace {

using classify::AnchorSet;
using embedding::Embedding;

std::vector<std::string> anchor_texts(const textgen::DescriptorRegistry& descriptors, AnchorText mode) {
  std::vector<std::string> out;
  for (const auto& label : descriptors.labels()) {
    out.push_back(mode == AnchorText::descriptor ? descriptors.at(label).text : display_name(label));
  }
  return out;
}

AnchorSet descriptor_anchors(const std::vector<std::string>& labels, std::vector<Embedding> embeddings) {
  std::vector<std::pair<std::string, Embedding>> pairs;
  pairs.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) pairs.emplace_back(labels[i], std::move(embeddings[i]));
  return AnchorSet::from_descriptors(std::move(pairs));
}

ZeroShotResult score(const ExperimentContext& ctx, const embedding::EmbeddingProvider& provider,
                     classify::Metric metric, const std::vector<ActivityWindow>& windows,
                     const std::vector<Embedding>& queries, AnchorSet anchors,
                     std::optional<std::uint64_t> seed) {
  std::vector<classify::Prediction> predictions(windows.size());
  parallel_for(windows.size(), ctx.threads, [&](std::size_t i) {
    predictions[i] = classify::classify(queries[i], anchors, metric, windows[i].window_id);
  });

  std::vector<LabelPair> pairs;
  std::set<std::string> seen;
  pairs.reserve(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    pairs.emplace_back(*windows[i].ground_truth, predictions[i].predicted_label);
    seen.insert(pairs.back().first);
    seen.insert(pairs.back().second);
  }
  // Metrics are over the labels that occur in truth or predictions.
  ZeroShotResult out{compute_metrics(pairs, {seen.begin(), seen.end()}), std::move(anchors),
                     std::move(predictions)};
  out.report.meta = ctx.meta;
  out.report.meta.provider = provider.describe();
  out.report.meta.metric = std::string(classify::metric_name(metric));
  out.report.meta.seed = seed;
  return out;
}

}  // namespace

void check_corpus(const std::vector<ActivityWindow>& windows, const textgen::DescriptorRegistry& descriptors) {
  if (windows.empty()) throw DataError("corpus is empty");
  std::set<std::string> missing;
  for (const auto& w : windows) {
    auto violations = validate_window(w);
    if (!violations.empty()) {
      throw DataError("invalid window `" + w.window_id + "`: " + violations.front().code + " (" +
                      violations.front().detail + ")");
    }
    if (!w.ground_truth) throw DataError("window `" + w.window_id + "` has no ground truth");
    if (!descriptors.contains(*w.ground_truth)) missing.insert(*w.ground_truth);
  }
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    throw ConfigError("no descriptor for label(s): " + names);
  }
}

std::vector<std::string> window_texts(const ExperimentContext& ctx, const std::vector<ActivityWindow>& windows,
                                      WindowText mode) {
  std::vector<std::string> out(windows.size());
  parallel_for(windows.size(), ctx.threads, [&](std::size_t i) {
    out[i] = mode == WindowText::summary ? textgen::summarize(windows[i], ctx.layout, ctx.summary_cfg).text
                                         : textgen::raw_event_rendering(windows[i]);
  });
  return out;
}

ZeroShotResult run_zero_shot(const ExperimentContext& ctx, const std::vector<ActivityWindow>& windows,
                             WindowText window_mode, AnchorText anchor_mode) {
  check_corpus(windows, ctx.descriptors);
  const auto labels = ctx.descriptors.labels();
  auto texts = anchor_texts(ctx.descriptors, anchor_mode);
  auto wtexts = window_texts(ctx, windows, window_mode);
  texts.insert(texts.end(), std::make_move_iterator(wtexts.begin()), std::make_move_iterator(wtexts.end()));

  auto embeddings = ctx.provider.embed_batch(texts);
  std::vector<Embedding> queries(std::make_move_iterator(embeddings.begin() + labels.size()),
                                 std::make_move_iterator(embeddings.end()));
  embeddings.resize(labels.size());
  return score(ctx, ctx.provider, ctx.metric, windows, queries, descriptor_anchors(labels, std::move(embeddings)),
               ctx.meta.seed);
}

std::vector<AblationCell> run_ablation(const ExperimentContext& ctx, const std::vector<ActivityWindow>& windows,
                                       const embedding::EmbeddingProvider* alt_provider,
                                       std::string alt_unavailable_reason) {
  std::vector<AblationCell> cells;
  cells.push_back({"proposed", "Ours (proposed)", run_zero_shot(ctx, windows).report, {}});
  cells.push_back({"no_summary", "w/o summary", run_zero_shot(ctx, windows, WindowText::raw_events).report, {}});
  cells.push_back({"no_descriptor", "w/o activity descriptors",
                   run_zero_shot(ctx, windows, WindowText::summary, AnchorText::label_name).report, {}});

  AblationCell alt{"alt_encoder", "w " + std::string(embedding::kParaphraseModel), std::nullopt, {}};
  if (alt_provider == nullptr) {
    alt.unavailable_reason = std::move(alt_unavailable_reason);
  } else {
    ExperimentContext alt_ctx{ctx.layout, ctx.summary_cfg, ctx.descriptors, *alt_provider,
                              ctx.metric, ctx.meta,        ctx.threads};
    try {
      alt.report = run_zero_shot(alt_ctx, windows).report;
    } catch (const embedding::CacheMissError& e) {
      alt.unavailable_reason = e.what();
    }
  }
  cells.push_back(std::move(alt));

  ExperimentContext l2_ctx{ctx.layout, ctx.summary_cfg, ctx.descriptors, ctx.provider,
                           classify::Metric::l2, ctx.meta, ctx.threads};
  cells.push_back({"l2_metric", "w L2-Norm", run_zero_shot(l2_ctx, windows).report, {}});
  return cells;
}

SupportSplit split_chronological(const std::vector<ActivityWindow>& windows, std::size_t support_per_class) {
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (!windows[i].ground_truth) throw DataError("window `" + windows[i].window_id + "` has no ground truth");
    by_class[*windows[i].ground_truth].push_back(i);
  }
  std::vector<bool> in_support(windows.size(), false);
  for (auto& [label, idx] : by_class) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const auto& wa = windows[a];
      const auto& wb = windows[b];
      if (wa.start() != wb.start()) return wa.start() < wb.start();
      return wa.window_id < wb.window_id;
    });
    for (std::size_t k = 0; k < std::min(support_per_class, idx.size()); ++k) in_support[idx[k]] = true;
  }
  SupportSplit out;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    (in_support[i] ? out.support : out.evaluation).push_back(windows[i]);
  }
  return out;
}

std::size_t uniform_index(std::uint64_t bound, std::mt19937_64& rng) {
  if (bound == 0) throw std::invalid_argument("uniform_index: bound is 0");
  // Reject the low values that would bias r % bound.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return static_cast<std::size_t>(r % bound);
  }
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t s, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (s >= n) return idx;
  for (std::size_t i = 0; i < s; ++i) std::swap(idx[i], idx[i + uniform_index(n - i, rng)]);
  idx.resize(s);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<FewShotAggregate> aggregate_few_shot(const std::vector<FewShotRun>& runs) {
  std::vector<FewShotAggregate> out;
  std::vector<std::vector<const FewShotRun*>> groups;
  for (const auto& r : runs) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const FewShotAggregate& a) { return a.shots_per_class == r.shots_per_class; });
    if (it == out.end()) {
      out.push_back({r.shots_per_class, 0, 0.0, 0.0, std::nullopt});
      groups.emplace_back();
      it = out.end() - 1;
    }
    groups[static_cast<std::size_t>(it - out.begin())].push_back(&r);
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    const auto& members = groups[g];
    const auto n = static_cast<double>(members.size());
    double acc = 0.0, f1 = 0.0;
    for (const auto* r : members) {
      acc += r->report.accuracy;
      f1 += r->report.f1_weighted;
    }
    out[g].runs = members.size();
    out[g].mean_accuracy = acc / n;
    out[g].mean_f1_weighted = f1 / n;
    if (members.size() >= 2) {
      // Shifted by the first value so identical runs give exactly zero.
      const double shift = members.front()->report.f1_weighted;
      double sum = 0.0, sq = 0.0;
      for (const auto* r : members) {
        const double d = r->report.f1_weighted - shift;
        sum += d;
        sq += d * d;
      }
      out[g].variance_f1_weighted = std::max(0.0, (sq - sum * sum / n) / (n - 1));
    }
  }
  return out;
}

FewShotResult run_few_shot(const ExperimentContext& ctx, const SupportSplit& split, const FewShotParams& params) {
  if (params.shots.empty()) throw ConfigError("few-shot: no shot counts given");
  if (params.seeds.empty()) throw ConfigError("few-shot: no seeds given");
  const bool any_shots = std::any_of(params.shots.begin(), params.shots.end(), [](auto s) { return s > 0; });
  if (params.exemplars_only && !std::all_of(params.shots.begin(), params.shots.end(), [](auto s) { return s > 0; })) {
    throw ConfigError("few-shot: exemplars_only needs at least one shot per class");
  }
  check_corpus(split.evaluation, ctx.descriptors);
  if (any_shots && split.support.empty()) throw DataError("few-shot: support split is empty for every class");
  if (!split.support.empty()) check_corpus(split.support, ctx.descriptors);

  const auto labels = ctx.descriptors.labels();
  auto texts = anchor_texts(ctx.descriptors, AnchorText::descriptor);
  const auto eval_texts = window_texts(ctx, split.evaluation);
  const auto support_texts = window_texts(ctx, split.support);
  texts.insert(texts.end(), eval_texts.begin(), eval_texts.end());
  texts.insert(texts.end(), support_texts.begin(), support_texts.end());

  MemoProvider memo(ctx.provider);
  auto embeddings = memo.prime(texts);
  std::vector<Embedding> queries(embeddings.begin() + static_cast<std::ptrdiff_t>(labels.size()),
                                 embeddings.begin() + static_cast<std::ptrdiff_t>(labels.size() + eval_texts.size()));
  embeddings.resize(labels.size());
  const AnchorSet base = descriptor_anchors(labels, std::move(embeddings));
  const AnchorSet empty(labels, ctx.provider.dim());

  std::map<std::string, std::vector<std::size_t>> support_by_class;
  for (std::size_t i = 0; i < split.support.size(); ++i) {
    support_by_class[*split.support[i].ground_truth].push_back(i);
  }

  FewShotResult out;
  for (std::size_t s : params.shots) {
    for (std::uint64_t seed : params.seeds) {
      FewShotRun run;
      run.shots_per_class = s;
      run.seed = seed;
      if (s == 0) {
        run.report = score(ctx, ctx.provider, ctx.metric, split.evaluation, queries, base, seed).report;
      } else {
        std::mt19937_64 rng(seed);
        std::vector<classify::Exemplar> exemplars;
        for (const auto& [label, members] : support_by_class) {
          for (std::size_t k : sample_without_replacement(members.size(), s, rng)) {
            const std::size_t i = members[k];
            exemplars.push_back({split.support[i].window_id, support_texts[i], label});
            run.exemplar_ids.push_back(split.support[i].window_id);
          }
        }
        auto anchors = classify::build_fewshot_anchors(params.exemplars_only ? empty : base, exemplars, memo);
        run.report = score(ctx, ctx.provider, ctx.metric, split.evaluation, queries, std::move(anchors), seed).report;
      }
      out.runs.push_back(std::move(run));
    }
  }
  out.aggregates = aggregate_few_shot(out.runs);
  return out;
}

std::vector<Embedding> MemoProvider::prime(const std::vector<std::string>& texts) {
  auto embeddings = inner_.embed_batch(texts);
  for (std::size_t i = 0; i < texts.size(); ++i) memo_.emplace(Digest::of(texts[i]), embeddings[i]);
  return embeddings;
}

std::vector<Embedding> MemoProvider::embed_batch(const std::vector<std::string>& texts) const {
  std::vector<Embedding> out(texts.size());
  std::vector<std::string> rest;
  std::vector<std::size_t> rest_at;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (auto it = memo_.find(Digest::of(texts[i])); it != memo_.end()) {
      out[i] = it->second;
    } else {
      rest.push_back(texts[i]);
      rest_at.push_back(i);
    }
  }
  if (!rest.empty()) {
    auto fetched = inner_.embed_batch(rest);
    for (std::size_t k = 0; k < rest.size(); ++k) out[rest_at[k]] = std::move(fetched[k]);
  }
  return out;
}

}  // namespace zshar::evaluate
