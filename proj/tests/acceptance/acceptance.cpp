// One PASS/FAIL/SKIP line per acceptance criterion; exits non-zero on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <regex>
#include <sstream>

#include "hermetic.hpp"
#include "oracles.hpp"
#include "zshar/app/pipeline.hpp"
#include "zshar/classify/classifier.hpp"
#include "zshar/core/corpus_io.hpp"
#include "zshar/embedding/test_embedder.hpp"
#include "zshar/evaluate/experiments.hpp"
#include "zshar/ingest/segmenter.hpp"

using namespace zshar;
using nlohmann::json;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome pass(std::string d) { return {Status::pass, std::move(d)}; }
Outcome fail(std::string d) { return {Status::fail, std::move(d)}; }

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

embedding::Embedding random_unit(testkit::Gen& g, std::size_t dim) {
  std::vector<float> v(dim);
  for (auto& x : v) x = static_cast<float>(g.symmetric());
  embedding::normalize(v);
  return {std::move(v), Digest::of("")};
}

Outcome metric_oracle() {
  testkit::Gen g(1001);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::string> labels;
    const auto k = g.between(1, 10);
    for (std::int64_t i = 0; i < k; ++i) labels.push_back("C" + std::to_string(i));
    std::vector<evaluate::LabelPair> pairs;
    const auto n = g.between(1, 200);
    for (std::int64_t i = 0; i < n; ++i) pairs.emplace_back(g.pick(labels), g.pick(labels));
    const auto r = evaluate::compute_metrics(pairs, labels);
    const auto ref = testkit::reference_metrics(pairs, labels);
    worst = std::max({worst, std::abs(r.accuracy - ref.accuracy), std::abs(r.f1_weighted - ref.f1_weighted),
                      std::abs(r.f1_macro - ref.f1_macro)});
    for (const auto& c : r.per_class) worst = std::max(worst, std::abs(c.f1 - ref.f1.at(c.label)));
  }
  const auto d = fmt("1000 instances, max |diff| %.3g", worst);
  return worst <= 1e-9 ? pass(d) : fail(d);
}

Outcome cosine_l2_argmax() {
  testkit::Gen g(1002);
  int mismatches = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto dim = static_cast<std::size_t>(g.between(16, 768));
    const auto n = g.between(2, 20);
    std::vector<std::pair<std::string, embedding::Embedding>> descs;
    for (std::int64_t i = 0; i < n; ++i) descs.emplace_back("L" + std::to_string(i), random_unit(g, dim));
    const auto anchors = classify::AnchorSet::from_descriptors(descs);
    const auto q = random_unit(g, dim);
    if (classify::classify(q, anchors, classify::Metric::cosine).predicted_label !=
        classify::classify(q, anchors, classify::Metric::l2).predicted_label) {
      ++mismatches;
    }
  }
  const auto d = fmt("10000 instances, %d label mismatches", mismatches);
  return mismatches == 0 ? pass(d) : fail(d);
}

Outcome summary_golden() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto layout = testkit::fixture_layout();
  const auto cfg = textgen::SummaryConfig::load(testkit::fixture("summary_rules.json"));
  const auto cases = json::parse(testkit::slurp(testkit::fixture("golden_summaries.json")));
  const std::regex forbidden("[0-9<>]");
  std::size_t matched = 0, dirty = 0;
  std::string first_mismatch;
  for (const auto& c : cases) {
    const auto text = textgen::summarize(window_from_json(c["window"]), layout, cfg).text;
    if (text == c["summary"].get<std::string>()) {
      ++matched;
    } else if (first_mismatch.empty()) {
      first_mismatch = c["case"].get<std::string>();
    }
    if (std::regex_search(text, forbidden)) ++dirty;
  }
  // The same scan over random windows, including unknown sensors.
  testkit::Gen g(1003);
  const std::vector<std::string> ids{"M001", "M002", "M003", "M004", "M005", "M006", "M007",
                                     "D001", "D002", "T001", "X999"};
  for (int i = 0; i < 2000; ++i) {
    const auto w = testkit::random_window(g, ids, "r" + std::to_string(i), g.between(1, 30'000));
    if (std::regex_search(textgen::summarize(w, layout, cfg).text, forbidden)) ++dirty;
  }
  const double elapsed = seconds_since(t0);
  auto d = fmt("%zu/%zu golden windows byte-exact, %zu outputs with digits or placeholders, %.2f s", matched,
               cases.size(), dirty, elapsed);
  if (!first_mismatch.empty()) d += ", first mismatch: " + first_mismatch;
  return matched == cases.size() && cases.size() >= 12 && dirty == 0 && elapsed < 1.0 ? pass(d) : fail(d);
}

std::string artifact_bytes(const evaluate::ZeroShotResult& r) {
  std::string out = evaluate::to_json(r.report).dump(2) + evaluate::confusion_csv(r.report.confusion);
  for (const auto& p : r.predictions) out += classify::prediction_record(p, r.anchors).dump() + "\n";
  return out;
}

Outcome hermetic_end_to_end() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto h = testkit::make_hermetic();
  std::vector<std::string> runs;
  double accuracy = 0;
  for (std::size_t threads : {1, 4, 1}) {
    embedding::TestEmbedder provider(384);
    evaluate::ExperimentContext ctx{h.layout, h.cfg, h.descriptors, provider, classify::Metric::cosine, {}};
    ctx.meta.dataset = "hermetic";
    ctx.threads = threads;
    const auto r = evaluate::run_zero_shot(ctx, h.windows);
    accuracy = r.report.accuracy;
    runs.push_back(artifact_bytes(r));
  }
  const bool identical = runs[0] == runs[1] && runs[1] == runs[2];
  const double elapsed = seconds_since(t0);
  const auto d = fmt("accuracy %.4f, reruns %s, %.2f s", accuracy, identical ? "byte-identical" : "DIFFER", elapsed);
  return accuracy == 1.0 && identical && elapsed < 5.0 ? pass(d) : fail(d);
}

Outcome few_shot_identity() {
  const auto layout = testkit::fixture_layout();
  textgen::SummaryConfig cfg;
  cfg.validate();
  const textgen::DescriptorRegistry descriptors{{{"Cook", "Cooking takes minutes in the kitchen near the stove"},
                                                 {"Rest", "Resting takes hours in the living room on the couch"},
                                                 {"Sleep", "Sleeping takes hours in the bedroom near the bed"}}};
  const std::vector<std::pair<std::string, std::vector<std::string>>> sensors{
      {"Cook", {"M003", "D002", "T001"}}, {"Rest", {"M006", "M007"}}, {"Sleep", {"M001", "M002"}}};
  testkit::Gen g(1004);
  std::vector<ActivityWindow> windows;
  for (int k = 0; k < 10; ++k) {
    for (const auto& [label, ids] : sensors) {
      auto w = testkit::random_window(g, ids, "w" + std::to_string(windows.size()), 3600);
      w.ground_truth = label;
      windows.push_back(std::move(w));
    }
  }
  embedding::TestEmbedder provider(128);
  evaluate::ExperimentContext ctx{layout, cfg, descriptors, provider, classify::Metric::cosine, {}};
  ctx.meta.dataset = "synthetic";

  const auto split = evaluate::split_chronological(windows, 4);
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  const auto fs = evaluate::run_few_shot(ctx, split, {{0}, seeds});
  std::size_t identical = 0;
  for (const auto& run : fs.runs) {
    auto zctx = ctx;
    zctx.meta.seed = run.seed;
    const auto zs = evaluate::run_zero_shot(zctx, split.evaluation);
    if (evaluate::to_json(run.report).dump() == evaluate::to_json(zs.report).dump()) ++identical;
  }

  // Every evaluation window is also an exemplar, so each query meets itself.
  const evaluate::SupportSplit self{windows, windows};
  const auto all = evaluate::run_few_shot(ctx, self, {{10}, {7}});

  // Classifier level: random anchors, random exemplars, query = one exemplar.
  std::size_t hits = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    std::vector<std::pair<std::string, embedding::Embedding>> descs;
    const auto n = g.between(2, 12);
    std::vector<std::string> labels;
    for (std::int64_t i = 0; i < n; ++i) {
      labels.push_back("L" + std::to_string(i));
      descs.emplace_back(labels.back(), provider.embed_batch({"descriptor " + std::to_string(t) + "/" + labels.back()})[0]);
    }
    std::vector<classify::Exemplar> ex;
    const auto m = g.between(1, 30);
    for (std::int64_t i = 0; i < m; ++i) {
      const auto id = std::to_string(t) + "." + std::to_string(i);
      ex.push_back({id, "exemplar " + id, g.pick(labels)});
    }
    const auto anchors = classify::build_fewshot_anchors(classify::AnchorSet::from_descriptors(descs), ex, provider);
    const auto& chosen = g.pick(ex);
    const auto q = provider.embed_batch({chosen.text})[0];
    const auto metric = g.coin() ? classify::Metric::cosine : classify::Metric::l2;
    if (classify::classify(q, anchors, metric).predicted_label == chosen.label) ++hits;
  }
  const auto d = fmt("s=0 identical to zero-shot in %zu/%zu seeds; self-exemplar accuracy %.4f; exemplar queries %zu/%d",
                     identical, fs.runs.size(), all.runs[0].report.accuracy, hits, trials);
  return identical == seeds.size() && all.runs[0].report.accuracy == 1.0 && hits == static_cast<std::size_t>(trials)
             ? pass(d)
             : fail(d);
}

Outcome segmentation_conservation() {
  testkit::Gen g(1005);
  const std::vector<std::string> labels{"Sleep", "Eat", "Work", "Relax"};
  std::size_t events = 0, accounted = 0, disagreements = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<ingest::RawLogLine> lines;
    const auto n = g.between(0, 200);
    std::int64_t t = testkit::at("2011-01-01T00:00:00").micros();
    for (std::int64_t i = 0; i < n; ++i) {
      ingest::RawLogLine l;
      l.line_number = static_cast<std::size_t>(i + 1);
      // Occasional backwards steps mimic unsorted logs.
      t += (g.between(0, 20) - (g.coin() && g.coin() && g.coin() ? 25 : 0)) * kMicrosPerSecond;
      l.event = SensorEvent{Timestamp::from_micros(t), "M" + std::to_string(g.between(1, 9)), Modality::motion, "ON"};
      const auto roll = g.between(0, 11);
      if (roll == 0) l.annotations.push_back({g.pick(labels), ingest::Marker::begin});
      if (roll == 1) l.annotations.push_back({g.pick(labels), ingest::Marker::end});
      if (roll == 2) {
        const auto& lab = g.pick(labels);
        l.annotations = {{lab, ingest::Marker::begin}, {lab, ingest::Marker::end}};
      }
      lines.push_back(std::move(l));
    }
    const auto r = ingest::segment_by_annotations(lines);
    const auto o = testkit::segmentation_oracle(lines);
    events += lines.size();
    accounted += r.report.events_in_windows + r.report.events_in_orphan_spans + r.report.events_unannotated;
    if (!r.report.conserved() || r.report.events_in != lines.size() || r.report.windows_emitted != o.windows ||
        r.report.events_in_windows != o.in_windows || r.report.events_in_orphan_spans != o.orphan ||
        r.report.events_unannotated != o.unannotated) {
      ++disagreements;
    }
  }
  const auto d = fmt("2000 streams, %zu/%zu events accounted, %zu disagreements with the oracle", accounted, events,
                     disagreements);
  return events == accounted && disagreements == 0 ? pass(d) : fail(d);
}

// Published zero-shot numbers (accuracy, weighted F1, macro F1).
struct Published {
  const char* dataset;
  double acc, f1_w, f1_m;
};

std::filesystem::path run_config_for(const std::string& dataset) {
  std::string var = "ZSHAR_" + dataset + "_RUN";
  for (auto& c : var) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (const char* env = std::getenv(var.c_str())) return env;
  return testkit::configs_dir() / dataset / "ablation.json";
}

// Empty when the config's inputs and cache are all present.
std::string missing_inputs(const app::RunConfig& cfg) {
  std::vector<std::filesystem::path> needed;
  if (cfg.inputs) {
    for (const auto& f : cfg.inputs->files) needed.push_back(cfg.resolve(f));
  } else {
    needed.push_back(cfg.resolve(cfg.corpus));
  }
  const auto spec = cfg.provider_spec();
  if (spec.backend == embedding::Backend::cache) needed.push_back(spec.cache_path);
  for (const auto& p : needed) {
    if (!std::filesystem::exists(p)) return p.string();
  }
  return {};
}

Outcome published_numbers() {
  const Published table[] = {{"aruba", 0.71, 0.72, 0.48}, {"milan", 0.63, 0.66, 0.46}};
  std::vector<std::string> notes;
  bool failed = false, skipped = false;
  for (const auto& p : table) {
    const auto path = run_config_for(p.dataset);
    if (!std::filesystem::exists(path)) {
      skipped = true;
      notes.push_back(std::string(p.dataset) + ": no run config");
      continue;
    }
    const auto cfg = app::RunConfig::load(path);
    if (const auto missing = missing_inputs(cfg); !missing.empty()) {
      skipped = true;
      notes.push_back(std::string(p.dataset) + ": missing " + missing);
      continue;
    }
    std::ostringstream log;
    const auto out = app::execute_run(cfg, log);
    json proposed, no_summary;
    for (const auto& a : out.artifacts) {
      if (a.filename() == "report_proposed.json" || a.filename() == "report.json") proposed = json::parse(testkit::slurp(a));
      if (a.filename() == "report_no_summary.json") no_summary = json::parse(testkit::slurp(a));
    }
    if (proposed.is_null()) {
      failed = true;
      notes.push_back(std::string(p.dataset) + ": run config is neither zero-shot nor ablation");
      continue;
    }
    const double acc = proposed["accuracy"], f1w = proposed["f1_weighted"], f1m = proposed["f1_macro"];
    bool ok = std::abs(acc - p.acc) <= 0.05 && std::abs(f1w - p.f1_w) <= 0.05 && std::abs(f1m - p.f1_m) <= 0.05;
    auto note = fmt("%s: acc %.3f/%.2f f1-w %.3f/%.2f f1-m %.3f/%.2f", p.dataset, acc, p.acc, f1w, p.f1_w, f1m, p.f1_m);
    if (std::string(p.dataset) == "aruba") {
      if (no_summary.is_null()) {
        ok = false;
        note += ", w/o summary missing (needs an ablation run)";
      } else {
        const double ns = no_summary["accuracy"];
        ok = ok && ns < 0.25;
        note += fmt(", w/o summary acc %.3f (< 0.25)", ns);
      }
    }
    failed = failed || !ok;
    notes.push_back(note);
  }
  std::string d;
  for (const auto& n : notes) d += (d.empty() ? "" : "; ") + n;
  if (failed) return fail(d);
  if (skipped) return {Status::skip, "external data absent (" + d + ")"};
  return pass(d);
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"metric-oracle-equivalence", metric_oracle},
      {"cosine-l2-argmax-equivalence", cosine_l2_argmax},
      {"summary-golden-suite", summary_golden},
      {"hermetic-end-to-end", hermetic_end_to_end},
      {"few-shot-identity", few_shot_identity},
      {"segmentation-conservation", segmentation_conservation},
      {"published-numbers-reproduction", published_numbers},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
    std::printf("%s %-32s %s\n", tag, name, o.detail.c_str());
    if (o.status == Status::fail) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
