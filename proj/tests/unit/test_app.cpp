#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "hermetic.hpp"
#include "zshar/app/pipeline.hpp"
#include "zshar/app/run_config.hpp"
#include "zshar/core/corpus_io.hpp"
#include "zshar/embedding/cache.hpp"

using namespace zshar;
using namespace zshar::app;
using nlohmann::json;

namespace {

const char* kDescriptors = R"({
  "Bed_to_Toilet": "Bed to Toilet takes seconds or minutes when a person walks from the bed to the toilet",
  "Meal_Preparation": "Meal Preparation takes minutes in the kitchen near the stove",
  "Sleep": "Sleep takes hours in the bedroom",
  "Watch_TV": "Watch TV takes minutes or hours in the living room with the television on"
})";

// A working directory holding a hermetic corpus, descriptors and a run config.
struct Workspace {
  testkit::TempDir dir;
  std::vector<ActivityWindow> windows = testkit::hermetic_windows();

  Workspace() {
    std::ostringstream corpus;
    write_corpus(corpus, windows);
    testkit::spit(dir / "corpus.jsonl", corpus.str());
    testkit::spit(dir / "descriptors.json", kDescriptors);
  }

  json config(json provider = {{"backend", "test"}, {"dim", 32}}) const {
    return {{"dataset", "hermetic"},
            {"corpus", "corpus.jsonl"},
            {"layout", testkit::fixture("home_layout.json").string()},
            {"summary_config", testkit::fixture("summary_rules.json").string()},
            {"descriptors", "descriptors.json"},
            {"provider", provider},
            {"output_dir", "out"}};
  }

  RunConfig load(const json& j) const {
    testkit::spit(dir / "run.json", j.dump(2));
    return RunConfig::load(dir / "run.json");
  }
};

// Stand-in for the bridge: descriptors get a one-hot class vector, window
// texts get their true class vector plus a small window-specific offset.
void build_perfect_cache(const Workspace& ws, const RunConfig& cfg, const std::filesystem::path& path,
                         std::size_t dim = 8) {
  const std::vector<std::string> labels{"Bed_to_Toilet", "Meal_Preparation", "Sleep", "Watch_TV"};
  std::map<std::string, std::size_t> class_of;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    class_of["descriptor:" + labels[i]] = i;
    class_of["label:" + labels[i]] = i;
  }
  for (const auto& w : ws.windows) {
    const auto k = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), *w.ground_truth) - labels.begin());
    class_of["summary:" + w.window_id] = k;
    class_of["raw:" + w.window_id] = k;
  }
  std::vector<std::pair<std::string, embedding::Embedding>> entries;
  std::size_t n = 0;
  for (const auto& rec : collect_texts(cfg)) {
    std::vector<float> v(dim, 0.0f);
    v[class_of.at(rec.id)] = 1.0f;
    v[4 + n++ % 4] = 0.1f;
    entries.emplace_back(rec.text, embedding::Embedding{v, Digest::of(rec.text)});
  }
  embedding::cache_write(path, "all-distilroberta-v1", static_cast<std::uint32_t>(dim), entries);
}

std::map<std::string, std::string> read_artifacts(const std::vector<std::filesystem::path>& paths) {
  std::map<std::string, std::string> out;
  for (const auto& p : paths) out[p.filename().string()] = testkit::slurp(p);
  return out;
}

}  // namespace

TEST_CASE("run config parse and canonical round trip") {
  Workspace ws;
  auto j = ws.config();
  j["experiment"] = {{"kind", "few-shot"}, {"shots", {0, 1}}};
  j["seeds"] = {3, 1};
  j["metric"] = "l2";
  const auto cfg = ws.load(j);
  CHECK(cfg.dataset == "hermetic");
  CHECK(cfg.metric == classify::Metric::l2);
  CHECK(cfg.experiment.kind == ExperimentKind::few_shot);
  CHECK(cfg.experiment.shots == std::vector<std::size_t>{0, 1});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 1});
  CHECK(cfg.base_dir == ws.dir.path());
  CHECK(cfg.resolve("corpus.jsonl") == ws.dir / "corpus.jsonl");
  CHECK(cfg.resolve("/abs/x") == "/abs/x");

  const auto again = RunConfig::from_json(cfg.to_json(), cfg.base_dir);
  CHECK(again.digest() == cfg.digest());
  CHECK(again.to_json() == cfg.to_json());
  CHECK(cfg.digest().size() == 64);

  auto other = j;
  other["seeds"] = {3, 2};
  CHECK(ws.load(other).digest() != cfg.digest());
}

TEST_CASE("run config structural errors") {
  Workspace ws;
  auto expect_config_error = [&](json j) { CHECK_THROWS_AS(RunConfig::from_json(j, ws.dir.path()), ConfigError); };
  auto j = ws.config();
  j["colour"] = "blue";
  expect_config_error(j);
  j = ws.config();
  j.erase("dataset");
  expect_config_error(j);
  j = ws.config();
  j.erase("corpus");
  expect_config_error(j);
  j = ws.config();
  j["inputs"] = {{"adapter", "casas"}, {"files", {"x.txt"}}};
  expect_config_error(j);
  j = ws.config();
  j["experiment"] = {{"kind", "few-shot"}, {"shots", {1}}};
  expect_config_error(j);
  j = ws.config();
  j["experiment"] = {{"kind", "sideways"}};
  expect_config_error(j);
  j = ws.config();
  j["experiment"] = {{"kind", "ablation"}, {"bogus", 1}};
  expect_config_error(j);
  j = ws.config();
  j["metric"] = "dot";
  expect_config_error(j);
  j = ws.config({{"backend", "carrier-pigeon"}});
  expect_config_error(j);
  CHECK_THROWS_AS(RunConfig::load(ws.dir / "missing.json"), ConfigError);
  testkit::spit(ws.dir / "broken.json", "{");
  CHECK_THROWS_AS(RunConfig::load(ws.dir / "broken.json"), ConfigError);
}

TEST_CASE("run config validation checks referenced files") {
  Workspace ws;
  CHECK_NOTHROW(ws.load(ws.config()).validate());
  CHECK(std::filesystem::is_directory(ws.dir / "out"));

  auto j = ws.config();
  j["corpus"] = "nope.jsonl";
  CHECK_THROWS_WITH_AS(ws.load(j).validate(), doctest::Contains("nope.jsonl"), ConfigError);

  testkit::spit(ws.dir / "bad_desc.json", R"({"A": "One. Two."})");
  j = ws.config();
  j["descriptors"] = "bad_desc.json";
  CHECK_THROWS_AS(ws.load(j).validate(), ConfigError);

  j = ws.config({{"backend", "cache"}, {"cache_path", "absent.bin"}, {"dim", 8}});
  CHECK_THROWS_WITH_AS(ws.load(j).validate(), doctest::Contains("absent.bin"), ConfigError);

  j = ws.config({{"backend", "http"}, {"dim", 8}});
  CHECK_THROWS_AS(ws.load(j).validate(), ConfigError);
}

TEST_CASE("EMBED_ENDPOINT overrides the configured endpoint") {
  Workspace ws;
  const auto cfg = ws.load(ws.config({{"backend", "http"}, {"dim", 8}, {"endpoint", "http://a:1/e"}}));
  ::unsetenv("EMBED_ENDPOINT");
  CHECK(cfg.provider_spec().endpoint == "http://a:1/e");
  ::setenv("EMBED_ENDPOINT", "http://b:2/e", 1);
  CHECK(cfg.provider_spec().endpoint == "http://b:2/e");
  CHECK(cfg.to_json()["provider"]["endpoint"] == "http://a:1/e");
  ::unsetenv("EMBED_ENDPOINT");
}

TEST_CASE("ingest_files prefixes ids per file and names the file on errors") {
  const auto layout = testkit::fixture_layout();
  const auto one = ingest_files(Adapter::casas, {testkit::fixture("casas_small.txt")}, nullptr, &layout, false);
  CHECK(one.windows.size() == 3);
  CHECK(one.windows[0].window_id == "w000001");

  const auto two = ingest_files(Adapter::casas, {testkit::fixture("casas_small.txt"), testkit::fixture("casas_small.txt")},
                                nullptr, &layout, false);
  CHECK(two.windows.size() == 6);
  CHECK(two.windows[0].window_id == "f0-w000001");
  CHECK(two.windows[3].window_id == "f1-w000001");
  CHECK(two.report.events_in == 34);
  CHECK(two.report.lines_skipped == 2);
  CHECK(two.report.skipped[0].reason.find("casas_small.txt") != std::string::npos);
  CHECK(two.report.conserved());

  CHECK_THROWS_WITH_AS(ingest_files(Adapter::casas, {testkit::fixture("casas_small.txt")}, nullptr, &layout, true),
                       doctest::Contains("casas_small.txt:13"), DataError);
  CHECK_THROWS_AS(ingest_files(Adapter::casas, {"/nonexistent/log.txt"}, nullptr, nullptr, false), DataError);
}

TEST_CASE("collect_texts lists every text a run embeds") {
  Workspace ws;
  const auto zs = collect_texts(ws.load(ws.config()));
  CHECK(zs.size() == 8);
  CHECK(zs[0].id == "descriptor:Bed_to_Toilet");
  CHECK(zs[4].id == "summary:h1");

  auto j = ws.config();
  j["experiment"] = {{"kind", "ablation"}};
  const auto ab = collect_texts(ws.load(j));
  std::set<std::string> ids;
  for (const auto& r : ab) ids.insert(r.id);
  CHECK(ids.contains("label:Watch_TV"));
  CHECK(ids.contains("raw:h3"));
  CHECK(ab.size() == 16);
}

TEST_CASE("zero-shot run writes a complete, reproducible artifact set") {
  Workspace ws;
  auto j = ws.config();
  j["threads"] = 3;
  const auto cfg = ws.load(j);
  std::ostringstream log;
  const auto first = execute_run(cfg, log);
  const auto a = read_artifacts(first.artifacts);
  for (const char* name : {"report.json", "report_confusion.csv", "report_confusion.txt", "predictions.jsonl",
                           "summaries.jsonl", "metrics.csv", "manifest.json"}) {
    CAPTURE(name);
    CHECK(a.contains(name));
  }
  CHECK(first.artifacts.back().filename() == "manifest.json");
  const auto report = json::parse(a.at("report.json"));
  CHECK(report["meta"]["run_config_digest"] == cfg.digest());
  CHECK(report["meta"]["dataset"] == "hermetic");
  CHECK(report["total"] == 4);

  const auto manifest = json::parse(a.at("manifest.json"));
  CHECK(manifest["run_config"] == cfg.to_json());
  for (const auto& entry : manifest["artifacts"]) {
    CHECK(entry["sha256"] == sha256_hex(a.at(entry["file"].get<std::string>())));
  }

  std::istringstream summaries(a.at("summaries.jsonl"));
  std::string line;
  std::size_t n = 0;
  while (std::getline(summaries, line)) {
    const auto rec = json::parse(line);
    CHECK(rec.size() == 2);
    CHECK(rec["window_id"] == ws.windows[n].window_id);
    ++n;
  }
  CHECK(n == 4);
  CHECK(a.at("metrics.csv").rfind("dataset,config,metric,value,run_config_digest\n", 0) == 0);

  const auto second = execute_run(cfg, log);
  CHECK(read_artifacts(second.artifacts) == a);
  CHECK(first.headline == second.headline);
}

TEST_CASE("cache-backed run through the bridge interface") {
  Workspace ws;
  auto j = ws.config({{"backend", "cache"}, {"cache_path", "emb.bin"}, {"dim", 8}});
  j["experiment"] = {{"kind", "ablation"}};
  const auto cfg = ws.load(j);
  build_perfect_cache(ws, cfg, ws.dir / "emb.bin");
  std::ostringstream log;
  const auto out = execute_run(cfg, log);
  CHECK(log.str().find("deviate from unit norm") != std::string::npos);
  const auto a = read_artifacts(out.artifacts);
  const auto proposed = json::parse(a.at("report_proposed.json"));
  CHECK(proposed["accuracy"] == 1.0);
  CHECK(proposed["meta"]["provider"] == "cache:all-distilroberta-v1");
  CHECK(json::parse(a.at("report_l2_metric.json"))["accuracy"] == 1.0);
  CHECK_FALSE(a.contains("report_alt_encoder.json"));
  const auto ablation = json::parse(a.at("ablation.json"));
  CHECK(ablation.size() == 5);
  CHECK(a.at("ablation.csv").find("alt_encoder,w paraphrase-distilroberta-base-v2,,,,unavailable") != std::string::npos);
  CHECK(out.headline.find("n/a") != std::string::npos);

  // A cache that lacks texts reports every miss at once.
  embedding::cache_write(ws.dir / "emb.bin", "all-distilroberta-v1", 8, {});
  try {
    execute_run(cfg, log);
    FAIL("expected a cache miss");
  } catch (const embedding::CacheMissError& e) {
    CHECK(e.missing().size() == 8);
  }
}

TEST_CASE("few-shot run needs a support split") {
  Workspace ws;
  auto j = ws.config();
  j["experiment"] = {{"kind", "few-shot"}, {"shots", {0, 1}}, {"support_per_class", 0}};
  j["seeds"] = {1};
  std::ostringstream log;
  CHECK_THROWS_WITH_AS(execute_run(ws.load(j), log), doctest::Contains("support split is empty"), DataError);
}
