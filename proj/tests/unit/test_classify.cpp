#include <cmath>

#include "doctest.h"
#include "testkit.hpp"
#include "zshar/classify/classifier.hpp"
#include "zshar/embedding/test_embedder.hpp"

using namespace zshar;
using namespace zshar::classify;
using embedding::Embedding;

namespace {

Prediction predict(const Embedding& q, const AnchorSet& anchors, Metric m, std::string id = {}) {
  return zshar::classify::classify(q, anchors, m, std::move(id));
}

Embedding unit(std::vector<float> v, const std::string& tag = "") {
  embedding::normalize(v);
  return Embedding{std::move(v), Digest::of(tag)};
}

Embedding random_unit(testkit::Gen& g, std::size_t dim) {
  std::vector<float> v(dim);
  for (auto& x : v) x = static_cast<float>(g.symmetric());
  return unit(std::move(v));
}

}  // namespace

TEST_CASE("similarity functions") {
  const std::vector<float> a{1, 0}, b{0, 1}, c{-2, 0};
  CHECK(cosine(a, b) == doctest::Approx(0.0));
  CHECK(cosine(a, c) == doctest::Approx(-1.0));
  CHECK(cosine(a, a) == 1.0);
  CHECK(l2_distance(a, b) == doctest::Approx(std::sqrt(2.0)));
  CHECK(l2_distance(a, c) == doctest::Approx(3.0));
  const std::vector<float> three{1, 2, 3}, zero{0, 0};
  CHECK_THROWS(cosine(a, three));
  CHECK_THROWS(cosine(a, zero));
  CHECK(metric_from_name("cosine") == Metric::cosine);
  CHECK(metric_from_name("l2") == Metric::l2);
  CHECK(metric_name(Metric::l2) == "l2");
  CHECK_THROWS_AS(metric_from_name("dot"), ConfigError);
  CHECK(better(Metric::cosine, 0.9, 0.8));
  CHECK(better(Metric::l2, 0.1, 0.2));
  CHECK_FALSE(better(Metric::cosine, 0.8, 0.8));
}

TEST_CASE("classify picks the nearest descriptor") {
  auto set = AnchorSet::from_descriptors({{"Sleep", unit({0, 1, 0})}, {"Eat", unit({1, 0, 0})}, {"Work", unit({0, 0, 1})}});
  CHECK(set.labels() == std::vector<std::string>{"Eat", "Sleep", "Work"});
  CHECK(set.anchors()[0].anchor_id == "descriptor:Eat");
  const auto p = predict(unit({0.2f, 0.9f, 0.1f}), set, Metric::cosine, "w1");
  CHECK(p.predicted_label == "Sleep");
  CHECK(p.winning_anchor == 1);
  CHECK(p.winning_anchor_id == "descriptor:Sleep");
  CHECK(p.scores.size() == 3);
  CHECK(predict(unit({0.2f, 0.9f, 0.1f}), set, Metric::l2).predicted_label == "Sleep");

  const auto rec = prediction_record(p, set);
  CHECK(rec["window_id"] == "w1");
  CHECK(rec["metric"] == "cosine");
  REQUIRE(rec["top"].size() == 3);
  CHECK(rec["top"][0]["label"] == "Sleep");
  CHECK(rec["top"][1]["label"] == "Eat");
  CHECK(top_anchors(p, set, 10).size() == 3);
}

TEST_CASE("exact ties go to the earlier anchor") {
  auto set = AnchorSet::from_descriptors({{"B", unit({1, 1})}, {"A", unit({1, -1})}});
  CHECK(predict(unit({1, 0}), set, Metric::cosine).predicted_label == "A");
  CHECK(predict(unit({1, 0}), set, Metric::l2).predicted_label == "A");
  set.add_exemplar("B", unit({1, 0}), "exemplar:x");
  set.add_exemplar("A", unit({1, 0}), "exemplar:y");
  CHECK(predict(unit({1, 0}), set, Metric::cosine).winning_anchor_id == "exemplar:x");
}

TEST_CASE("anchor set errors") {
  CHECK_THROWS_AS(predict(unit({1, 0}), AnchorSet({"A"}, 2), Metric::cosine), ConfigError);
  CHECK_THROWS_AS(AnchorSet::from_descriptors({}), ConfigError);
  auto set = AnchorSet::from_descriptors({{"A", unit({1, 0})}});
  CHECK_THROWS_AS(set.add_exemplar("Z", unit({1, 0}), "e"), ConfigError);
  CHECK_THROWS_AS(set.add_exemplar("A", unit({1, 0, 0}), "e"), embedding::DimensionMismatchError);
  set.add_exemplar("A", unit({1, 0}), "e");
  CHECK_THROWS_AS(set.add_exemplar("A", unit({0, 1}), "e"), ConfigError);
  AnchorSet bare({"B", "A"}, 2);
  CHECK(bare.uncovered_labels() == std::vector<std::string>{"A", "B"});
  bare.add_exemplar("B", unit({1, 0}), "e");
  CHECK(bare.uncovered_labels() == std::vector<std::string>{"A"});
}

TEST_CASE("few-shot anchors are the union of descriptors and exemplars") {
  embedding::TestEmbedder provider(8);
  std::vector<std::pair<std::string, Embedding>> descs;
  for (const auto* l : {"E", "D", "C", "B", "A"}) descs.emplace_back(l, provider.embed_batch({l})[0]);
  const auto base = AnchorSet::from_descriptors(descs);
  std::vector<Exemplar> ex;
  for (const auto* l : {"A", "B", "C", "D", "E"}) {
    for (int k = 0; k < 3; ++k) {
      ex.push_back({std::string(l) + std::to_string(k), std::string("summary ") + l + std::to_string(k), l});
    }
  }
  const auto fs = build_fewshot_anchors(base, ex, provider);
  CHECK(fs.size() == 20);
  CHECK(base.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(fs.anchors()[i] == base.anchors()[i]);
  CHECK(fs.anchors()[5].anchor_id == "exemplar:A0");
  CHECK(fs.anchors()[5].kind == AnchorKind::exemplar);
  CHECK(fs.anchors()[19].anchor_id == "exemplar:E2");
  CHECK(build_fewshot_anchors(base, {}, provider) == base);
  CHECK_THROWS_AS(build_fewshot_anchors(base, {{"z", "t", "Q"}}, provider), ConfigError);

  // A query equal to an exemplar text retrieves that exemplar.
  const auto q = provider.embed_batch({"summary C1"})[0];
  const auto p = predict(q, fs, Metric::cosine);
  CHECK(p.winning_anchor_id == "exemplar:C1");
  CHECK(p.predicted_label == "C");
  CHECK(p.scores[p.winning_anchor] == doctest::Approx(1.0));
}

TEST_CASE("cosine and L2 agree on unit vectors") {
  testkit::Gen g(31);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto dim = static_cast<std::size_t>(g.between(2, 24));
    const auto n = g.between(1, 12);
    std::vector<std::pair<std::string, Embedding>> descs;
    for (std::int64_t i = 0; i < n; ++i) descs.emplace_back("L" + std::to_string(i), random_unit(g, dim));
    const auto set = AnchorSet::from_descriptors(descs);
    const auto q = random_unit(g, dim);
    const auto pc = predict(q, set, Metric::cosine);
    const auto pl = predict(q, set, Metric::l2);
    // Skip near-ties where float rounding may legitimately split the metrics.
    auto sorted = pc.scores;
    std::sort(sorted.rbegin(), sorted.rend());
    if (sorted.size() > 1 && sorted[0] - sorted[1] < 1e-9) continue;
    ++checked;
    CHECK(pc.winning_anchor == pl.winning_anchor);
    for (std::size_t i = 0; i < pc.scores.size(); ++i) {
      CHECK(pl.scores[i] * pl.scores[i] == doctest::Approx(2.0 - 2.0 * pc.scores[i]).epsilon(1e-5));
    }
  }
  CHECK(checked > 1900);
}

TEST_CASE("winner is invariant under anchor permutation and query scaling") {
  testkit::Gen g(32);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t dim = 10;
    std::vector<std::pair<std::string, Embedding>> descs;
    for (int i = 0; i < 6; ++i) descs.emplace_back("L" + std::to_string(i), random_unit(g, dim));
    auto shuffled = descs;
    std::shuffle(shuffled.begin(), shuffled.end(), g.engine());
    const auto q = random_unit(g, dim);
    auto scaled = q;
    const auto k = static_cast<float>(0.5 + 10.0 * g.unit());
    for (auto& x : scaled.values) x *= k;
    const auto a = predict(q, AnchorSet::from_descriptors(descs), Metric::cosine);
    const auto b = predict(q, AnchorSet::from_descriptors(shuffled), Metric::cosine);
    const auto c = predict(scaled, AnchorSet::from_descriptors(descs), Metric::cosine);
    CHECK(a.predicted_label == b.predicted_label);
    CHECK(a.predicted_label == c.predicted_label);
  }
}
