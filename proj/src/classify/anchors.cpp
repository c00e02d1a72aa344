#include "zshar/classify/anchors.hpp"

#include <algorithm>

#include "zshar/core/types.hpp"

namespace zshar::classify {

AnchorSet::AnchorSet(std::vector<std::string> labels, std::size_t dim)
    : labels_(canonical_label_order(std::move(labels))), dim_(dim) {
  if (dim_ == 0) throw ConfigError("anchor set: dim must be positive");
}

AnchorSet AnchorSet::from_descriptors(
    std::vector<std::pair<std::string, embedding::Embedding>> descriptors) {
  if (descriptors.empty()) throw ConfigError("anchor set: no descriptors");
  std::vector<std::string> labels;
  for (const auto& [label, e] : descriptors) labels.push_back(label);
  AnchorSet set(std::move(labels), descriptors.front().second.dim());
  std::sort(descriptors.begin(), descriptors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [label, e] : descriptors) {
    set.push(Anchor{label, std::move(e), AnchorKind::descriptor, "descriptor:" + label});
  }
  return set;
}

void AnchorSet::push(Anchor a) {
  if (a.embedding.dim() != dim_) {
    throw embedding::DimensionMismatchError(dim_, a.embedding.dim(), "anchor " + a.anchor_id);
  }
  if (!std::binary_search(labels_.begin(), labels_.end(), a.label)) {
    throw ConfigError("anchor " + a.anchor_id + ": unknown label `" + a.label + "`");
  }
  if (!ids_.insert(a.anchor_id).second) throw ConfigError("duplicate anchor id `" + a.anchor_id + "`");
  anchors_.push_back(std::move(a));
}

void AnchorSet::add_exemplar(std::string label, embedding::Embedding e, std::string anchor_id) {
  push(Anchor{std::move(label), std::move(e), AnchorKind::exemplar, std::move(anchor_id)});
}

std::vector<std::string> AnchorSet::uncovered_labels() const {
  std::set<std::string> covered;
  for (const auto& a : anchors_) covered.insert(a.label);
  std::vector<std::string> out;
  for (const auto& l : labels_) {
    if (!covered.contains(l)) out.push_back(l);
  }
  return out;
}

AnchorSet build_fewshot_anchors(const AnchorSet& base, const std::vector<Exemplar>& exemplars,
                                const embedding::EmbeddingProvider& provider) {
  AnchorSet out = base;
  if (exemplars.empty()) return out;
  for (const auto& ex : exemplars) {
    if (!std::binary_search(base.labels().begin(), base.labels().end(), ex.label)) {
      throw ConfigError("exemplar " + ex.id + ": unknown label `" + ex.label + "`");
    }
  }
  std::vector<std::string> texts;
  texts.reserve(exemplars.size());
  for (const auto& ex : exemplars) texts.push_back(ex.text);
  auto embeddings = provider.embed_batch(texts);
  for (std::size_t i = 0; i < exemplars.size(); ++i) {
    out.add_exemplar(exemplars[i].label, std::move(embeddings[i]), "exemplar:" + exemplars[i].id);
  }
  return out;
}

}  // namespace zshar::classify
