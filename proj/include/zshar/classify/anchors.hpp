#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "zshar/embedding/provider.hpp"

namespace zshar::classify {

enum class AnchorKind { descriptor, exemplar };

struct Anchor {
  std::string label;
  embedding::Embedding embedding;
  AnchorKind kind = AnchorKind::descriptor;
  std::string anchor_id;

  bool operator==(const Anchor&) const = default;
};

// Class anchors in canonical order: descriptor anchors sorted by label, then
// exemplar anchors in insertion order. Anchor order is the tie-break order.
class AnchorSet {
 public:
  // Active label set with no anchors yet (exemplar-only experiments).
  AnchorSet(std::vector<std::string> labels, std::size_t dim);

  // One descriptor anchor per label; label set = these labels.
  static AnchorSet from_descriptors(std::vector<std::pair<std::string, embedding::Embedding>> descriptors);

  // Throws ConfigError on an unknown label or duplicate anchor id,
  // DimensionMismatchError on a dim mismatch.
  void add_exemplar(std::string label, embedding::Embedding e, std::string anchor_id);

  const std::vector<Anchor>& anchors() const { return anchors_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return anchors_.size(); }
  bool empty() const { return anchors_.empty(); }

  // Labels in the active set that have no anchor.
  std::vector<std::string> uncovered_labels() const;

  bool operator==(const AnchorSet&) const = default;

 private:
  void push(Anchor a);

  std::vector<std::string> labels_;
  std::size_t dim_ = 0;
  std::vector<Anchor> anchors_;
  std::set<std::string> ids_;
};

struct Exemplar {
  std::string id;     // becomes anchor id "exemplar:<id>"
  std::string text;   // summary of the labelled window
  std::string label;
};

// base plus one exemplar anchor per entry, embedded with `provider`; base is untouched.
AnchorSet build_fewshot_anchors(const AnchorSet& base, const std::vector<Exemplar>& exemplars,
                                const embedding::EmbeddingProvider& provider);

}  // namespace zshar::classify
