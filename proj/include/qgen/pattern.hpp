// Composite patterns, layered similarity and the two-level pattern hierarchy.

#ifndef QGEN_PATTERN_HPP
#define QGEN_PATTERN_HPP

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qgen/annotate.hpp"

namespace qgen {

/// The label matrix of one sentence: one row per layer, one column per token.
struct CompositePattern {
  std::size_t token_count = 0;
  LayerTable cells;
  std::vector<std::string> surface;

  const LayerRow& row(LayerId layer) const { return cells[layer_index(layer)]; }

  friend bool operator==(const CompositePattern&, const CompositePattern&) = default;
};

CompositePattern create_cp(const AnnotatedSentence& sentence);

/// Canonical key of one layer: labels joined by spaces, multi-values by "|", empty as "_".
std::string pattern_key(const CompositePattern& cp, LayerId layer);
std::string row_key(const LayerRow& row);

struct LayerMatch {
  std::size_t matched = 0;
  std::size_t comparable = 0;

  friend bool operator==(const LayerMatch&, const LayerMatch&) = default;
};

/// Per-layer agreement between two patterns.
///
/// Patterns with the same POS-simple row are compared position by position:
/// a position is comparable when either side carries a label (always, for the
/// dense layers) and matched when the label sets intersect. Otherwise the
/// labelled cells of each side are matched as a longest common subsequence
/// and the comparable count is the larger number of labelled cells.
/// Lemma comparison ignores case.
LayerMatch layer_match(const CompositePattern& a, const CompositePattern& b, LayerId layer);

struct SimilarityBreakdown {
  std::array<LayerMatch, kLayerCount> per_layer{};
  std::size_t matched_total = 0;
  std::size_t comparable_total = 0;
  double score = 0.0;

  const LayerMatch& layer(LayerId id) const { return per_layer[layer_index(id)]; }
};

SimilarityBreakdown similarity(const CompositePattern& a, const CompositePattern& b);

struct LookupResult {
  RuleId rule_id = 0;
  SimilarityBreakdown match;
};

/// POS-simple key -> POS key -> rule ids. Readers may run concurrently; inserts
/// must be serialized by the owner.
class PatternHierarchy {
 public:
  struct Entry {
    RuleId rule_id;
    std::shared_ptr<const CompositePattern> pattern;
  };
  struct Leaf {
    std::string pos_key;
    std::vector<Entry> entries;
  };
  struct Root {
    std::string key;
    LayerRow pos_simple;
    std::map<std::string, Leaf> children;
  };

  /// Returns false (and warns) when the rule id is already stored under the same POS key.
  bool insert(std::shared_ptr<const CompositePattern> cp, RuleId rule_id);
  bool erase(RuleId rule_id);

  /// Rules ranked by similarity to `cp` (score descending, then rule id).
  /// The exact POS-simple root is scored first; other roots are visited in
  /// order of POS-simple agreement while an upper bound on their similarity
  /// can still place them in the result.
  std::vector<LookupResult> lookup(const CompositePattern& cp, double min_similarity,
                                   std::size_t max_results) const;

  const std::map<std::string, Root>& roots() const { return roots_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  /// Upper bound on similarity() for any pattern whose POS-simple row yields
  /// `pos_simple` agreement with the query in subsequence mode.
  static double similarity_bound(const LayerMatch& pos_simple);

 private:
  std::map<std::string, Root> roots_;
  std::size_t size_ = 0;
};

}  // namespace qgen

#endif
