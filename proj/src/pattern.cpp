#include "qgen/pattern.hpp"

#include <algorithm>

namespace qgen {

CompositePattern create_cp(const AnnotatedSentence& sentence) {
  sentence.validate();
  CompositePattern cp;
  cp.token_count = sentence.size();
  cp.cells = sentence.layers;
  cp.surface = sentence.surface();
  return cp;
}

std::string row_key(const LayerRow& row) {
  std::string key;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) key += ' ';
    key += row[i].to_string();
  }
  return key;
}

std::string pattern_key(const CompositePattern& cp, LayerId layer) { return row_key(cp.row(layer)); }

namespace {

// Longest common subsequence of the labelled cells of two rows.
LayerMatch subsequence_match(const LayerRow& a, const LayerRow& b, bool case_insensitive) {
  std::vector<const LabelSet*> xs, ys;
  for (const auto& c : a)
    if (!c.empty()) xs.push_back(&c);
  for (const auto& c : b)
    if (!c.empty()) ys.push_back(&c);
  LayerMatch m;
  m.comparable = std::max(xs.size(), ys.size());
  if (xs.empty() || ys.empty()) return m;

  std::vector<std::size_t> prev(ys.size() + 1, 0), cur(ys.size() + 1, 0);
  for (std::size_t i = 1; i <= xs.size(); ++i) {
    for (std::size_t j = 1; j <= ys.size(); ++j) {
      cur[j] = xs[i - 1]->intersects(*ys[j - 1], case_insensitive) ? prev[j - 1] + 1
                                                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  m.matched = prev[ys.size()];
  return m;
}

LayerMatch positional_match(const LayerRow& a, const LayerRow& b, bool case_insensitive) {
  LayerMatch m;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].empty() && b[i].empty()) continue;
    ++m.comparable;
    if (a[i].intersects(b[i], case_insensitive)) ++m.matched;
  }
  return m;
}

}  // namespace

LayerMatch layer_match(const CompositePattern& a, const CompositePattern& b, LayerId layer) {
  const bool ci = layer == LayerId::Lemma;
  if (a.row(LayerId::PosSimple) == b.row(LayerId::PosSimple))
    return positional_match(a.row(layer), b.row(layer), ci);
  return subsequence_match(a.row(layer), b.row(layer), ci);
}

SimilarityBreakdown similarity(const CompositePattern& a, const CompositePattern& b) {
  SimilarityBreakdown s;
  for (LayerId layer : kAllLayers) {
    auto m = layer_match(a, b, layer);
    s.per_layer[layer_index(layer)] = m;
    s.matched_total += m.matched;
    s.comparable_total += m.comparable;
  }
  if (s.comparable_total > 0)
    s.score = static_cast<double>(s.matched_total) / static_cast<double>(s.comparable_total);
  return s;
}

// ---------------------------------------------------------------------------

bool PatternHierarchy::insert(std::shared_ptr<const CompositePattern> cp, RuleId rule_id) {
  const std::string root_key = pattern_key(*cp, LayerId::PosSimple);
  const std::string pos_key = pattern_key(*cp, LayerId::Pos);
  auto& root = roots_[root_key];
  if (root.key.empty()) {
    root.key = root_key;
    root.pos_simple = cp->row(LayerId::PosSimple);
  }
  auto& leaf = root.children[pos_key];
  leaf.pos_key = pos_key;
  for (const auto& e : leaf.entries) {
    if (e.rule_id == rule_id) {
      warn("rule " + std::to_string(rule_id) + " already indexed under " + pos_key);
      return false;
    }
  }
  leaf.entries.push_back(Entry{rule_id, std::move(cp)});
  ++size_;
  return true;
}

bool PatternHierarchy::erase(RuleId rule_id) {
  for (auto root = roots_.begin(); root != roots_.end(); ++root) {
    for (auto leaf = root->second.children.begin(); leaf != root->second.children.end(); ++leaf) {
      auto& entries = leaf->second.entries;
      auto it = std::find_if(entries.begin(), entries.end(),
                             [&](const Entry& e) { return e.rule_id == rule_id; });
      if (it == entries.end()) continue;
      entries.erase(it);
      --size_;
      if (entries.empty()) root->second.children.erase(leaf);
      if (root->second.children.empty()) roots_.erase(root);
      return true;
    }
  }
  return false;
}

double PatternHierarchy::similarity_bound(const LayerMatch& pos_simple) {
  // In subsequence mode POS agreement never exceeds POS-simple agreement, the
  // lemma row can at best match everywhere, and each of the four sparse
  // layers adds at most as many comparable cells as the longer pattern has.
  if (pos_simple.comparable == 0) return 1.0;
  const double m = static_cast<double>(pos_simple.matched);
  const double c = static_cast<double>(pos_simple.comparable);
  return (2.0 * m + 5.0 * c) / (7.0 * c);
}

std::vector<LookupResult> PatternHierarchy::lookup(const CompositePattern& cp, double min_similarity,
                                                   std::size_t max_results) const {
  std::vector<LookupResult> results;
  if (roots_.empty() || max_results == 0) return results;

  auto better = [](const LookupResult& x, const LookupResult& y) {
    if (x.match.score != y.match.score) return x.match.score > y.match.score;
    return x.rule_id < y.rule_id;
  };
  auto score_root = [&](const Root& root) {
    for (const auto& [key, leaf] : root.children) {
      for (const auto& e : leaf.entries) {
        auto s = similarity(cp, *e.pattern);
        if (s.score >= min_similarity) results.push_back({e.rule_id, s});
      }
    }
    std::sort(results.begin(), results.end(), better);
    if (results.size() > max_results) results.resize(max_results);
  };
  auto threshold = [&] {
    double t = min_similarity;
    if (results.size() >= max_results) t = std::max(t, results.back().match.score);
    return t;
  };

  const std::string own_key = pattern_key(cp, LayerId::PosSimple);
  auto own = roots_.find(own_key);
  if (own != roots_.end()) score_root(own->second);

  // Remaining roots, most promising first.
  std::vector<std::pair<double, const Root*>> others;
  const auto& query_row = cp.row(LayerId::PosSimple);
  for (const auto& [key, root] : roots_) {
    if (key == own_key) continue;
    auto m = subsequence_match(query_row, root.pos_simple, false);
    others.emplace_back(similarity_bound(m), &root);
  }
  std::stable_sort(others.begin(), others.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  constexpr double kSlack = 1e-12;
  for (const auto& [bound, root] : others) {
    if (bound + kSlack < threshold()) break;
    score_root(*root);
  }
  return results;
}

}  // namespace qgen
