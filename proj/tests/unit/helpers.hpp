#ifndef QGEN_TEST_HELPERS_HPP
#define QGEN_TEST_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "qgen/annotate.hpp"
#include "qgen/lexicon.hpp"
#include "qgen/pattern.hpp"
#include "qgen/rules.hpp"

namespace qgen::test {

inline std::string fixture(const std::string& name) { return std::string(QGEN_FIXTURE_DIR) + "/" + name; }
inline std::string data_file(const std::string& name) { return std::string(QGEN_SOURCE_DATA_DIR) + "/" + name; }

/// Built-in annotators over the bundled data tables.
inline const Toolkit& builtin() {
  static const Toolkit toolkit = make_toolkit();
  return toolkit;
}

/// Built-in annotators with the worked-example fixture served first.
inline const Toolkit& worked() {
  static const Toolkit toolkit = [] {
    ProviderConfig config;
    config.fixture_paths = {fixture("worked_example.tsv")};
    return make_toolkit(config);
  }();
  return toolkit;
}

inline AnnotatedSentence annotated(const std::string& text, const Toolkit& toolkit = builtin(),
                                   std::string id = "t") {
  return annotate(text, toolkit.providers, std::move(id));
}

inline CompositePattern cp_of(const std::string& text, const Toolkit& toolkit = builtin()) {
  return create_cp(annotated(text, toolkit));
}

inline RuleStore worked_store() {
  return train(load_training_pairs(fixture("worked_example_pairs.jsonl")), worked().providers,
               *worked().morphology);
}

// Random composite patterns over a small label alphabet, so that collisions
// and partial matches are frequent.
class PatternFactory {
 public:
  explicit PatternFactory(std::uint64_t seed) : rng_(seed) {}

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& rng() { return rng_; }

  AnnotatedSentence sentence(std::size_t min_len = 3, std::size_t max_len = 8) {
    static const std::vector<std::string> pos = {"DT", "NN", "NNP", "VBZ", "VBD", "IN", "JJ", "NNS"};
    static const std::vector<std::string> words = {"king", "city", "river", "of", "the", "be", "come", "in"};
    static const std::vector<std::string> ner = {"person", "location", "organization"};
    static const std::vector<std::string> gkg = {"person", "country", "city"};
    static const std::vector<std::string> sst = {"role", "place", "country"};
    AnnotatedSentence s;
    s.source_id = "r" + std::to_string(counter_++);
    const std::size_t n = uniform(min_len, max_len);
    for (auto& row : s.layers) row.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& w = words[uniform(0, words.size() - 1)];
      s.tokens.push_back(Token{w, i, 0});
      s.layer(LayerId::Lemma).push_back(LabelSet(w));
      s.layer(LayerId::Pos).push_back(LabelSet(pos[uniform(0, pos.size() - 1)]));
      auto sparse = [&](const std::vector<std::string>& labels) {
        LabelSet set;
        if (chance(0.35)) set.insert(labels[uniform(0, labels.size() - 1)]);
        if (chance(0.08)) set.insert(labels[uniform(0, labels.size() - 1)]);
        return set;
      };
      s.layer(LayerId::Ner).push_back(sparse(ner));
      s.layer(LayerId::Gkg).push_back(sparse(gkg));
      s.layer(LayerId::Viaf).push_back(chance(0.1) ? LabelSet("viaf") : LabelSet());
      s.layer(LayerId::Sst).push_back(sparse(sst));
    }
    derive_pos_simple(s);
    layout_offsets(s);
    return s;
  }

 private:
  std::mt19937_64 rng_;
  std::size_t counter_ = 0;
};

}  // namespace qgen::test

#endif
