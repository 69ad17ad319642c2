// Built-in offline annotation providers.
//
// LexiconTagger fills Lemma and Pos from a closed-class word list, the
// morphology table and a handful of orthographic heuristics. Gazetteer fills
// the semantic layers (Ner, Gkg, Viaf, Sst) by longest phrase match.

#ifndef QGEN_LEXICON_HPP
#define QGEN_LEXICON_HPP

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qgen/annotate.hpp"
#include "qgen/morphology.hpp"

namespace qgen {

class LexiconTagger : public AnnotationProvider {
 public:
  struct Entry {
    std::string pos;
    std::string lemma;
  };

  LexiconTagger(std::shared_ptr<const MorphologyTable> morphology,
                std::map<std::string, Entry, std::less<>> lexicon);

  /// Lexicon TSV: WORD POS LEMMA (lemma "_" means the word itself).
  static std::map<std::string, Entry, std::less<>> load_lexicon(const std::string& path);

  std::string name() const override { return "lexicon"; }
  std::vector<ProvidedLayer> label(const std::vector<Token>& tokens) const override;

 private:
  std::shared_ptr<const MorphologyTable> morphology_;
  std::map<std::string, Entry, std::less<>> lexicon_;
};

class Gazetteer : public AnnotationProvider {
 public:
  struct Label {
    LayerId layer;
    std::string value;
  };

  Gazetteer() = default;
  /// Gazetteer TSV: PHRASE LAYER LABEL. Lowercase phrases match case-insensitively.
  static Gazetteer load(const std::string& path);
  static Gazetteer parse(std::string_view contents, std::string_view origin = "<memory>");

  void add(std::string_view phrase, LayerId layer, std::string label);
  std::string name() const override { return "gazetteer"; }
  std::vector<ProvidedLayer> label(const std::vector<Token>& tokens) const override;
  std::size_t size() const { return phrases_.size(); }

 private:
  struct Phrase {
    std::vector<std::string> words;
    bool case_insensitive = false;
    std::vector<Label> labels;
  };
  std::vector<Phrase> phrases_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_first_word_;  // lowercased
  std::size_t max_words_ = 0;
};

/// Location of the bundled data files (morphology.tsv, lexicon.tsv, gazetteer.tsv).
/// Honors the QGEN_DATA_DIR environment variable.
std::string default_data_dir();

struct ProviderConfig {
  std::string data_dir;                 // empty -> default_data_dir()
  std::string morphology_path;          // extra user table merged over the bundled one
  std::vector<std::string> fixture_paths;  // annotation TSVs served before the built-ins
};

struct Toolkit {
  std::shared_ptr<const MorphologyTable> morphology;
  ProviderList providers;
};

Toolkit make_toolkit(const ProviderConfig& config = {});

}  // namespace qgen

#endif
