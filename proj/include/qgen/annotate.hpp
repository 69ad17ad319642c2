// Sentence splitting, tokenization and layered token annotation.
//
// An AnnotatedSentence holds one label set per token for each of the seven
// annotation layers. Labels come from an ordered list of providers; the first
// provider that covers a layer for a sentence fills it. POS-simple is never
// provided directly, it is always derived from the POS layer.

#ifndef QGEN_ANNOTATE_HPP
#define QGEN_ANNOTATE_HPP

#include <array>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qgen/common.hpp"

namespace qgen {

enum class LayerId { Lemma = 0, Pos, PosSimple, Ner, Gkg, Viaf, Sst };

inline constexpr std::size_t kLayerCount = 7;
inline constexpr std::array<LayerId, kLayerCount> kAllLayers = {
    LayerId::Lemma, LayerId::Pos, LayerId::PosSimple, LayerId::Ner,
    LayerId::Gkg,   LayerId::Viaf, LayerId::Sst};

std::string_view layer_name(LayerId layer);
std::optional<LayerId> parse_layer(std::string_view name);

/// Lemma, Pos and PosSimple are populated on every token.
constexpr bool is_dense_layer(LayerId layer) {
  return layer == LayerId::Lemma || layer == LayerId::Pos || layer == LayerId::PosSimple;
}

constexpr std::size_t layer_index(LayerId layer) { return static_cast<std::size_t>(layer); }

/// A small sorted set of labels. Empty means "no label".
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::initializer_list<std::string> values);
  explicit LabelSet(std::string value);

  static LabelSet parse(std::string_view cell);  // "_" -> empty, "a|b" -> {a, b}

  void insert(std::string value);
  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }
  bool contains(std::string_view value) const;
  bool intersects(const LabelSet& other, bool case_insensitive = false) const;
  const std::vector<std::string>& values() const { return values_; }
  const std::string& first() const { return values_.front(); }

  std::string to_string() const;  // "_" when empty

  friend bool operator==(const LabelSet&, const LabelSet&) = default;
  friend auto operator<=>(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<std::string> values_;
};

struct Token {
  std::string text;
  std::size_t index = 0;
  std::size_t char_offset = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

using LayerRow = std::vector<LabelSet>;
using LayerTable = std::array<LayerRow, kLayerCount>;

struct AnnotatedSentence {
  std::string source_id;
  std::vector<Token> tokens;
  LayerTable layers;

  std::size_t size() const { return tokens.size(); }
  const LayerRow& layer(LayerId id) const { return layers[layer_index(id)]; }
  LayerRow& layer(LayerId id) { return layers[layer_index(id)]; }
  std::vector<std::string> surface() const;
  std::string text() const;  // detokenized

  /// Throws InputError describing the first broken invariant.
  void validate() const;

  friend bool operator==(const AnnotatedSentence&, const AnnotatedSentence&) = default;
};

/// Splits raw text into sentences at . ! ? followed by whitespace and a capital.
std::vector<std::string> split_sentences(std::string_view text);

/// Whitespace tokenization with terminal punctuation and possessive 's split off.
std::vector<Token> tokenize(std::string_view sentence);

/// Joins tokens back into text: no space before punctuation and clitics.
std::string detokenize(const std::vector<std::string>& tokens);
bool is_punctuation(std::string_view token);
/// Renumbers tokens and recomputes offsets from the detokenized layout.
void layout_offsets(AnnotatedSentence& sentence);

/// Many-to-one POS generalization (VBZ -> VB, NNP -> NN, WP -> WH, ...).
std::string simplify_pos(std::string_view pos_label);
LabelSet simplify_pos(const LabelSet& pos);
/// Fills the PosSimple layer from the Pos layer.
void derive_pos_simple(AnnotatedSentence& sentence);

/// Labels for one layer; nullopt marks a cell the provider failed to label.
struct ProvidedLayer {
  LayerId layer;
  std::vector<std::optional<LabelSet>> cells;
};

class AnnotationProvider {
 public:
  virtual ~AnnotationProvider() = default;
  virtual std::string name() const = 0;
  /// Returns the layers this provider can fill for `tokens`; an empty result
  /// means the provider does not cover this sentence at all.
  virtual std::vector<ProvidedLayer> label(const std::vector<Token>& tokens) const = 0;
};

using ProviderList = std::vector<std::shared_ptr<const AnnotationProvider>>;

AnnotatedSentence annotate(std::string_view sentence, const ProviderList& providers,
                           std::string source_id = {});

/// Serves annotations recorded in an annotation TSV file, keyed by token text.
class FixtureProvider : public AnnotationProvider {
 public:
  explicit FixtureProvider(const std::vector<AnnotatedSentence>& sentences);
  std::string name() const override { return "fixture"; }
  std::vector<ProvidedLayer> label(const std::vector<Token>& tokens) const override;
  std::size_t size() const { return by_text_.size(); }

 private:
  std::vector<std::pair<std::string, AnnotatedSentence>> by_text_;  // sorted by key
};

// Annotation TSV: "# id=<source_id>" header, then one token per line with
// INDEX TEXT LEMMA POS NER GKG VIAF SST, blocks separated by a blank line.
std::vector<AnnotatedSentence> parse_annotations(std::string_view contents,
                                                 std::string_view origin = "<memory>");
std::vector<AnnotatedSentence> load_annotations(const std::string& path);
std::string format_annotations(const std::vector<AnnotatedSentence>& sentences);
void save_annotations(const std::vector<AnnotatedSentence>& sentences, const std::string& path);

}  // namespace qgen

#endif
