#include "qgen/annotate.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace qgen {

namespace {

constexpr std::array<std::string_view, kLayerCount> kLayerNames = {
    "lemma", "pos", "pos_simple", "ner", "gkg", "viaf", "sst"};

const std::set<std::string, std::less<>> kAbbreviations = {
    "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "jr.", "sr.", "vs.", "etc.", "e.g.", "i.e.",
    "inc.", "ltd.", "co.", "mt.", "no.", "gen.", "col.", "lt.", "sgt.", "gov.", "rev.",
    "jan.", "feb.", "mar.", "apr.", "aug.", "sept.", "sep.", "oct.", "nov.", "dec.", "approx.",
    "ca.", "cf.", "fig."};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_terminal_punct(char c) {
  return c == '.' || c == ',' || c == '?' || c == '!' || c == ';' || c == ':';
}

// "U.S.", "A.", "e.g." and the fixed stop-list.
bool is_abbreviation(std::string_view word) {
  if (word.size() < 2 || word.back() != '.') return false;
  if (kAbbreviations.contains(text::to_lower(word))) return true;
  // dotted initials: every segment is a single letter
  std::size_t i = 0;
  while (i < word.size()) {
    if (!std::isalpha(static_cast<unsigned char>(word[i]))) return false;
    if (i + 1 >= word.size() || word[i + 1] != '.') return false;
    i += 2;
  }
  return std::isupper(static_cast<unsigned char>(word[0])) || word.size() > 2;
}

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

const std::map<std::string, std::string, std::less<>>& pos_simplification() {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"VB", "VB"},   {"VBD", "VB"},  {"VBG", "VB"},  {"VBN", "VB"},  {"VBP", "VB"},
      {"VBZ", "VB"},  {"NN", "NN"},   {"NNS", "NN"},  {"NNP", "NN"},  {"NNPS", "NN"},
      {"JJ", "JJ"},   {"JJR", "JJ"},  {"JJS", "JJ"},  {"RB", "RB"},   {"RBR", "RB"},
      {"RBS", "RB"},  {"PRP", "PRP"}, {"PRP$", "PRP"}, {"WDT", "WH"}, {"WP", "WH"},
      {"WP$", "WH"},  {"WRB", "WH"},  {"WH", "WH"}};
  return table;
}

const std::set<std::string, std::less<>>& identity_tags() {
  static const std::set<std::string, std::less<>> tags = {
      "CC", "CD", "DT", "EX", "FW", "IN", "LS", "MD", "PDT", "POS", "RP", "SYM", "TO", "UH",
      ".", ",", ":", "``", "''", "-LRB-", "-RRB-", "#", "$", "HYPH"};
  return tags;
}

}  // namespace

std::string_view layer_name(LayerId layer) { return kLayerNames[layer_index(layer)]; }

std::optional<LayerId> parse_layer(std::string_view name) {
  const std::string lower = text::to_lower(name);
  for (LayerId id : kAllLayers) {
    if (layer_name(id) == lower) return id;
  }
  if (lower == "possimple" || lower == "pos-simple") return LayerId::PosSimple;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// LabelSet

LabelSet::LabelSet(std::initializer_list<std::string> values) {
  for (const auto& v : values) insert(v);
}

LabelSet::LabelSet(std::string value) { insert(std::move(value)); }

LabelSet LabelSet::parse(std::string_view cell) {
  LabelSet set;
  cell = text::trim(cell);
  if (cell.empty() || cell == "_") return set;
  for (auto& part : text::split(cell, '|')) {
    auto v = text::trim(part);
    if (!v.empty() && v != "_") set.insert(std::string(v));
  }
  return set;
}

void LabelSet::insert(std::string value) {
  auto it = std::lower_bound(values_.begin(), values_.end(), value);
  if (it == values_.end() || *it != value) values_.insert(it, std::move(value));
}

bool LabelSet::contains(std::string_view value) const {
  return std::binary_search(values_.begin(), values_.end(), value);
}

bool LabelSet::intersects(const LabelSet& other, bool case_insensitive) const {
  if (!case_insensitive) {
    auto a = values_.begin(), b = other.values_.begin();
    while (a != values_.end() && b != other.values_.end()) {
      if (*a == *b) return true;
      if (*a < *b)
        ++a;
      else
        ++b;
    }
    return false;
  }
  for (const auto& x : values_) {
    for (const auto& y : other.values_) {
      if (text::iequals(x, y)) return true;
    }
  }
  return false;
}

std::string LabelSet::to_string() const { return values_.empty() ? "_" : text::join(values_, "|"); }

// ---------------------------------------------------------------------------
// AnnotatedSentence

std::vector<std::string> AnnotatedSentence::surface() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

std::string AnnotatedSentence::text() const { return detokenize(surface()); }

void AnnotatedSentence::validate() const {
  const auto where = [&] { return "sentence '" + source_id + "': "; };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].text.empty()) throw InputError(where() + "empty token at " + std::to_string(i));
    if (tokens[i].index != i) throw InputError(where() + "token indices are not contiguous");
    if (i > 0 && tokens[i].char_offset <= tokens[i - 1].char_offset)
      throw InputError(where() + "character offsets are not increasing");
  }
  for (LayerId id : kAllLayers) {
    if (layer(id).size() != tokens.size())
      throw InputError(where() + "layer " + std::string(layer_name(id)) + " has " +
                       std::to_string(layer(id).size()) + " cells for " +
                       std::to_string(tokens.size()) + " tokens");
  }
  for (LayerId id : {LayerId::Lemma, LayerId::Pos}) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (layer(id)[i].empty())
        throw InputError(where() + "missing " + std::string(layer_name(id)) + " label on token " +
                         std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (layer(LayerId::PosSimple)[i] != simplify_pos(layer(LayerId::Pos)[i]))
      throw InputError(where() + "pos_simple does not match pos on token " + std::to_string(i));
  }
}

// ---------------------------------------------------------------------------
// Splitting and tokenization

std::vector<std::string> split_sentences(std::string_view input) {
  std::vector<std::string> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const char c = input[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    if (j >= input.size() || !is_space(input[j])) continue;
    while (j < input.size() && is_space(input[j])) ++j;
    if (j >= input.size() || !std::isupper(static_cast<unsigned char>(input[j]))) continue;
    if (c == '.') {
      std::size_t w = i;
      while (w > start && !is_space(input[w - 1])) --w;
      if (is_abbreviation(input.substr(w, i + 1 - w))) continue;
    }
    auto sentence = normalize_whitespace(input.substr(start, i + 1 - start));
    if (!sentence.empty()) sentences.push_back(std::move(sentence));
    start = j;
    i = j - 1;
  }
  auto rest = normalize_whitespace(input.substr(std::min(start, input.size())));
  if (!rest.empty()) sentences.push_back(std::move(rest));
  return sentences;
}

std::vector<Token> tokenize(std::string_view sentence) {
  struct Chunk {
    std::string_view text;
    std::size_t offset;  // code points
  };
  std::vector<Chunk> chunks;
  std::size_t cp = 0;
  for (std::size_t i = 0; i < sentence.size();) {
    if (is_space(sentence[i])) {
      ++i;
      ++cp;
      continue;
    }
    std::size_t j = i;
    while (j < sentence.size() && !is_space(sentence[j])) ++j;
    auto word = sentence.substr(i, j - i);
    chunks.push_back({word, cp});
    cp += text::utf8_length(word);
    i = j;
  }
  if (chunks.empty()) throw InputError("empty sentence");

  std::vector<Token> tokens;
  auto push = [&](std::string_view t, std::size_t offset) {
    tokens.push_back(Token{std::string(t), tokens.size(), offset});
  };
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    auto word = chunks[c].text;
    const bool last = c + 1 == chunks.size();
    std::vector<std::string_view> trailing;
    while (word.size() > 1 && is_terminal_punct(word.back())) {
      if (word.back() == '.' && !last && is_abbreviation(word)) break;
      trailing.push_back(word.substr(word.size() - 1));
      word.remove_suffix(1);
    }
    std::string_view clitic;
    for (std::string_view suffix : {std::string_view("'s"), std::string_view("\xE2\x80\x99s")}) {
      if (word.size() > suffix.size() && word.ends_with(suffix)) {
        clitic = word.substr(word.size() - suffix.size());
        word.remove_suffix(suffix.size());
        break;
      }
    }
    std::size_t offset = chunks[c].offset;
    push(word, offset);
    offset += text::utf8_length(word);
    if (!clitic.empty()) {
      push(clitic, offset);
      offset += text::utf8_length(clitic);
    }
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) {
      push(*it, offset);
      offset += 1;
    }
  }
  return tokens;
}

bool is_punctuation(std::string_view token) {
  return token.size() == 1 && is_terminal_punct(token[0]);
}

std::string detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    const bool attach = is_punctuation(t) || t == "'s" || t == "\xE2\x80\x99s";
    if (i > 0 && !attach) out += ' ';
    out += t;
  }
  return out;
}

// ---------------------------------------------------------------------------
// POS simplification

std::string simplify_pos(std::string_view pos_label) {
  const auto& table = pos_simplification();
  if (auto it = table.find(pos_label); it != table.end()) return it->second;
  if (!identity_tags().contains(pos_label)) {
    static std::mutex mutex;
    static std::set<std::string, std::less<>> reported;
    std::lock_guard lock(mutex);
    if (reported.insert(std::string(pos_label)).second)
      warn("unknown POS tag '" + std::string(pos_label) + "' kept as is");
  }
  return std::string(pos_label);
}

LabelSet simplify_pos(const LabelSet& pos) {
  LabelSet out;
  for (const auto& v : pos.values()) out.insert(simplify_pos(v));
  return out;
}

void derive_pos_simple(AnnotatedSentence& sentence) {
  auto& simple = sentence.layer(LayerId::PosSimple);
  const auto& pos = sentence.layer(LayerId::Pos);
  simple.assign(pos.size(), LabelSet{});
  for (std::size_t i = 0; i < pos.size(); ++i) simple[i] = simplify_pos(pos[i]);
}

// ---------------------------------------------------------------------------
// annotate

AnnotatedSentence annotate(std::string_view sentence, const ProviderList& providers,
                           std::string source_id) {
  AnnotatedSentence out;
  out.source_id = std::move(source_id);
  out.tokens = tokenize(sentence);
  const std::size_t n = out.tokens.size();

  std::array<bool, kLayerCount> filled{};
  for (const auto& provider : providers) {
    std::vector<ProvidedLayer> provided;
    try {
      provided = provider->label(out.tokens);
    } catch (const std::exception& e) {
      warn("provider " + provider->name() + " failed: " + e.what());
      continue;
    }
    for (auto& layer : provided) {
      const auto idx = layer_index(layer.layer);
      if (layer.layer == LayerId::PosSimple || filled[idx]) continue;
      if (layer.cells.size() != n)
        throw InputError("provider " + provider->name() + " returned " +
                         std::to_string(layer.cells.size()) + " cells for " + std::to_string(n) +
                         " tokens");
      auto& row = out.layers[idx];
      row.assign(n, LabelSet{});
      for (std::size_t i = 0; i < n; ++i) {
        if (layer.cells[i]) {
          row[i] = std::move(*layer.cells[i]);
        } else if (!is_dense_layer(layer.layer)) {
          warn("provider " + provider->name() + " could not label token '" + out.tokens[i].text +
               "' on layer " + std::string(layer_name(layer.layer)));
        }
      }
      filled[idx] = true;
    }
  }

  for (LayerId id : {LayerId::Lemma, LayerId::Pos}) {
    if (!filled[layer_index(id)])
      throw InputError("no provider for layer " + std::string(layer_name(id)));
    for (std::size_t i = 0; i < n; ++i) {
      if (out.layer(id)[i].empty())
        throw InputError("no " + std::string(layer_name(id)) + " label for token '" +
                         out.tokens[i].text + "'");
    }
  }
  for (LayerId id : kAllLayers) {
    if (!filled[layer_index(id)]) out.layer(id).assign(n, LabelSet{});
  }
  derive_pos_simple(out);
  return out;
}

// ---------------------------------------------------------------------------
// FixtureProvider

FixtureProvider::FixtureProvider(const std::vector<AnnotatedSentence>& sentences) {
  for (const auto& s : sentences) by_text_.emplace_back(text::join(s.surface(), " "), s);
  std::stable_sort(by_text_.begin(), by_text_.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
}

std::vector<ProvidedLayer> FixtureProvider::label(const std::vector<Token>& tokens) const {
  std::vector<std::string> words;
  for (const auto& t : tokens) words.push_back(t.text);
  const auto key = text::join(words, " ");
  auto it = std::lower_bound(by_text_.begin(), by_text_.end(), key,
                             [](const auto& entry, const std::string& k) { return entry.first < k; });
  if (it == by_text_.end() || it->first != key) return {};
  std::vector<ProvidedLayer> out;
  for (LayerId id : kAllLayers) {
    if (id == LayerId::PosSimple) continue;
    ProvidedLayer layer{id, {}};
    for (const auto& cell : it->second.layer(id)) layer.cells.emplace_back(cell);
    out.push_back(std::move(layer));
  }
  return out;
}

// ---------------------------------------------------------------------------
// TSV

namespace {

constexpr std::array<LayerId, 6> kTsvLayers = {LayerId::Lemma, LayerId::Pos,  LayerId::Ner,
                                               LayerId::Gkg,   LayerId::Viaf, LayerId::Sst};

}  // namespace

void layout_offsets(AnnotatedSentence& s) {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const auto& t = s.tokens[i].text;
    const bool attach = is_punctuation(t) || t == "'s" || t == "\xE2\x80\x99s";
    if (i > 0 && !attach) offset += 1;
    s.tokens[i].index = i;
    s.tokens[i].char_offset = offset;
    offset += text::utf8_length(t);
  }
}

std::vector<AnnotatedSentence> parse_annotations(std::string_view contents, std::string_view origin) {
  std::vector<AnnotatedSentence> sentences;
  std::set<std::string> ids;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;

  AnnotatedSentence current;
  std::optional<std::vector<std::size_t>> offsets;
  std::size_t block_line = 0;
  bool open = false;

  auto error = [&](std::size_t at, const std::string& what) {
    return InputError(std::string(origin) + ":" + std::to_string(at) + ": " + what);
  };
  auto finish = [&] {
    if (!open) return;
    open = false;
    if (current.tokens.empty()) throw error(block_line, "sentence block without tokens");
    if (current.source_id.empty()) current.source_id = "s" + std::to_string(sentences.size() + 1);
    if (!ids.insert(current.source_id).second)
      throw error(block_line, "duplicate source_id '" + current.source_id + "'");
    if (offsets) {
      if (offsets->size() != current.tokens.size())
        throw error(block_line, "offsets header does not match token count");
      for (std::size_t i = 0; i < offsets->size(); ++i) current.tokens[i].char_offset = (*offsets)[i];
    } else {
      layout_offsets(current);
    }
    derive_pos_simple(current);
    try {
      current.validate();
    } catch (const InputError& e) {
      throw error(block_line, e.what());
    }
    sentences.push_back(std::move(current));
    current = AnnotatedSentence{};
    offsets.reset();
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) {
      finish();
      continue;
    }
    if (!open) {
      open = true;
      block_line = line_no;
    }
    if (line[0] == '#') {
      auto body = text::trim(std::string_view(line).substr(1));
      if (body.starts_with("id=")) {
        current.source_id = std::string(body.substr(3));
      } else if (body.starts_with("offsets=")) {
        std::vector<std::size_t> values;
        std::istringstream os{std::string(body.substr(8))};
        std::size_t v;
        while (os >> v) values.push_back(v);
        offsets = std::move(values);
      }
      continue;
    }
    auto cols = text::split(line, '\t');
    if (cols.size() != 8)
      throw error(line_no, "expected 8 tab-separated columns, found " + std::to_string(cols.size()));
    std::size_t index = 0;
    try {
      index = std::stoul(cols[0]);
    } catch (const std::exception&) {
      throw error(line_no, "bad token index '" + cols[0] + "'");
    }
    if (index != current.tokens.size())
      throw error(line_no, "token index " + cols[0] + " out of sequence");
    if (cols[1].empty() || cols[1] == "_") throw error(line_no, "empty token text");
    current.tokens.push_back(Token{cols[1], index, 0});
    for (std::size_t k = 0; k < kTsvLayers.size(); ++k) {
      current.layer(kTsvLayers[k]).push_back(LabelSet::parse(cols[k + 2]));
    }
  }
  finish();
  return sentences;
}

std::vector<AnnotatedSentence> load_annotations(const std::string& path) {
  return parse_annotations(read_file(path), path);
}

std::string format_annotations(const std::vector<AnnotatedSentence>& sentences) {
  std::ostringstream out;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    const auto& sentence = sentences[s];
    if (s) out << '\n';
    out << "# id=" << sentence.source_id << '\n';
    out << "# text=" << sentence.text() << '\n';
    out << "# offsets=";
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i)
      out << (i ? " " : "") << sentence.tokens[i].char_offset;
    out << '\n';
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      out << i << '\t' << sentence.tokens[i].text;
      for (LayerId id : kTsvLayers) out << '\t' << sentence.layer(id)[i].to_string();
      out << '\n';
    }
  }
  return out.str();
}

void save_annotations(const std::vector<AnnotatedSentence>& sentences, const std::string& path) {
  write_file_atomic(path, format_annotations(sentences));
}

}  // namespace qgen
