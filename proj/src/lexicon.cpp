#include "qgen/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>

namespace qgen {

#ifndef QGEN_DEFAULT_DATA_DIR
#define QGEN_DEFAULT_DATA_DIR "data"
#endif

namespace {

const std::set<std::string, std::less<>> kClosedClass = {
    "CC", "CD", "DT", "EX", "IN", "MD", "PDT", "POS", "PRP", "PRP$", "RP", "TO", "WDT", "WP", "WP$", "WRB"};

const std::set<std::string, std::less<>> kDoOrModal = {
    "do", "does", "did", "to", "will", "would", "can", "could", "shall", "should", "may", "might", "must"};

const std::set<std::string, std::less<>> kAuxForPerfect = {
    "is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had", "having", "get", "got"};

bool is_number(std::string_view w) {
  bool digit = false;
  for (char c : w) {
    if (std::isdigit(static_cast<unsigned char>(c)))
      digit = true;
    else if (c != ',' && c != '.' && c != '-')
      return false;
  }
  return digit;
}

bool is_year(std::string_view w) {
  if (w.size() != 4 || !std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    return false;
  const int y = std::stoi(std::string(w));
  return y >= 1000 && y <= 2099;
}

std::string singular_of(const std::string& lower) {
  if (lower.ends_with("ies") && lower.size() > 4) return lower.substr(0, lower.size() - 3) + "y";
  if (lower.ends_with("ches") || lower.ends_with("shes") || lower.ends_with("xes") ||
      lower.ends_with("sses"))
    return lower.substr(0, lower.size() - 2);
  return lower.substr(0, lower.size() - 1);
}

bool looks_plural(const std::string& lower) {
  return lower.size() > 3 && lower.back() == 's' && !lower.ends_with("ss") && !lower.ends_with("us") &&
         !lower.ends_with("is");
}

}  // namespace

// ---------------------------------------------------------------------------
// LexiconTagger

LexiconTagger::LexiconTagger(std::shared_ptr<const MorphologyTable> morphology,
                             std::map<std::string, Entry, std::less<>> lexicon)
    : morphology_(std::move(morphology)), lexicon_(std::move(lexicon)) {}

std::map<std::string, LexiconTagger::Entry, std::less<>> LexiconTagger::load_lexicon(
    const std::string& path) {
  std::map<std::string, Entry, std::less<>> lexicon;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto cols = text::split(trimmed, '\t');
    if (cols.size() != 3)
      throw InputError(path + ":" + std::to_string(line_no) + ": expected WORD<TAB>POS<TAB>LEMMA");
    auto word = text::to_lower(cols[0]);
    lexicon.try_emplace(word, Entry{cols[1], cols[2] == "_" ? word : cols[2]});
  }
  return lexicon;
}

std::vector<ProvidedLayer> LexiconTagger::label(const std::vector<Token>& tokens) const {
  const std::size_t n = tokens.size();
  std::vector<std::string> pos(n), lemma(n);

  for (std::size_t i = 0; i < n; ++i) {
    const std::string& w = tokens[i].text;
    const std::string lower = text::to_lower(w);
    const auto prev_pos = [&](std::size_t k) -> std::string { return k < i ? pos[k] : std::string(); };

    if (w == "." || w == "?" || w == "!") {
      pos[i] = ".";
      lemma[i] = w;
      continue;
    }
    if (w == ",") {
      pos[i] = ",";
      lemma[i] = w;
      continue;
    }
    if (w == ";" || w == ":") {
      pos[i] = ":";
      lemma[i] = w;
      continue;
    }
    if (w == "'s" || w == "\xE2\x80\x99s") {
      pos[i] = "POS";
      lemma[i] = "'s";
      continue;
    }
    if (is_number(w)) {
      pos[i] = "CD";
      lemma[i] = w;
      continue;
    }

    const bool capitalized = text::is_capitalized(w);
    auto lex = lexicon_.find(lower);
    if (lex != lexicon_.end() && (!capitalized || i == 0 || kClosedClass.contains(lex->second.pos))) {
      pos[i] = lex->second.pos;
      lemma[i] = lex->second.lemma;
      continue;
    }
    if (capitalized && i > 0) {
      pos[i] = "NNP";
      lemma[i] = w;
      continue;
    }

    const auto& readings = morphology_ ? morphology_->readings(lower)
                                       : std::vector<std::pair<std::string, std::string>>{};
    if (!readings.empty()) {
      const std::string before = i > 0 ? pos[i - 1] : std::string();
      const bool after_determiner = before == "DT" || before == "PRP$" || before == "JJ";
      auto has = [&](std::string_view tag) {
        return std::any_of(readings.begin(), readings.end(), [&](const auto& r) { return r.second == tag; });
      };
      auto lemma_for = [&](std::string_view tag) {
        for (const auto& r : readings)
          if (r.second == tag) return r.first;
        return readings.front().first;
      };
      if (after_determiner) {
        // a verb form right after a determiner is read as a noun
        pos[i] = looks_plural(lower) ? "NNS" : "NN";
        lemma[i] = pos[i] == "NNS" ? singular_of(lower) : lower;
        continue;
      }
      std::string tag = readings.front().second;
      if (has("VBD") && has("VBN")) {
        std::size_t k = i;
        while (k > 0 && (pos[k - 1] == "RB")) --k;
        const bool perfect = k > 0 && kAuxForPerfect.contains(text::to_lower(tokens[k - 1].text));
        tag = perfect ? "VBN" : "VBD";
      } else if (has("VB") && has("VBP")) {
        tag = "VBP";
        for (std::size_t k = i; k > 0; --k) {
          const auto& p = prev_pos(k - 1);
          const auto word = text::to_lower(tokens[k - 1].text);
          if (kDoOrModal.contains(word) || p == "MD" || p == "TO") {
            tag = "VB";
            break;
          }
          if (p.starts_with("VB")) break;
        }
      } else if (has("VBN") && !has("VBD")) {
        tag = "VBN";
      }
      pos[i] = tag;
      lemma[i] = lemma_for(tag);
      continue;
    }

    if (capitalized) {
      pos[i] = "NNP";
      lemma[i] = w;
    } else if (lower.size() > 3 && lower.ends_with("ly")) {
      pos[i] = "RB";
      lemma[i] = lower;
    } else if (looks_plural(lower)) {
      pos[i] = "NNS";
      lemma[i] = singular_of(lower);
    } else {
      pos[i] = "NN";
      lemma[i] = lower;
    }
  }

  ProvidedLayer lemma_layer{LayerId::Lemma, {}};
  ProvidedLayer pos_layer{LayerId::Pos, {}};
  for (std::size_t i = 0; i < n; ++i) {
    lemma_layer.cells.emplace_back(LabelSet(lemma[i]));
    pos_layer.cells.emplace_back(LabelSet(pos[i]));
  }
  return {std::move(lemma_layer), std::move(pos_layer)};
}

// ---------------------------------------------------------------------------
// Gazetteer

Gazetteer Gazetteer::parse(std::string_view contents, std::string_view origin) {
  Gazetteer g;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto cols = text::split(trimmed, '\t');
    auto layer = cols.size() == 3 ? parse_layer(cols[1]) : std::nullopt;
    if (!layer || *layer == LayerId::Lemma || *layer == LayerId::Pos || *layer == LayerId::PosSimple)
      throw InputError(std::string(origin) + ":" + std::to_string(line_no) +
                       ": expected PHRASE<TAB>LAYER<TAB>LABEL with a semantic layer");
    g.add(cols[0], *layer, cols[2]);
  }
  return g;
}

Gazetteer Gazetteer::load(const std::string& path) { return parse(read_file(path), path); }

void Gazetteer::add(std::string_view phrase, LayerId layer, std::string label) {
  std::vector<std::string> words;
  for (const auto& t : tokenize(phrase)) words.push_back(t.text);
  const bool ci = text::to_lower(phrase) == phrase;
  for (std::size_t idx : by_first_word_[text::to_lower(words.front())]) {
    auto& p = phrases_[idx];
    if (p.words == words && p.case_insensitive == ci) {
      p.labels.push_back({layer, std::move(label)});
      return;
    }
  }
  by_first_word_[text::to_lower(words.front())].push_back(phrases_.size());
  max_words_ = std::max(max_words_, words.size());
  phrases_.push_back(Phrase{std::move(words), ci, {{layer, std::move(label)}}});
}

std::vector<ProvidedLayer> Gazetteer::label(const std::vector<Token>& tokens) const {
  const std::size_t n = tokens.size();
  constexpr std::array<LayerId, 4> kLayers = {LayerId::Ner, LayerId::Gkg, LayerId::Viaf, LayerId::Sst};
  std::array<std::vector<LabelSet>, 4> cells;
  for (auto& c : cells) c.assign(n, LabelSet{});
  auto slot = [&](LayerId id) -> std::vector<LabelSet>& {
    return cells[static_cast<std::size_t>(std::find(kLayers.begin(), kLayers.end(), id) - kLayers.begin())];
  };

  for (std::size_t i = 0; i < n;) {
    const Phrase* best = nullptr;
    if (auto it = by_first_word_.find(text::to_lower(tokens[i].text)); it != by_first_word_.end()) {
      for (std::size_t idx : it->second) {
        const auto& p = phrases_[idx];
        if (i + p.words.size() > n) continue;
        bool ok = true;
        for (std::size_t k = 0; k < p.words.size() && ok; ++k) {
          ok = p.case_insensitive ? text::iequals(p.words[k], tokens[i + k].text)
                                  : p.words[k] == tokens[i + k].text;
        }
        if (ok && (!best || p.words.size() > best->words.size())) best = &p;
      }
    }
    if (best) {
      for (std::size_t k = 0; k < best->words.size(); ++k)
        for (const auto& l : best->labels) slot(l.layer)[i + k].insert(l.value);
      i += best->words.size();
      continue;
    }
    if (is_year(tokens[i].text)) slot(LayerId::Ner)[i].insert("date");
    ++i;
  }

  std::vector<ProvidedLayer> out;
  for (std::size_t k = 0; k < kLayers.size(); ++k) {
    ProvidedLayer layer{kLayers[k], {}};
    for (auto& c : cells[k]) layer.cells.emplace_back(std::move(c));
    out.push_back(std::move(layer));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string default_data_dir() {
  if (const char* env = std::getenv("QGEN_DATA_DIR"); env && *env) return env;
  return QGEN_DEFAULT_DATA_DIR;
}

Toolkit make_toolkit(const ProviderConfig& config) {
  const std::string dir = config.data_dir.empty() ? default_data_dir() : config.data_dir;
  auto morphology = std::make_shared<MorphologyTable>(MorphologyTable::load(dir + "/morphology.tsv"));
  if (!config.morphology_path.empty()) morphology->merge(MorphologyTable::load(config.morphology_path));

  Toolkit kit;
  kit.morphology = morphology;
  for (const auto& path : config.fixture_paths)
    kit.providers.push_back(std::make_shared<FixtureProvider>(load_annotations(path)));
  kit.providers.push_back(
      std::make_shared<LexiconTagger>(morphology, LexiconTagger::load_lexicon(dir + "/lexicon.tsv")));
  kit.providers.push_back(std::make_shared<Gazetteer>(Gazetteer::load(dir + "/gazetteer.tsv")));
  return kit;
}

}  // namespace qgen
