#include "qgen/morphology.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "qgen/common.hpp"

namespace qgen {

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool ends_with_consonant_y(std::string_view w) {
  return w.size() >= 2 && w.back() == 'y' && !is_vowel(w[w.size() - 2]);
}

std::string add_s(std::string_view w) {
  std::string s(w);
  if (ends_with_consonant_y(w)) return s.substr(0, s.size() - 1) + "ies";
  if (w.ends_with("s") || w.ends_with("x") || w.ends_with("z") || w.ends_with("ch") ||
      w.ends_with("sh") || w.ends_with("o"))
    return s + "es";
  return s + "s";
}

std::string add_ed(std::string_view w) {
  std::string s(w);
  if (w.ends_with("e")) return s + "d";
  if (ends_with_consonant_y(w)) return s.substr(0, s.size() - 1) + "ied";
  return s + "ed";
}

std::string add_ing(std::string_view w) {
  std::string s(w);
  if (w.ends_with("ie")) return s.substr(0, s.size() - 2) + "ying";
  if (w.ends_with("e") && !w.ends_with("ee") && w.size() > 2) return s.substr(0, s.size() - 1) + "ing";
  return s + "ing";
}

}  // namespace

bool is_inflection_tag(std::string_view tag) {
  static const std::set<std::string, std::less<>> tags = {"VB",  "VBP", "VBZ", "VBD",
                                                          "VBN", "VBG", "NN",  "NNS"};
  return tags.contains(tag);
}

MorphologyTable MorphologyTable::parse(std::string_view contents, std::string_view origin) {
  MorphologyTable table;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto cols = text::split(trimmed, '\t');
    if (cols.size() != 3)
      throw InputError(std::string(origin) + ":" + std::to_string(line_no) +
                       ": expected LEMMA<TAB>TAG<TAB>SURFACE");
    table.add(cols[0], cols[1], cols[2]);
  }
  return table;
}

MorphologyTable MorphologyTable::load(const std::string& path) { return parse(read_file(path), path); }

void MorphologyTable::merge(const MorphologyTable& other) {
  for (const auto& [key, surface] : other.forms_) {
    forms_.erase(key);
    add(key.first, key.second, surface);
  }
}

void MorphologyTable::add(std::string lemma, std::string tag, std::string surface) {
  auto& readings = readings_[text::to_lower(surface)];
  std::pair<std::string, std::string> reading{lemma, tag};
  if (std::find(readings.begin(), readings.end(), reading) == readings.end())
    readings.push_back(reading);
  forms_.try_emplace({std::move(lemma), std::move(tag)}, std::move(surface));
}

std::string MorphologyTable::lookup(std::string_view lemma, std::string_view tag) const {
  auto it = forms_.find(std::pair<std::string, std::string>(lemma, tag));
  return it == forms_.end() ? std::string() : it->second;
}

const std::vector<std::pair<std::string, std::string>>& MorphologyTable::readings(
    std::string_view surface) const {
  static const std::vector<std::pair<std::string, std::string>> none;
  auto it = readings_.find(text::to_lower(surface));
  return it == readings_.end() ? none : it->second;
}

bool MorphologyTable::knows_lemma(std::string_view lemma) const {
  return !lookup(lemma, "VB").empty() || !lookup(lemma, "NN").empty();
}

std::string MorphologyTable::inflect(std::string_view lemma, std::string_view tag) const {
  if (auto listed = lookup(lemma, tag); !listed.empty()) return listed;
  if (!is_inflection_tag(tag)) return {};
  const std::string base = text::to_lower(lemma);
  if (tag == "VB" || tag == "VBP" || tag == "NN") return base;
  if (tag == "VBZ" || tag == "NNS") return add_s(base);
  if (tag == "VBD" || tag == "VBN") return add_ed(base);
  if (tag == "VBG") return add_ing(base);
  return {};
}

std::string change_form(const MorphologyTable& table, std::string_view surface,
                        std::string_view lemma, std::string_view target_form_tag) {
  std::string form = table.inflect(text::to_lower(lemma), target_form_tag);
  if (form.empty()) {
    warn("no inflection of '" + std::string(lemma) + "' for tag " + std::string(target_form_tag));
    return std::string(surface);
  }
  if (text::is_capitalized(surface)) form = text::capitalize(form);
  return form;
}

}  // namespace qgen
