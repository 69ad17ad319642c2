// Inflection table (LEMMA TAG SURFACE) with regular-rule fallback.

#ifndef QGEN_MORPHOLOGY_HPP
#define QGEN_MORPHOLOGY_HPP

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qgen {

class MorphologyTable {
 public:
  MorphologyTable() = default;

  static MorphologyTable load(const std::string& path);
  static MorphologyTable parse(std::string_view contents, std::string_view origin = "<memory>");
  /// Adds the entries of another table; later entries win for (lemma, tag).
  void merge(const MorphologyTable& other);

  void add(std::string lemma, std::string tag, std::string surface);

  /// Irregular or listed form, empty string if the table has none.
  std::string lookup(std::string_view lemma, std::string_view tag) const;
  /// All (lemma, tag) readings of a lowercase surface form, in insertion order.
  const std::vector<std::pair<std::string, std::string>>& readings(std::string_view surface) const;
  bool knows_lemma(std::string_view lemma) const;

  /// Inflects `lemma` for `tag`, using the table first and regular rules after.
  /// Returns an empty string when the tag is not an inflection key.
  std::string inflect(std::string_view lemma, std::string_view tag) const;

  std::size_t size() const { return forms_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, std::string, std::less<>> forms_;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>, std::less<>> readings_;
};

bool is_inflection_tag(std::string_view tag);

/// Re-inflects a token: ("is", "be", "VBD") -> "was". Unknown tags leave the
/// surface unchanged and emit a warning. Capitalization of `surface` is kept.
std::string change_form(const MorphologyTable& table, std::string_view surface,
                        std::string_view lemma, std::string_view target_form_tag);

}  // namespace qgen

#endif
