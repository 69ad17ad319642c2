#include "qgen/simplify.hpp"

#include <algorithm>
#include <optional>

namespace qgen {

namespace {

bool has_tag(const AnnotatedSentence& s, std::size_t i, auto pred) {
  for (const auto& v : s.layer(LayerId::Pos)[i].values())
    if (pred(v)) return true;
  return false;
}

bool is_noun(const AnnotatedSentence& s, std::size_t i) {
  return has_tag(s, i, [](const std::string& t) { return t.starts_with("NN"); });
}

bool is_finite_verb(const AnnotatedSentence& s, std::size_t i) {
  return has_tag(s, i, [](const std::string& t) {
    return t == "VBD" || t == "VBP" || t == "VBZ" || t == "MD";
  });
}

bool is_verb(const AnnotatedSentence& s, std::size_t i) {
  return has_tag(s, i, [](const std::string& t) { return t.starts_with("VB") || t == "MD"; });
}

bool is_np_part(const AnnotatedSentence& s, std::size_t i) {
  return has_tag(s, i, [](const std::string& t) {
    return t.starts_with("NN") || t.starts_with("JJ") || t == "DT" || t == "PRP$" || t == "CD" ||
           t == "POS";
  });
}

bool is_tag(const AnnotatedSentence& s, std::size_t i, std::string_view tag) {
  return s.layer(LayerId::Pos)[i].contains(tag);
}

bool is_comma(const AnnotatedSentence& s, std::size_t i) { return s.tokens[i].text == ","; }

bool is_terminal(const AnnotatedSentence& s, std::size_t i) {
  const auto& t = s.tokens[i].text;
  return t == "." || t == "?" || t == "!";
}

/// Copies the given token positions into a new sentence closed by a terminal mark.
AnnotatedSentence slice(const AnnotatedSentence& s, const std::vector<std::size_t>& keep,
                        std::string source_id) {
  AnnotatedSentence out;
  out.source_id = std::move(source_id);
  for (std::size_t i : keep) {
    out.tokens.push_back(s.tokens[i]);
    for (LayerId id : kAllLayers) out.layer(id).push_back(s.layer(id)[i]);
  }
  while (!out.tokens.empty() && out.tokens.back().text == ",") {
    out.tokens.pop_back();
    for (LayerId id : kAllLayers) out.layer(id).pop_back();
  }
  if (!out.tokens.empty() && !is_terminal(out, out.size() - 1)) {
    out.tokens.push_back(Token{".", 0, 0});
    out.layer(LayerId::Lemma).push_back(LabelSet("."));
    out.layer(LayerId::Pos).push_back(LabelSet("."));
    out.layer(LayerId::PosSimple).push_back(LabelSet("."));
    for (LayerId id : {LayerId::Ner, LayerId::Gkg, LayerId::Viaf, LayerId::Sst})
      out.layer(id).push_back(LabelSet{});
  }
  layout_offsets(out);
  return out;
}

std::vector<std::size_t> range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> r;
  for (std::size_t i = from; i < to; ++i) r.push_back(i);
  return r;
}

struct RelativeClause {
  std::size_t np_start;
  std::size_t wh;         // relative pronoun
  std::size_t end;        // one past the clause
};

std::optional<RelativeClause> find_relative_clause(const AnnotatedSentence& s) {
  const std::size_t n = s.size();
  for (std::size_t j = 1; j < n; ++j) {
    if (!is_tag(s, j, "WDT") && !is_tag(s, j, "WP")) continue;
    std::size_t head = j - 1;
    if (is_comma(s, head) && head > 0) --head;
    if (!is_noun(s, head)) continue;
    std::size_t np_start = head;
    while (np_start > 0 && is_np_part(s, np_start - 1)) --np_start;

    // The clause runs to the next comma or terminal mark, or stops before a
    // second finite verb once its own verb group is over.
    std::size_t k = j + 1;
    bool seen_verb = false, verb_group_done = false;
    for (; k < n; ++k) {
      if (is_comma(s, k) || is_terminal(s, k)) break;
      if (is_verb(s, k)) {
        if (verb_group_done && is_finite_verb(s, k)) break;
        seen_verb = true;
      } else if (seen_verb && !is_tag(s, k, "RB")) {
        verb_group_done = true;
      }
    }
    if (!seen_verb || k == j + 1) continue;
    return RelativeClause{np_start, j, k};
  }
  return std::nullopt;
}

std::optional<std::size_t> find_coordination(const AnnotatedSentence& s) {
  for (std::size_t c = 1; c + 1 < s.size(); ++c) {
    if (!is_tag(s, c, "CC")) continue;
    bool left = false, right = false;
    for (std::size_t i = 0; i < c; ++i) left = left || is_finite_verb(s, i);
    for (std::size_t i = c + 1; i < s.size(); ++i) right = right || is_finite_verb(s, i);
    if (left && right) return c;
  }
  return std::nullopt;
}

void split_coordination(const AnnotatedSentence& s, std::vector<AnnotatedSentence>& out) {
  auto c = find_coordination(s);
  if (!c) {
    out.push_back(s);
    return;
  }
  std::size_t left_end = *c;
  if (left_end > 0 && is_comma(s, left_end - 1)) --left_end;
  const auto left = slice(s, range(0, left_end), s.source_id);
  const auto right = slice(s, range(*c + 1, s.size()), s.source_id);
  split_coordination(left, out);
  split_coordination(right, out);
}

}  // namespace

std::vector<AnnotatedSentence> simplify_sentence(const AnnotatedSentence& sentence) {
  std::vector<AnnotatedSentence> out{sentence};
  std::size_t counter = 0;
  auto next_id = [&] { return sentence.source_id + "." + std::to_string(++counter); };

  AnnotatedSentence host = sentence;
  bool reduced = false;
  while (auto rc = find_relative_clause(host)) {
    std::vector<std::size_t> statement;
    std::size_t np_end = rc->wh;
    if (is_comma(host, np_end - 1)) --np_end;
    for (std::size_t i = rc->np_start; i < np_end; ++i) statement.push_back(i);
    for (std::size_t i = rc->wh + 1; i < rc->end; ++i) statement.push_back(i);
    out.push_back(slice(host, statement, next_id()));

    std::size_t cut_from = rc->wh, cut_to = rc->end;
    if (cut_from > 0 && is_comma(host, cut_from - 1)) --cut_from;
    if (cut_to < host.size() && is_comma(host, cut_to)) ++cut_to;
    std::vector<std::size_t> rest = range(0, cut_from);
    for (std::size_t i = cut_to; i < host.size(); ++i) rest.push_back(i);
    host = slice(host, rest, host.source_id);
    reduced = true;
  }

  std::vector<AnnotatedSentence> clauses;
  split_coordination(host, clauses);
  if (reduced) {
    host.source_id = next_id();
    out.push_back(host);
  }
  if (clauses.size() > 1) {
    for (auto& clause : clauses) {
      clause.source_id = next_id();
      out.push_back(std::move(clause));
    }
  }

  // Drop repeats of an earlier element.
  std::vector<AnnotatedSentence> unique;
  for (auto& s : out) {
    const auto words = s.surface();
    if (std::none_of(unique.begin(), unique.end(), [&](const auto& u) { return u.surface() == words; }))
      unique.push_back(std::move(s));
  }
  return unique;
}

}  // namespace qgen
