#include "qgen/generate.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "qgen/simplify.hpp"

namespace qgen {

std::optional<std::size_t> Alignment::target_of(std::size_t slot) const {
  auto it = slot_map.find(slot);
  if (it == slot_map.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Alignment::slot_of(std::size_t target) const {
  for (const auto& [s, t] : slot_map)
    if (t == target) return s;
  return std::nullopt;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Chunk {
  std::size_t start, end;  // inclusive
  const LabelSet* labels;
  std::size_t length() const { return end - start + 1; }
};

/// Runs of identical non-empty labels over positions not yet aligned.
std::vector<Chunk> chunks(const LayerRow& row, const std::vector<bool>& used) {
  std::vector<Chunk> out;
  for (std::size_t i = 0; i < row.size();) {
    if (used[i] || row[i].empty()) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < row.size() && !used[j + 1] && row[j + 1] == row[i]) ++j;
    out.push_back(Chunk{i, j, &row[i]});
    i = j + 1;
  }
  return out;
}

double relative_position(const Chunk& c, std::size_t size) {
  return (static_cast<double>(c.start) + static_cast<double>(c.length()) / 2.0) / static_cast<double>(size);
}

}  // namespace

Alignment align(const CompositePattern& rule_cp, const CompositePattern& target_cp) {
  const std::size_t n = rule_cp.token_count, t = target_cp.token_count;
  std::vector<std::size_t> r2t(n, kNone);
  std::vector<bool> slot_used(n, false), target_used(t, false);
  auto link = [&](std::size_t s, std::size_t x) {
    r2t[s] = x;
    slot_used[s] = true;
    target_used[x] = true;
  };

  for (LayerId layer : {LayerId::Ner, LayerId::Gkg, LayerId::Sst}) {
    auto rule_chunks = chunks(rule_cp.row(layer), slot_used);
    auto target_chunks = chunks(target_cp.row(layer), target_used);
    std::vector<bool> consumed(target_chunks.size(), false);
    for (const auto& rc : rule_chunks) {
      std::size_t best = kNone;
      std::tuple<std::size_t, double, std::size_t> best_key{};
      for (std::size_t k = 0; k < target_chunks.size(); ++k) {
        const auto& tc = target_chunks[k];
        if (consumed[k] || !rc.labels->intersects(*tc.labels)) continue;
        const std::size_t len_diff = rc.length() > tc.length() ? rc.length() - tc.length() : tc.length() - rc.length();
        std::tuple key{len_diff, std::abs(relative_position(rc, n) - relative_position(tc, t)), tc.start};
        if (best == kNone || key < best_key) {
          best = k;
          best_key = key;
        }
      }
      if (best == kNone) continue;
      consumed[best] = true;
      const auto& tc = target_chunks[best];
      const std::size_t c = std::min(rc.length(), tc.length());
      for (std::size_t i = 0; i + 1 < c; ++i) link(rc.start + i, tc.start + i);
      if (c == 1)
        link(rc.start, tc.start);
      else
        link(rc.end, tc.end);
    }
  }

  for (LayerId layer : {LayerId::Lemma, LayerId::Pos}) {
    const bool ci = layer == LayerId::Lemma;
    for (std::size_t s = 0; s < n; ++s) {
      if (slot_used[s]) continue;
      // Where a neighbouring alignment says this slot should land.
      long long expected = static_cast<long long>(s * t / std::max<std::size_t>(n, 1));
      for (std::size_t k = 1; k <= n; ++k) {
        if (s >= k && r2t[s - k] != kNone) {
          expected = static_cast<long long>(r2t[s - k] + k);
          break;
        }
        if (s + k < n && r2t[s + k] != kNone) {
          expected = static_cast<long long>(r2t[s + k]) - static_cast<long long>(k);
          break;
        }
      }
      std::size_t best = kNone;
      std::tuple<bool, long long, std::size_t> best_key{};
      for (std::size_t x = 0; x < t; ++x) {
        if (target_used[x] || !rule_cp.row(layer)[s].intersects(target_cp.row(layer)[x], ci)) continue;
        const bool continues = (s > 0 && x > 0 && r2t[s - 1] == x - 1) || (s + 1 < n && r2t[s + 1] == x + 1);
        std::tuple key{!continues, std::llabs(static_cast<long long>(x) - expected), x};
        if (best == kNone || key < best_key) {
          best = x;
          best_key = key;
        }
      }
      if (best != kNone) link(s, best);
    }
  }

  Alignment a;
  for (std::size_t s = 0; s < n; ++s)
    if (r2t[s] != kNone) a.slot_map.emplace(s, r2t[s]);
  return a;
}

// ---------------------------------------------------------------------------

namespace {

struct Produced {
  std::string text;
  std::optional<std::size_t> target;
  std::optional<std::size_t> literal;
  std::optional<std::string> form_tag;
};

bool same_entity(const AnnotatedSentence& s, std::size_t a, std::size_t b) {
  for (LayerId layer : {LayerId::Ner, LayerId::Gkg}) {
    if (!s.layer(layer)[a].empty() && s.layer(layer)[a] == s.layer(layer)[b]) return true;
  }
  return false;
}

}  // namespace

AppliedRule apply_rule(const TransformationRule& rule, const AnnotatedSentence& target,
                       const Alignment& alignment, const MorphologyTable& morphology) {
  const auto& cp = rule.sentence_cp;
  const std::size_t n = cp.token_count, t = target.size();
  std::vector<bool> removed(n, false);
  for (const auto& op : rule.edits)
    if (const auto* r = std::get_if<edit::Remove>(&op)) removed[r->src_slot] = true;
  std::vector<bool> answer_slot(n, false);
  for (std::size_t s = rule.answer.start_slot; s <= rule.answer.end_slot && s < n; ++s) answer_slot[s] = true;

  // Slots that feed the question or the answer must have a counterpart.
  std::vector<std::size_t> slot_target(n, kNone), target_slot(t, kNone);
  for (const auto& [s, x] : alignment.slot_map) {
    if (s >= n || x >= t) throw RuleError("inapplicable rule");
    slot_target[s] = x;
    target_slot[x] = s;
  }
  for (std::size_t s = 0; s < n; ++s) {
    if ((!removed[s] || answer_slot[s]) && slot_target[s] == kNone) throw RuleError("inapplicable rule");
  }

  // The answer covers the targets of the answer slots plus what lies between them.
  std::size_t lo = kNone, hi = 0;
  for (std::size_t s = rule.answer.start_slot; s <= rule.answer.end_slot; ++s) {
    lo = std::min(lo, slot_target[s]);
    hi = std::max(hi, slot_target[s]);
  }
  while (lo > 0 && target_slot[lo - 1] == kNone && same_entity(target, lo - 1, lo)) --lo;
  while (hi + 1 < t && target_slot[hi + 1] == kNone && same_entity(target, hi + 1, hi)) ++hi;
  for (std::size_t x = lo; x <= hi; ++x) {
    const std::size_t s = target_slot[x];
    if (s != kNone && !answer_slot[s] && !removed[s]) throw RuleError("inapplicable rule");
  }
  if (rule.answer.guard) {
    const auto& g = *rule.answer.guard;
    bool any = false;
    for (std::size_t x = lo; x <= hi; ++x) {
      const auto& cell = target.layer(g.layer)[x];
      if (cell.empty()) continue;
      if (!cell.contains(g.label)) throw RuleError("guard failed");
      any = true;
    }
    if (!any) throw RuleError("guard failed");
  }

  std::vector<SlotToken> slots = slots_of(cp);
  for (std::size_t s = 0; s < n; ++s) {
    if (slot_target[s] == kNone) continue;
    const std::size_t x = slot_target[s];
    slots[s] = SlotToken{target.tokens[x].text, target.layer(LayerId::Lemma)[x].first(),
                         target.layer(LayerId::Pos)[x].first(), x == 0};
  }
  std::vector<Produced> produced;
  for (auto& q : apply_edits(rule.edits, slots, morphology)) {
    Produced p{std::move(q.text), std::nullopt, q.literal, q.form_tag};
    if (q.slot) p.target = slot_target[*q.slot];
    produced.push_back(std::move(p));
  }

  // Unaligned target words outside the answer ride along inside a kept phrase.
  for (std::size_t x = 0; x < t;) {
    if (target_slot[x] != kNone || (x >= lo && x <= hi)) {
      ++x;
      continue;
    }
    std::size_t end = x;
    while (end + 1 < t && target_slot[end + 1] == kNone && !(end + 1 >= lo && end + 1 <= hi)) ++end;
    if (x == 0 || end + 1 >= t) throw RuleError("inapplicable rule");
    auto position_of = [&](std::size_t target_index) -> std::size_t {
      for (std::size_t k = 0; k < produced.size(); ++k)
        if (produced[k].target == target_index) return k;
      return kNone;
    };
    const std::size_t left = position_of(x - 1), right = position_of(end + 1);
    if (left == kNone || right != left + 1) throw RuleError("inapplicable rule");
    std::vector<Produced> run;
    for (std::size_t k = x; k <= end; ++k) run.push_back(Produced{target.tokens[k].text, k, std::nullopt, std::nullopt});
    produced.insert(produced.begin() + static_cast<std::ptrdiff_t>(right), run.begin(), run.end());
    x = end + 1;
  }
  if (produced.empty() || produced.back().text != "?") throw RuleError("inapplicable rule");

  AppliedRule out;
  auto& q = out.question_cp;
  std::vector<std::string> words;
  for (const auto& p : produced) {
    words.push_back(p.text);
    q.surface.push_back(p.text);
    for (LayerId id : kAllLayers) {
      LabelSet cell;
      if (p.target)
        cell = target.layer(id)[*p.target];
      else if (p.literal && *p.literal < rule.question_cp.token_count)
        cell = rule.question_cp.row(id)[*p.literal];
      else if (is_dense_layer(id))
        cell = LabelSet(p.text);
      q.cells[layer_index(id)].push_back(std::move(cell));
    }
    if (p.form_tag) {
      q.cells[layer_index(LayerId::Pos)].back() = LabelSet(*p.form_tag);
      q.cells[layer_index(LayerId::PosSimple)].back() = LabelSet(simplify_pos(*p.form_tag));
    }
  }
  q.token_count = q.surface.size();
  out.question = detokenize(words);

  std::vector<std::string> answer_words;
  for (std::size_t x = lo; x <= hi; ++x) {
    answer_words.push_back(target.tokens[x].text);
    out.answer_tokens.push_back(AnswerToken{target.layer(LayerId::Ner)[x], target.layer(LayerId::Gkg)[x]});
  }
  out.answer = detokenize(answer_words);
  return out;
}

std::vector<QuestionCandidate> generate_questions(const std::vector<AnnotatedSentence>& sentences,
                                                  const RuleStore& store, const MorphologyTable& morphology,
                                                  const GenerationOptions& options) {
  if (store.empty()) throw InputError("rule store is empty");
  std::vector<QuestionCandidate> out;
  for (const auto& sentence : sentences) {
    std::vector<AnnotatedSentence> variants =
        options.simplify ? simplify_sentence(sentence) : std::vector<AnnotatedSentence>{sentence};
    for (const auto& variant : variants) {
      const auto cp = create_cp(variant);
      for (const auto& hit : store.hierarchy().lookup(cp, options.min_similarity, options.max_rules_per_sentence)) {
        const auto* rule = store.find(hit.rule_id);
        if (!rule) continue;
        try {
          auto applied = apply_rule(*rule, variant, align(rule->sentence_cp, cp), morphology);
          QuestionCandidate c;
          c.text = std::move(applied.question);
          c.answer = std::move(applied.answer);
          c.rule_id = rule->id;
          c.source_id = sentence.source_id;
          c.sentence = variant.text();
          c.match = hit.match;
          c.question_cp = std::move(applied.question_cp);
          c.answer_tokens = std::move(applied.answer_tokens);
          out.push_back(std::move(c));
        } catch (const RuleError&) {
          // not every retrieved rule fits the sentence
        }
      }
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = "q" + std::to_string(i + 1);
  return out;
}

// ---------------------------------------------------------------------------
// Questions file

QuestionRecord to_record(const QuestionCandidate& c) {
  return QuestionRecord{c.id, c.source_id, c.sentence, c.text, c.answer, c.rule_id, c.match.score,
                        c.estimated_score};
}

std::string format_question_records(const std::vector<QuestionRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j{{"id", r.id},
                             {"source_id", r.source_id},
                             {"sentence", r.sentence},
                             {"question", r.question},
                             {"answer", r.answer},
                             {"rule_id", r.rule_id},
                             {"match_score", r.match_score},
                             {"estimated_score", r.estimated_score},
                             {"system", r.system}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<QuestionRecord> parse_question_records(std::string_view contents, std::string_view origin) {
  std::vector<QuestionRecord> records;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    try {
      auto j = nlohmann::json::parse(line);
      QuestionRecord r;
      r.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
      r.source_id = j.value("source_id", std::string());
      r.sentence = j.value("sentence", std::string());
      r.question = j.at("question").get<std::string>();
      r.answer = j.value("answer", std::string());
      r.rule_id = j.value("rule_id", RuleId{0});
      r.match_score = j.value("match_score", 0.0);
      r.estimated_score = j.value("estimated_score", 0.0);
      r.system = j.value("system", std::string("qgen"));
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + e.what());
    }
  }
  return records;
}

}  // namespace qgen
