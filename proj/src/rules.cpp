#include "qgen/rules.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qgen {

using ojson = nlohmann::ordered_json;

std::string describe(const EditOp& op) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, edit::Remove>) {
          return "remove(" + std::to_string(e.src_slot) + ")";
        } else if constexpr (std::is_same_v<T, edit::Insert>) {
          return "insert('" + e.literal + "'@" + std::to_string(e.dst_position) + ")";
        } else if constexpr (std::is_same_v<T, edit::Move>) {
          return "move(" + std::to_string(e.src_slot) + "->" + std::to_string(e.dst_position) + ")";
        } else {
          return "change_form(" + std::to_string(e.src_slot) + ", " + e.target_form_tag + ")";
        }
      },
      op);
}

// ---------------------------------------------------------------------------
// Edit scripts

std::vector<SlotToken> slots_of(const CompositePattern& cp) {
  std::vector<SlotToken> slots;
  slots.reserve(cp.token_count);
  for (std::size_t i = 0; i < cp.token_count; ++i) {
    slots.push_back(SlotToken{cp.surface[i], cp.row(LayerId::Lemma)[i].first(),
                              cp.row(LayerId::Pos)[i].first(), i == 0});
  }
  return slots;
}

std::vector<QuestionToken> apply_edits(const std::vector<EditOp>& edits,
                                       const std::vector<SlotToken>& slots,
                                       const MorphologyTable& morphology) {
  const std::size_t n = slots.size();
  std::vector<bool> taken(n, false);
  std::vector<std::string> text(n);
  std::vector<std::optional<std::string>> form(n);
  for (std::size_t i = 0; i < n; ++i) text[i] = slots[i].surface;

  auto check_slot = [&](std::size_t s) {
    if (s >= n) throw RuleError("edit refers to slot " + std::to_string(s) + " of " + std::to_string(n));
  };
  std::vector<std::pair<std::size_t, const EditOp*>> placements;
  for (const auto& op : edits) {
    if (const auto* r = std::get_if<edit::Remove>(&op)) {
      check_slot(r->src_slot);
      taken[r->src_slot] = true;
    } else if (const auto* mv = std::get_if<edit::Move>(&op)) {
      check_slot(mv->src_slot);
      taken[mv->src_slot] = true;
      placements.emplace_back(mv->dst_position, &op);
    } else if (const auto* ins = std::get_if<edit::Insert>(&op)) {
      placements.emplace_back(ins->dst_position, &op);
    } else if (const auto* cf = std::get_if<edit::ChangeForm>(&op)) {
      check_slot(cf->src_slot);
      text[cf->src_slot] =
          change_form(morphology, slots[cf->src_slot].surface, slots[cf->src_slot].lemma, cf->target_form_tag);
      form[cf->src_slot] = cf->target_form_tag;
    }
  }

  std::vector<QuestionToken> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!taken[i]) out.push_back(QuestionToken{text[i], i, std::nullopt, form[i]});
  }
  std::stable_sort(placements.begin(), placements.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [dst, op] : placements) {
    if (dst > out.size())
      throw RuleError("edit position " + std::to_string(dst) + " beyond question length " +
                      std::to_string(out.size()));
    QuestionToken token;
    if (const auto* mv = std::get_if<edit::Move>(op)) {
      token = QuestionToken{text[mv->src_slot], mv->src_slot, std::nullopt, form[mv->src_slot]};
    } else {
      const auto& ins = std::get<edit::Insert>(*op);
      token = QuestionToken{ins.literal, std::nullopt, ins.dst_position, std::nullopt};
    }
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(dst), std::move(token));
  }

  for (std::size_t k = 0; k < out.size(); ++k) {
    auto& t = out[k];
    if (k == 0) {
      t.text = text::capitalize(t.text);
    } else if (t.slot && slots[*t.slot].sentence_initial) {
      const auto& pos = slots[*t.slot].pos;
      if (pos != "NNP" && pos != "NNPS" && t.text != "I") t.text = text::decapitalize(t.text);
    }
  }
  return out;
}

std::string replay(const TransformationRule& rule, const MorphologyTable& morphology) {
  std::vector<std::string> words;
  for (auto& t : apply_edits(rule.edits, slots_of(rule.sentence_cp), morphology))
    words.push_back(std::move(t.text));
  return detokenize(words);
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

std::string lower_lemma(const CompositePattern& cp, std::size_t i) {
  return text::to_lower(cp.row(LayerId::Lemma)[i].first());
}

bool is_noun_tag(const LabelSet& pos) {
  return std::any_of(pos.values().begin(), pos.values().end(),
                     [](const std::string& t) { return t.starts_with("NN"); });
}

/// Indices of the pairs (sorted by sentence slot) forming the longest run
/// increasing in question position; those tokens keep their relative order.
std::vector<bool> kept_pairs(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  const std::size_t k = pairs.size();
  std::vector<std::size_t> len(k, 1), prev(k, kNone);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (pairs[j].second < pairs[i].second && len[j] + 1 > len[i]) {
        len[i] = len[j] + 1;
        prev[i] = j;
      }
    }
  }
  std::vector<bool> kept(k, false);
  if (k == 0) return kept;
  std::size_t best = 0;
  for (std::size_t i = 1; i < k; ++i)
    if (len[i] > len[best]) best = i;
  for (std::size_t i = best; i != kNone; i = prev[i]) kept[i] = true;
  return kept;
}

std::vector<EditOp> build_edits(const CompositePattern& s, const CompositePattern& q,
                                const std::vector<std::size_t>& q_src) {
  const std::size_t n = s.token_count, m = q.token_count;
  std::vector<std::size_t> s_dst(n, kNone);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < m; ++j) {
    if (q_src[j] != kNone) s_dst[q_src[j]] = j;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (s_dst[i] != kNone) pairs.emplace_back(i, s_dst[i]);
  const auto kept = kept_pairs(pairs);
  std::vector<bool> moved(n, false);
  for (std::size_t p = 0; p < pairs.size(); ++p)
    if (!kept[p]) moved[pairs[p].first] = true;

  std::vector<EditOp> edits;
  for (std::size_t i = 0; i < n; ++i)
    if (s_dst[i] == kNone) edits.emplace_back(edit::Remove{i});
  for (std::size_t i = 0; i < n; ++i) {
    if (s_dst[i] == kNone) continue;
    if (!text::iequals(s.surface[i], q.surface[s_dst[i]]))
      edits.emplace_back(edit::ChangeForm{i, q.row(LayerId::Pos)[s_dst[i]].first()});
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (q_src[j] == kNone)
      edits.emplace_back(edit::Insert{q.surface[j], j});
    else if (moved[q_src[j]])
      edits.emplace_back(edit::Move{q_src[j], j});
  }
  return edits;
}

struct Span {
  std::size_t start = 0, end = 0;  // inclusive
  std::size_t length() const { return end - start + 1; }
};

/// Longest run of positions satisfying `pred`; the earliest wins ties.
std::optional<Span> longest_run(std::size_t n, auto pred) {
  std::optional<Span> best;
  for (std::size_t i = 0; i < n;) {
    if (!pred(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && pred(j + 1)) ++j;
    Span run{i, j};
    if (!best || run.length() > best->length()) best = run;
    i = j + 1;
  }
  return best;
}

std::optional<Span> span_from_text(const CompositePattern& s, const std::string& answer_text) {
  std::vector<std::string> words;
  for (const auto& t : tokenize(answer_text))
    if (!is_punctuation(t.text)) words.push_back(text::to_lower(t.text));
  if (words.empty()) return std::nullopt;
  const std::size_t n = s.token_count;
  for (std::size_t i = 0; i + words.size() <= n; ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < words.size() && ok; ++k) ok = text::to_lower(s.surface[i + k]) == words[k];
    if (ok) return Span{i, i + words.size() - 1};
  }
  return longest_run(n, [&](std::size_t i) {
    return !is_punctuation(s.surface[i]) &&
           std::find(words.begin(), words.end(), text::to_lower(s.surface[i])) != words.end();
  });
}

std::optional<AnswerGuard> guard_for(const CompositePattern& s, const Span& span) {
  for (LayerId layer : {LayerId::Ner, LayerId::Gkg, LayerId::Sst}) {
    std::optional<LabelSet> common;
    for (std::size_t i = span.start; i <= span.end; ++i) {
      const auto& cell = s.row(layer)[i];
      if (cell.empty()) continue;
      if (!common) {
        common = cell;
      } else {
        LabelSet both;
        for (const auto& v : cell.values())
          if (common->contains(v)) both.insert(v);
        common = both;
      }
    }
    if (common && !common->empty()) return AnswerGuard{layer, common->first()};
  }
  return std::nullopt;
}

}  // namespace

TransformationRule extract_rule(const AnnotatedSentence& sentence, const AnnotatedSentence& question,
                                const std::optional<std::string>& answer_text,
                                const MorphologyTable& morphology) {
  if (question.size() == 0 || question.tokens.back().text != "?") throw RuleError("unalignable pair");
  TransformationRule rule;
  rule.sentence_cp = create_cp(sentence);
  rule.question_cp = create_cp(question);
  const auto& s = rule.sentence_cp;
  const auto& q = rule.question_cp;
  const std::size_t n = s.token_count, m = q.token_count;

  std::vector<std::string> ls(n), lq(m);
  for (std::size_t i = 0; i < n; ++i) ls[i] = lower_lemma(s, i);
  for (std::size_t j = 0; j < m; ++j) lq[j] = lower_lemma(q, j);

  // A given answer is located first; its tokens never pair with question tokens.
  std::optional<Span> span;
  const bool answer_given = answer_text && !text::trim(*answer_text).empty();
  if (answer_given) {
    span = span_from_text(s, *answer_text);
    if (span)
      for (std::size_t i = span->start; i <= span->end; ++i) ls[i] = "\x01";
  }

  // Order-preserving lemma alignment.
  std::vector<std::vector<std::size_t>> dp(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      dp[i][j] = ls[i] == lq[j] ? dp[i + 1][j + 1] + 1 : std::max(dp[i + 1][j], dp[i][j + 1]);
  std::vector<std::size_t> q_src(m, kNone);
  std::vector<bool> s_used(n, false);
  for (std::size_t i = 0, j = 0; i < n && j < m;) {
    if (ls[i] == lq[j] && dp[i][j] == dp[i + 1][j + 1] + 1) {
      q_src[j] = i;
      s_used[i] = true;
      ++i;
      ++j;
    } else if (dp[i + 1][j] >= dp[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
  // Tokens that changed position: pair the remaining equal lemmas.
  for (std::size_t j = 0; j < m; ++j) {
    if (q_src[j] != kNone || q.surface[j] == "?") continue;
    std::size_t pick = kNone;
    for (std::size_t i = 0; i < n; ++i) {
      if (s_used[i] || ls[i] != lq[j]) continue;
      if (pick == kNone || (text::iequals(s.surface[i], q.surface[j]) &&
                            !text::iequals(s.surface[pick], q.surface[j])))
        pick = i;
    }
    if (pick != kNone) {
      q_src[j] = pick;
      s_used[pick] = true;
    }
  }
  // A differing surface must be reachable by re-inflection.
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t i = q_src[j];
    if (i == kNone || text::iequals(s.surface[i], q.surface[j])) continue;
    const std::string tag = q.row(LayerId::Pos)[j].first();
    if (!is_inflection_tag(tag) || !text::iequals(morphology.inflect(ls[i], tag), q.surface[j])) {
      q_src[j] = kNone;
      s_used[i] = false;
    }
  }

  // Replay and release pairings the script cannot reproduce.
  const auto slots = slots_of(s);
  for (;;) {
    rule.edits = build_edits(s, q, q_src);
    const auto produced = apply_edits(rule.edits, slots, morphology);
    std::size_t bad = kNone;
    for (std::size_t j = 0; j < m && bad == kNone; ++j)
      if (produced[j].text != q.surface[j]) bad = j;
    if (bad == kNone) break;
    if (q_src[bad] == kNone) throw RuleError("unalignable pair");
    s_used[q_src[bad]] = false;
    q_src[bad] = kNone;
  }
  if (std::count(s_used.begin(), s_used.end(), true) < 2) throw RuleError("unalignable pair");

  if (!answer_given) {
    span = longest_run(n, [&](std::size_t i) {
      return !s_used[i] && (!s.row(LayerId::Ner)[i].empty() || !s.row(LayerId::Gkg)[i].empty());
    });
    if (!span)
      span = longest_run(n, [&](std::size_t i) { return !s_used[i] && is_noun_tag(s.row(LayerId::Pos)[i]); });
  }
  if (!span) throw RuleError("no answer span");
  rule.answer = AnswerSpanSpec{span->start, span->end, guard_for(s, *span)};
  return rule;
}

RuleSignature signature_of(const TransformationRule& rule) {
  return {pattern_key(rule.sentence_cp, LayerId::Pos), pattern_key(rule.question_cp, LayerId::Pos),
          rule.edits};
}

// ---------------------------------------------------------------------------
// RuleStore

void RuleStore::index(const TransformationRule& rule) {
  hierarchy_.insert(std::make_shared<const CompositePattern>(rule.sentence_cp), rule.id);
  signatures_.insert(signature_of(rule));
}

std::optional<RuleId> RuleStore::add(TransformationRule rule) {
  if (signatures_.contains(signature_of(rule))) return std::nullopt;
  rule.id = next_id_++;
  index(rule);
  const RuleId id = rule.id;
  rules_.emplace(id, std::move(rule));
  return id;
}

const TransformationRule* RuleStore::find(RuleId id) const {
  auto it = rules_.find(id);
  return it == rules_.end() ? nullptr : &it->second;
}

TransformationRule* RuleStore::find_mutable(RuleId id) {
  auto it = rules_.find(id);
  return it == rules_.end() ? nullptr : &it->second;
}

std::uint64_t RuleStore::max_application_count() const {
  std::uint64_t best = 1;
  for (const auto& [id, r] : rules_) best = std::max(best, r.application_count);
  return best;
}

void RuleStore::set_statistics(RuleId id, std::uint64_t application_count, double success_sum) {
  auto* rule = find_mutable(id);
  if (!rule) throw InputError("unknown rule " + std::to_string(id));
  rule->application_count = application_count;
  rule->success_sum = success_sum;
}

RuleStore RuleStore::from_rules(std::vector<TransformationRule> rules, RuleId next_id) {
  RuleStore store;
  for (auto& r : rules) {
    if (store.rules_.contains(r.id)) throw InputError("duplicate rule id " + std::to_string(r.id));
    if (r.id >= next_id) throw InputError("rule id " + std::to_string(r.id) + " not below next_id");
    store.index(r);
    const RuleId id = r.id;
    store.rules_.emplace(id, std::move(r));
  }
  store.next_id_ = next_id;
  return store;
}

// ---------------------------------------------------------------------------
// Training

void train_into(RuleStore& store, const std::vector<TrainingPair>& pairs, const ProviderList& providers,
                const MorphologyTable& morphology, TrainingReport* report) {
  TrainingReport local;
  local.pairs = pairs.size();
  for (const auto& pair : pairs) {
    try {
      auto sentence = annotate(pair.sentence, providers, pair.id + ":s");
      auto question = annotate(pair.question, providers, pair.id + ":q");
      auto rule = extract_rule(sentence, question, pair.answer, morphology);
      ++local.extracted;
      rule.origin = RuleOrigin::Trained;
      rule.application_count = 1;
      rule.success_sum = 1.0;
      if (store.add(std::move(rule))) ++local.added;
    } catch (const RuleError& e) {
      local.failures.push_back({pair.id, e.what()});
      warn("pair " + pair.id + ": " + e.what());
    } catch (const InputError& e) {
      local.failures.push_back({pair.id, e.what()});
      warn("pair " + pair.id + ": " + e.what());
    }
  }
  if (report) *report = std::move(local);
}

RuleStore train(const std::vector<TrainingPair>& pairs, const ProviderList& providers,
                const MorphologyTable& morphology, TrainingReport* report) {
  if (pairs.empty()) throw InputError("empty training set");
  RuleStore store;
  train_into(store, pairs, providers, morphology, report);
  if (store.empty()) throw RuleError("no rules could be learned from the training set");
  return store;
}

std::vector<TrainingPair> parse_training_pairs(std::string_view contents, std::string_view origin) {
  std::vector<TrainingPair> pairs;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw InputError(std::string(origin) + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) fail("expected a JSON object");
    TrainingPair pair;
    if (obj.contains("id")) {
      const auto& id = obj["id"];
      pair.id = id.is_string() ? id.get<std::string>() : id.dump();
    } else {
      pair.id = std::to_string(line_no);
    }
    for (const char* key : {"sentence", "question"}) {
      if (!obj.contains(key) || !obj[key].is_string()) fail(std::string("missing string field '") + key + "'");
    }
    pair.sentence = obj["sentence"].get<std::string>();
    pair.question = obj["question"].get<std::string>();
    if (obj.contains("answer") && !obj["answer"].is_null()) {
      if (!obj["answer"].is_string()) fail("field 'answer' must be a string");
      pair.answer = obj["answer"].get<std::string>();
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<TrainingPair> load_training_pairs(const std::string& path) {
  return parse_training_pairs(read_file(path), path);
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

ojson pattern_to_json(const CompositePattern& cp) {
  ojson layers = ojson::object();
  for (LayerId id : kAllLayers) {
    ojson row = ojson::array();
    for (const auto& cell : cp.row(id)) row.push_back(cell.to_string());
    layers[std::string(layer_name(id))] = std::move(row);
  }
  return ojson{{"tokens", cp.surface}, {"layers", std::move(layers)}};
}

CompositePattern pattern_from_json(const ojson& j) {
  CompositePattern cp;
  cp.surface = j.at("tokens").get<std::vector<std::string>>();
  cp.token_count = cp.surface.size();
  const auto& layers = j.at("layers");
  for (LayerId id : kAllLayers) {
    const auto& row = layers.at(std::string(layer_name(id)));
    auto& out = cp.cells[layer_index(id)];
    for (const auto& cell : row) out.push_back(LabelSet::parse(cell.get<std::string>()));
    if (out.size() != cp.token_count)
      throw InputError("layer " + std::string(layer_name(id)) + " length does not match token count");
  }
  return cp;
}

ojson edit_to_json(const EditOp& op) {
  return std::visit(
      [](const auto& e) -> ojson {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, edit::Remove>) {
          return {{"op", "remove"}, {"src", e.src_slot}};
        } else if constexpr (std::is_same_v<T, edit::Insert>) {
          return {{"op", "insert"}, {"literal", e.literal}, {"dst", e.dst_position}};
        } else if constexpr (std::is_same_v<T, edit::Move>) {
          return {{"op", "move"}, {"src", e.src_slot}, {"dst", e.dst_position}};
        } else {
          return {{"op", "change_form"}, {"src", e.src_slot}, {"tag", e.target_form_tag}};
        }
      },
      op);
}

EditOp edit_from_json(const ojson& j, std::size_t slots) {
  const auto op = j.at("op").get<std::string>();
  auto src = [&] {
    auto s = j.at("src").get<std::size_t>();
    if (s >= slots) throw InputError("edit slot " + std::to_string(s) + " out of range");
    return s;
  };
  if (op == "remove") return edit::Remove{src()};
  if (op == "insert") return edit::Insert{j.at("literal").get<std::string>(), j.at("dst").get<std::size_t>()};
  if (op == "move") return edit::Move{src(), j.at("dst").get<std::size_t>()};
  if (op == "change_form") return edit::ChangeForm{src(), j.at("tag").get<std::string>()};
  throw InputError("unknown edit op '" + op + "'");
}

}  // namespace

std::string serialize_store(const RuleStore& store) {
  ojson rules = ojson::array();
  for (const auto& [id, r] : store.rules()) {
    ojson edits = ojson::array();
    for (const auto& e : r.edits) edits.push_back(edit_to_json(e));
    ojson guard = nullptr;
    if (r.answer.guard)
      guard = ojson{{"layer", std::string(layer_name(r.answer.guard->layer))}, {"label", r.answer.guard->label}};
    rules.push_back(ojson{
        {"id", r.id},
        {"origin", r.origin == RuleOrigin::Trained ? "trained" : "derived"},
        {"sentence", pattern_to_json(r.sentence_cp)},
        {"question", pattern_to_json(r.question_cp)},
        {"edits", std::move(edits)},
        {"answer", ojson{{"start", r.answer.start_slot}, {"end", r.answer.end_slot}, {"guard", std::move(guard)}}},
        {"application_count", r.application_count},
        {"success_sum", r.success_sum},
    });
  }
  ojson doc{{"version", RuleStore::kFormatVersion}, {"next_id", store.next_id()}, {"rules", std::move(rules)}};
  return doc.dump(1) + "\n";
}

RuleStore deserialize_store(std::string_view contents) {
  ojson doc;
  try {
    doc = ojson::parse(contents);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("corrupt rule store at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("version")) throw InputError("rule store has no version field");
    const int version = doc.at("version").get<int>();
    if (version != RuleStore::kFormatVersion)
      throw InputError("unsupported rule store version " + std::to_string(version) + " (expected " +
                       std::to_string(RuleStore::kFormatVersion) + ")");
    std::vector<TransformationRule> rules;
    for (const auto& j : doc.at("rules")) {
      TransformationRule r;
      r.id = j.at("id").get<RuleId>();
      const auto origin = j.at("origin").get<std::string>();
      if (origin != "trained" && origin != "derived") throw InputError("unknown rule origin '" + origin + "'");
      r.origin = origin == "trained" ? RuleOrigin::Trained : RuleOrigin::Derived;
      r.sentence_cp = pattern_from_json(j.at("sentence"));
      r.question_cp = pattern_from_json(j.at("question"));
      for (const auto& e : j.at("edits")) r.edits.push_back(edit_from_json(e, r.sentence_cp.token_count));
      const auto& a = j.at("answer");
      r.answer.start_slot = a.at("start").get<std::size_t>();
      r.answer.end_slot = a.at("end").get<std::size_t>();
      if (r.answer.start_slot > r.answer.end_slot || r.answer.end_slot >= r.sentence_cp.token_count)
        throw InputError("rule " + std::to_string(r.id) + " has an invalid answer span");
      if (a.contains("guard") && !a.at("guard").is_null()) {
        auto layer = parse_layer(a.at("guard").at("layer").get<std::string>());
        if (!layer) throw InputError("rule " + std::to_string(r.id) + " has an unknown guard layer");
        r.answer.guard = AnswerGuard{*layer, a.at("guard").at("label").get<std::string>()};
      }
      r.application_count = j.at("application_count").get<std::uint64_t>();
      r.success_sum = j.at("success_sum").get<double>();
      rules.push_back(std::move(r));
    }
    return RuleStore::from_rules(std::move(rules), doc.at("next_id").get<RuleId>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("corrupt rule store: ") + e.what());
  }
}

void save_store(const RuleStore& store, const std::string& path) {
  write_file_atomic(path, serialize_store(store));
}

RuleStore load_store(const std::string& path) {
  try {
    return deserialize_store(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace qgen
