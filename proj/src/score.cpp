#include "qgen/score.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>

namespace qgen {

// ---------------------------------------------------------------------------
// Ratings

bool is_scale_value(double v) { return v == 0.0 || v == 0.5 || v == 1.0; }

double Rating::value() const {
  if (skipped || !syntax || !semantics) return 0.0;
  return (*syntax + *semantics) / 2.0;
}

void Rating::validate() const {
  if (question_id.empty()) throw InputError("rating without question_id");
  if (rater_id.empty()) throw InputError("rating without rater_id");
  if (skipped) {
    if (syntax || semantics) throw InputError("skipped rating must not carry verdicts");
    return;
  }
  if (!syntax || !semantics) throw InputError("rating needs both syntax and semantics");
  if (!is_scale_value(*syntax) || !is_scale_value(*semantics))
    throw InputError("rating values must be 1.0, 0.5 or 0.0");
}

// ---------------------------------------------------------------------------
// Estimation

std::string coarse_entity_class(std::string_view label) {
  static const std::map<std::string, std::string, std::less<>> classes = {
      {"location", "location"}, {"country", "location"},  {"city", "location"},
      {"place", "location"},    {"region", "location"},   {"state", "location"},
      {"continent", "location"}, {"river", "location"},   {"mountain", "location"},
      {"person", "person"},     {"people", "person"},     {"organization", "organization"},
      {"company", "organization"}, {"team", "organization"}, {"university", "organization"},
      {"date", "date"},         {"year", "date"}};
  const auto lower = text::to_lower(label);
  auto it = classes.find(lower);
  return it == classes.end() ? lower : it->second;
}

bool semantic_conflict(const AnswerToken& token) {
  if (token.ner.empty() || token.gkg.empty()) return false;
  for (const auto& a : token.ner.values())
    for (const auto& b : token.gkg.values())
      if (coarse_entity_class(a) == coarse_entity_class(b)) return false;
  return true;
}

ScoreBreakdown estimate_score(const QuestionCandidate& candidate, const TransformationRule& rule,
                              const RuleStore& store, const ScoreOptions& options) {
  ScoreBreakdown b;
  b.sent_sim = candidate.match.score;
  b.quest_sim = similarity(candidate.question_cp, rule.question_cp).score;
  b.application_rate = static_cast<double>(rule.application_count) /
                       static_cast<double>(store.max_application_count());
  b.success_rate = rule.success_rate();
  b.product = b.sent_sim * b.quest_sim * b.application_rate * b.success_rate;
  b.semantic_conflict = std::any_of(candidate.answer_tokens.begin(), candidate.answer_tokens.end(),
                                    [](const AnswerToken& t) { return semantic_conflict(t); });
  if (b.semantic_conflict) b.product *= options.conflict_penalty;
  return b;
}

void score_candidates(std::vector<QuestionCandidate>& candidates, const RuleStore& store,
                      const ScoreOptions& options) {
  for (auto& c : candidates) {
    const auto* rule = store.find(c.rule_id);
    c.estimated_score = rule ? estimate_score(c, *rule, store, options).product : 0.0;
  }
}

// ---------------------------------------------------------------------------
// Reward and feedback

namespace {

std::string lemma_key(const CompositePattern& cp) { return text::to_lower(pattern_key(cp, LayerId::Lemma)); }

}  // namespace

TrainingQuestionIndex TrainingQuestionIndex::from_store(const RuleStore& store) {
  TrainingQuestionIndex index;
  for (const auto& [id, rule] : store.rules())
    if (rule.origin == RuleOrigin::Trained) index.add(rule.question_cp);
  return index;
}

void TrainingQuestionIndex::add(const CompositePattern& question_cp) { keys_.insert(lemma_key(question_cp)); }

bool TrainingQuestionIndex::contains(const CompositePattern& question_cp) const {
  return keys_.contains(lemma_key(question_cp));
}

double reward(const CompositePattern& question_cp, const TransformationRule& rule,
              const TrainingQuestionIndex& training_questions) {
  if (training_questions.contains(question_cp)) return 1.0;
  return similarity(question_cp, rule.question_cp).score * rule.success_rate();
}

void apply_feedback(RuleStore& store, const Rating& rating, RuleId rule_id) {
  if (rating.skipped) return;
  rating.validate();
  const auto* rule = store.find(rule_id);
  if (!rule) throw InputError("unknown rule " + std::to_string(rule_id));
  store.set_statistics(rule_id, rule->application_count + 1, rule->success_sum + rating.value());
}

void apply_feedback(RuleStore& store, const Rating& rating, const QuestionCandidate& candidate) {
  apply_feedback(store, rating, candidate.rule_id);
}

// ---------------------------------------------------------------------------
// Filtering

namespace {

bool ranks_before(const QuestionCandidate& a, const QuestionCandidate& b) {
  if (a.estimated_score != b.estimated_score) return a.estimated_score > b.estimated_score;
  if (a.rule_id != b.rule_id) return a.rule_id < b.rule_id;
  return a.source_id < b.source_id;
}

}  // namespace

std::vector<QuestionCandidate> dedup(std::vector<QuestionCandidate> candidates, double threshold,
                                     bool per_source) {
  std::stable_sort(candidates.begin(), candidates.end(), ranks_before);
  std::vector<QuestionCandidate> kept;
  for (auto& c : candidates) {
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const QuestionCandidate& k) {
      if (k.text == c.text) return true;
      if (per_source && k.source_id != c.source_id) return false;
      return similarity(k.question_cp, c.question_cp).score >= threshold;
    });
    if (!duplicate) kept.push_back(std::move(c));
  }
  return kept;
}

std::vector<QuestionCandidate> rank_and_filter(std::vector<QuestionCandidate> candidates, double min_score,
                                               std::size_t per_sentence_cap) {
  std::stable_sort(candidates.begin(), candidates.end(), ranks_before);
  std::vector<QuestionCandidate> out;
  std::map<std::string, std::size_t> per_source;
  for (auto& c : candidates) {
    if (c.estimated_score < min_score) continue;
    auto& count = per_source[c.source_id];
    if (per_sentence_cap > 0 && count >= per_sentence_cap) continue;
    ++count;
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ratings CSV

namespace {

std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(v);
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_value(const std::optional<double>& v) {
  if (!v) return {};
  if (*v == 1.0) return "1.0";
  if (*v == 0.5) return "0.5";
  if (*v == 0.0) return "0.0";
  return std::to_string(*v);
}

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

std::vector<CsvRecord> parse_csv(std::string_view in, std::string_view origin) {
  std::vector<CsvRecord> records;
  CsvRecord rec;
  std::string field;
  bool quoted = false, field_started = false;
  std::size_t line = 1;
  rec.line = 1;
  auto end_field = [&] {
    rec.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(rec.fields.size() == 1 && rec.fields[0].empty())) records.push_back(std::move(rec));
    rec = CsvRecord{};
    rec.line = line;
  };
  for (std::size_t i = 0; i < in.size(); ++i) {
    const char c = in[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < in.size() && in[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' && i + 1 < in.size() && in[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      ++line;
      end_record();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw InputError(std::string(origin) + ":" + std::to_string(rec.line) + ": unterminated quoted field");
  if (field_started || !rec.fields.empty()) end_record();
  return records;
}

std::optional<double> parse_value(const std::string& s, const std::string& where) {
  const auto v = text::trim(s);
  if (v.empty()) return std::nullopt;
  double d = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw InputError(where + "invalid rating value '" + s + "'");
  return d;
}

}  // namespace

std::string ratings_csv_header() { return "question_id,rater_id,syntax,semantics,skipped,correction,timestamp"; }

std::string format_rating_row(const Rating& r) {
  return csv_field(r.question_id) + "," + csv_field(r.rater_id) + "," + format_value(r.syntax) + "," +
         format_value(r.semantics) + "," + (r.skipped ? "true" : "false") + "," +
         csv_field(r.correction.value_or("")) + "," + csv_field(r.timestamp);
}

std::vector<Rating> parse_ratings_csv(std::string_view contents, std::string_view origin) {
  std::vector<Rating> ratings;
  auto records = parse_csv(contents, origin);
  std::size_t first = 0;
  if (!records.empty() && !records[0].fields.empty() && records[0].fields[0] == "question_id") first = 1;
  for (std::size_t k = first; k < records.size(); ++k) {
    const auto& rec = records[k];
    const auto where = std::string(origin) + ":" + std::to_string(rec.line) + ": ";
    if (rec.fields.size() != 7)
      throw InputError(where + "expected 7 columns, found " + std::to_string(rec.fields.size()));
    Rating r;
    r.question_id = rec.fields[0];
    r.rater_id = rec.fields[1];
    r.syntax = parse_value(rec.fields[2], where);
    r.semantics = parse_value(rec.fields[3], where);
    const auto skipped = text::to_lower(text::trim(rec.fields[4]));
    if (skipped == "true" || skipped == "1")
      r.skipped = true;
    else if (skipped == "false" || skipped == "0" || skipped.empty())
      r.skipped = false;
    else
      throw InputError(where + "invalid skipped flag '" + rec.fields[4] + "'");
    if (!rec.fields[5].empty()) r.correction = rec.fields[5];
    r.timestamp = rec.fields[6];
    try {
      r.validate();
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
    ratings.push_back(std::move(r));
  }
  return ratings;
}

std::vector<Rating> load_ratings(const std::string& path) { return parse_ratings_csv(read_file(path), path); }

void append_rating(const std::string& path, const Rating& rating) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw InputError("cannot append to " + path);
  if (fresh) out << ratings_csv_header() << '\n';
  out << format_rating_row(rating) << '\n';
  out.flush();
  if (!out) throw InputError("write failed for " + path);
}

}  // namespace qgen
