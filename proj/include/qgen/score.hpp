// Question quality estimation, rewards, feedback and candidate filtering.

#ifndef QGEN_SCORE_HPP
#define QGEN_SCORE_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qgen/generate.hpp"
#include "qgen/pattern.hpp"
#include "qgen/rules.hpp"

namespace qgen {

struct Rating {
  std::string question_id;
  std::string rater_id;
  std::optional<double> syntax;     // one of 1.0, 0.5, 0.0 unless skipped
  std::optional<double> semantics;
  bool skipped = false;
  std::optional<std::string> correction;
  std::string timestamp;

  /// (syntax + semantics) / 2 on the +1 / +0.5 / +0 scale; 0 for skipped ratings.
  double value() const;
  /// Throws InputError when values are off the three-step scale.
  void validate() const;

  friend bool operator==(const Rating&, const Rating&) = default;
};

bool is_scale_value(double v);

struct ScoreBreakdown {
  double sent_sim = 0.0;
  double quest_sim = 0.0;
  double application_rate = 0.0;
  double success_rate = 0.0;
  double product = 0.0;
  bool semantic_conflict = false;  // product already halved when true
};

struct ScoreOptions {
  double conflict_penalty = 0.5;
};

/// Coarse entity class of a GKG label ("country" -> "location"), or the label itself.
std::string coarse_entity_class(std::string_view gkg_label);
/// True when Ner and Gkg both label a token and name different entity classes.
bool semantic_conflict(const AnswerToken& token);

ScoreBreakdown estimate_score(const QuestionCandidate& candidate, const TransformationRule& rule,
                              const RuleStore& store, const ScoreOptions& options = {});

/// Fills estimated_score for every candidate produced by a rule of `store`.
void score_candidates(std::vector<QuestionCandidate>& candidates, const RuleStore& store,
                      const ScoreOptions& options = {});

/// Lemma keys of the questions the store was trained on.
class TrainingQuestionIndex {
 public:
  static TrainingQuestionIndex from_store(const RuleStore& store);
  void add(const CompositePattern& question_cp);
  bool contains(const CompositePattern& question_cp) const;

 private:
  std::set<std::string> keys_;
};

/// 1 for a question of the training set, otherwise
/// similarity(question, rule question) * rule success rate.
double reward(const CompositePattern& question_cp, const TransformationRule& rule,
              const TrainingQuestionIndex& training_questions);

/// Folds one rating into the rule that produced `candidate`. Skipped ratings
/// are ignored; unknown rules throw InputError.
void apply_feedback(RuleStore& store, const Rating& rating, const QuestionCandidate& candidate);
void apply_feedback(RuleStore& store, const Rating& rating, RuleId rule_id);

/// Keeps the best-scored candidate of every group of near-identical questions.
/// With `per_source` the similarity test only compares questions of the same
/// source sentence; identical question texts are always collapsed.
std::vector<QuestionCandidate> dedup(std::vector<QuestionCandidate> candidates, double threshold,
                                     bool per_source = false);

/// Sorts by estimated score, drops those below `min_score` and keeps at most
/// `per_sentence_cap` per source sentence (0 = no cap).
std::vector<QuestionCandidate> rank_and_filter(std::vector<QuestionCandidate> candidates,
                                               double min_score, std::size_t per_sentence_cap);

// Ratings log: CSV question_id,rater_id,syntax,semantics,skipped,correction,timestamp
std::string ratings_csv_header();
std::string format_rating_row(const Rating& rating);
std::vector<Rating> parse_ratings_csv(std::string_view contents, std::string_view origin = "<memory>");
std::vector<Rating> load_ratings(const std::string& path);
void append_rating(const std::string& path, const Rating& rating);

}  // namespace qgen

#endif
