// Question generation: retrieve similar rules, align them to a new sentence
// and replay their edit scripts.

#ifndef QGEN_GENERATE_HPP
#define QGEN_GENERATE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qgen/annotate.hpp"
#include "qgen/morphology.hpp"
#include "qgen/pattern.hpp"
#include "qgen/rules.hpp"

namespace qgen {

/// Partial injective map from rule sentence-pattern slots to target token indices.
struct Alignment {
  std::map<std::size_t, std::size_t> slot_map;

  std::optional<std::size_t> target_of(std::size_t slot) const;
  std::optional<std::size_t> slot_of(std::size_t target) const;
  std::size_t size() const { return slot_map.size(); }
};

/// Greedy layered alignment. Entity layers (Ner, Gkg, Sst) pair runs of
/// identically labelled tokens, so a multi-token name maps onto a name in
/// whatever position it occupies; Lemma and Pos then pair the remaining slots
/// one by one, preferring targets that continue an already aligned neighbour.
Alignment align(const CompositePattern& rule_cp, const CompositePattern& target_cp);

struct AnswerToken {
  LabelSet ner;
  LabelSet gkg;
};

struct QuestionCandidate {
  std::string id;
  std::string text;
  std::string answer;
  RuleId rule_id = 0;
  std::string source_id;
  std::string sentence;  // the (possibly simplified) sentence the question came from
  SimilarityBreakdown match;
  double estimated_score = 0.0;
  CompositePattern question_cp;
  std::vector<AnswerToken> answer_tokens;
};

struct AppliedRule {
  std::string question;
  std::string answer;
  CompositePattern question_cp;
  std::vector<AnswerToken> answer_tokens;
};

/// Throws RuleError("inapplicable rule") or RuleError("guard failed").
AppliedRule apply_rule(const TransformationRule& rule, const AnnotatedSentence& target,
                       const Alignment& alignment, const MorphologyTable& morphology);

struct GenerationOptions {
  double min_similarity = 0.5;
  std::size_t max_rules_per_sentence = 8;
  bool simplify = true;
};

/// For each sentence and its simplifications: look up similar rules, try each
/// one, keep the successes. Throws InputError for an empty store.
std::vector<QuestionCandidate> generate_questions(const std::vector<AnnotatedSentence>& sentences,
                                                  const RuleStore& store,
                                                  const MorphologyTable& morphology,
                                                  const GenerationOptions& options = {});

/// One line of the questions file (JSON-lines).
struct QuestionRecord {
  std::string id;
  std::string source_id;
  std::string sentence;
  std::string question;
  std::string answer;
  RuleId rule_id = 0;
  double match_score = 0.0;
  double estimated_score = 0.0;
  std::string system = "qgen";
};

QuestionRecord to_record(const QuestionCandidate& candidate);
std::string format_question_records(const std::vector<QuestionRecord>& records);
std::vector<QuestionRecord> parse_question_records(std::string_view contents,
                                                   std::string_view origin = "<memory>");

}  // namespace qgen

#endif
