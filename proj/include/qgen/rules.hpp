// Transformation rules: edit scripts learned from sentence-question pairs,
// the rule store and the training procedure.

#ifndef QGEN_RULES_HPP
#define QGEN_RULES_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "qgen/annotate.hpp"
#include "qgen/morphology.hpp"
#include "qgen/pattern.hpp"

namespace qgen {

namespace edit {

struct Remove {
  std::size_t src_slot;
  friend bool operator==(const Remove&, const Remove&) = default;
  friend auto operator<=>(const Remove&, const Remove&) = default;
};
struct Insert {
  std::string literal;
  std::size_t dst_position;
  friend bool operator==(const Insert&, const Insert&) = default;
  friend auto operator<=>(const Insert&, const Insert&) = default;
};
struct Move {
  std::size_t src_slot;
  std::size_t dst_position;
  friend bool operator==(const Move&, const Move&) = default;
  friend auto operator<=>(const Move&, const Move&) = default;
};
struct ChangeForm {
  std::size_t src_slot;
  std::string target_form_tag;
  friend bool operator==(const ChangeForm&, const ChangeForm&) = default;
  friend auto operator<=>(const ChangeForm&, const ChangeForm&) = default;
};

}  // namespace edit

using EditOp = std::variant<edit::Remove, edit::Insert, edit::Move, edit::ChangeForm>;

std::string describe(const EditOp& op);

struct AnswerGuard {
  LayerId layer;
  std::string label;
  friend bool operator==(const AnswerGuard&, const AnswerGuard&) = default;
};

struct AnswerSpanSpec {
  std::size_t start_slot = 0;
  std::size_t end_slot = 0;  // inclusive
  std::optional<AnswerGuard> guard;
  friend bool operator==(const AnswerSpanSpec&, const AnswerSpanSpec&) = default;
};

enum class RuleOrigin { Trained, Derived };

struct TransformationRule {
  RuleId id = 0;
  CompositePattern sentence_cp;
  CompositePattern question_cp;
  std::vector<EditOp> edits;
  AnswerSpanSpec answer;
  RuleOrigin origin = RuleOrigin::Trained;
  std::uint64_t application_count = 1;
  double success_sum = 1.0;

  double success_rate() const {
    return application_count == 0 ? 0.0 : success_sum / static_cast<double>(application_count);
  }

  friend bool operator==(const TransformationRule&, const TransformationRule&) = default;
};

/// One source token as seen by the edit script.
struct SlotToken {
  std::string surface;
  std::string lemma;
  std::string pos;
  bool sentence_initial = false;
};

/// Where each produced question token came from.
struct QuestionToken {
  std::string text;
  std::optional<std::size_t> slot;     // source slot, for kept/moved tokens
  std::optional<std::size_t> literal;  // question-pattern position, for inserted tokens
  std::optional<std::string> form_tag; // set when ChangeForm rewrote the token
};

/// Runs an edit script over `slots` (one entry per sentence-pattern slot).
///
/// Dropped and moved slots are taken out first, ChangeForm rewrites forms,
/// then Insert and Move place tokens at their question positions in script
/// order. The first token is capitalized; a sentence-initial common word that
/// ends up elsewhere is lowercased.
std::vector<QuestionToken> apply_edits(const std::vector<EditOp>& edits,
                                       const std::vector<SlotToken>& slots,
                                       const MorphologyTable& morphology);

std::vector<SlotToken> slots_of(const CompositePattern& cp);

/// The question a rule produces from its own training sentence.
std::string replay(const TransformationRule& rule, const MorphologyTable& morphology);

/// Learns the edit script turning `sentence` into `question`.
/// Throws RuleError("unalignable pair") or RuleError("no answer span").
TransformationRule extract_rule(const AnnotatedSentence& sentence,
                                const AnnotatedSentence& question,
                                const std::optional<std::string>& answer_text,
                                const MorphologyTable& morphology);

/// Dedup identity of a rule: sentence POS key, question POS key, edit script.
using RuleSignature = std::tuple<std::string, std::string, std::vector<EditOp>>;
RuleSignature signature_of(const TransformationRule& rule);

class RuleStore {
 public:
  static constexpr int kFormatVersion = 1;

  /// Assigns the next id and indexes the rule; returns nullopt for a duplicate.
  std::optional<RuleId> add(TransformationRule rule);

  const TransformationRule* find(RuleId id) const;
  TransformationRule* find_mutable(RuleId id);
  const std::map<RuleId, TransformationRule>& rules() const { return rules_; }
  const PatternHierarchy& hierarchy() const { return hierarchy_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  RuleId next_id() const { return next_id_; }
  std::uint64_t max_application_count() const;

  /// Sets both statistics of a rule together.
  void set_statistics(RuleId id, std::uint64_t application_count, double success_sum);

  /// Rebuilds a store from persisted rules (ids kept as-is).
  static RuleStore from_rules(std::vector<TransformationRule> rules, RuleId next_id);

  friend bool operator==(const RuleStore& a, const RuleStore& b) {
    return a.next_id_ == b.next_id_ && a.rules_ == b.rules_;
  }

 private:
  void index(const TransformationRule& rule);

  std::map<RuleId, TransformationRule> rules_;
  PatternHierarchy hierarchy_;
  std::set<RuleSignature> signatures_;
  RuleId next_id_ = 1;
};

struct TrainingPair {
  std::string id;
  std::string sentence;
  std::string question;
  std::optional<std::string> answer;
};

struct TrainingFailure {
  std::string pair_id;
  std::string reason;
};

struct TrainingReport {
  std::size_t pairs = 0;
  std::size_t extracted = 0;   // pairs that produced a rule
  std::size_t added = 0;       // of which new to the store
  std::vector<TrainingFailure> failures;
};

/// Builds patterns for each pair, extracts its rule and adds it unless an
/// identical rule is already stored. Per-pair failures are collected.
/// Throws InputError for an empty dataset and RuleError if nothing was learned.
RuleStore train(const std::vector<TrainingPair>& pairs, const ProviderList& providers,
                const MorphologyTable& morphology, TrainingReport* report = nullptr);

/// Same, continuing an existing store.
void train_into(RuleStore& store, const std::vector<TrainingPair>& pairs,
                const ProviderList& providers, const MorphologyTable& morphology,
                TrainingReport* report = nullptr);

/// JSON-lines training pairs: {"id", "sentence", "question", "answer"?}.
std::vector<TrainingPair> parse_training_pairs(std::string_view contents,
                                               std::string_view origin = "<memory>");
std::vector<TrainingPair> load_training_pairs(const std::string& path);

std::string serialize_store(const RuleStore& store);
RuleStore deserialize_store(std::string_view contents);
void save_store(const RuleStore& store, const std::string& path);
RuleStore load_store(const std::string& path);

}  // namespace qgen

#endif
