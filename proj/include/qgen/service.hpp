// Human evaluation service: serves question batches, records ratings and
// keeps rule statistics in sync with the ratings log.
//
// The ratings log is the source of truth. Rule statistics are the trained
// baseline plus the last rating of every (rater, question) pair, so replaying
// the log always reproduces them.

#ifndef QGEN_SERVICE_HPP
#define QGEN_SERVICE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "qgen/generate.hpp"
#include "qgen/rules.hpp"
#include "qgen/score.hpp"

namespace httplib {
class Server;
}

namespace qgen {

struct ServedQuestion {
  std::string question_id;
  std::string sentence;
  std::string question;
};

struct SystemReport {
  std::string system;
  std::size_t questions = 0;
  std::size_t ratings = 0;
  double avg_score = 0.0;
  double syntax_score = 0.0;
  double semantics_score = 0.0;
  std::size_t correct = 0;    // questions whose mean rating reaches the threshold
  double correctness = 0.0;  // percent of rated questions that are correct
};

struct ServiceReport {
  std::vector<SystemReport> systems;
  std::size_t total_questions = 0;
  std::size_t total_ratings = 0;
  std::size_t skipped = 0;
};

struct ServiceOptions {
  std::string ratings_log;        // empty -> in-memory only
  std::string store_out;          // empty -> statistics kept in memory
  double correct_threshold = 0.75;
  std::size_t max_votes = 5;
  std::uint64_t seed = 20190611;
};

enum class PostStatus { Accepted, Skipped, UnknownQuestion, Malformed };

struct PostResult {
  PostStatus status;
  std::string message;
};

class EvaluationService {
 public:
  EvaluationService(std::vector<QuestionRecord> pool, RuleStore store, ServiceOptions options = {});

  /// Questions the rater has neither rated nor skipped and that still need
  /// votes, fewest votes first with random tie-breaks.
  std::vector<ServedQuestion> next_questions(const std::string& rater_id, std::size_t batch_size);
  PostResult post_rating(Rating rating);
  ServiceReport report() const;

  /// Current rule statistics (a copy, taken under the reader lock).
  RuleStore store() const;
  std::vector<Rating> log() const;
  std::size_t pool_size() const { return pool_.size(); }

 private:
  struct QuestionState {
    QuestionRecord record;
    std::map<std::string, Rating> effective;  // rater -> last rating (incl. skips)
  };

  static std::size_t effective_votes(const QuestionState& q);
  void ingest(const Rating& rating);
  void recompute(std::optional<RuleId> only = std::nullopt);

  std::vector<QuestionState> pool_;
  std::map<std::string, std::size_t> index_;
  RuleStore baseline_;
  RuleStore store_;
  std::vector<Rating> log_;
  ServiceOptions options_;
  std::mt19937_64 rng_;
  mutable std::shared_mutex mutex_;
};

/// Statistics of every rule recomputed from a baseline store and a ratings log.
RuleStore replay_ratings(const RuleStore& baseline, const std::vector<QuestionRecord>& pool,
                         const std::vector<Rating>& log);

std::string report_to_json(const ServiceReport& report);

/// Registers GET /api/questions, POST /api/ratings, GET /api/report and GET /api/health.
void register_routes(httplib::Server& server, EvaluationService& service);

}  // namespace qgen

#endif
