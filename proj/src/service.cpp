#include "qgen/service.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace qgen {

namespace {

using Effective = std::map<std::string, Rating>;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Baseline statistics plus every effective rating, folded in pool order and
// rater order so that live updates and replays sum identically.
void fold(RuleStore& store, const RuleStore& baseline, const std::vector<const QuestionRecord*>& records,
          const std::vector<const Effective*>& effective, std::optional<RuleId> only) {
  for (const auto& [id, rule] : baseline.rules()) {
    if (only && *only != id) continue;
    if (store.find(id)) store.set_statistics(id, rule.application_count, rule.success_sum);
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RuleId rule_id = records[i]->rule_id;
    if ((only && *only != rule_id) || !store.find(rule_id)) continue;
    for (const auto& [rater, rating] : *effective[i]) apply_feedback(store, rating, rule_id);
  }
}

}  // namespace

EvaluationService::EvaluationService(std::vector<QuestionRecord> pool, RuleStore store, ServiceOptions options)
    : baseline_(store), store_(std::move(store)), options_(std::move(options)), rng_(options_.seed) {
  for (auto& record : pool) {
    if (index_.contains(record.id)) throw InputError("duplicate question id '" + record.id + "'");
    index_.emplace(record.id, pool_.size());
    pool_.push_back(QuestionState{std::move(record), {}});
  }
  if (!options_.ratings_log.empty() && std::filesystem::exists(options_.ratings_log)) {
    for (const auto& r : load_ratings(options_.ratings_log)) {
      if (!index_.contains(r.question_id)) {
        warn("ratings log refers to unknown question '" + r.question_id + "'");
        continue;
      }
      ingest(r);
    }
    recompute();
  }
}

std::size_t EvaluationService::effective_votes(const QuestionState& q) {
  return static_cast<std::size_t>(
      std::count_if(q.effective.begin(), q.effective.end(), [](const auto& e) { return !e.second.skipped; }));
}

void EvaluationService::ingest(const Rating& rating) {
  log_.push_back(rating);
  pool_[index_.at(rating.question_id)].effective[rating.rater_id] = rating;
}

void EvaluationService::recompute(std::optional<RuleId> only) {
  std::vector<const QuestionRecord*> records;
  std::vector<const Effective*> effective;
  for (const auto& q : pool_) {
    records.push_back(&q.record);
    effective.push_back(&q.effective);
  }
  fold(store_, baseline_, records, effective, only);
}

std::vector<ServedQuestion> EvaluationService::next_questions(const std::string& rater_id, std::size_t batch_size) {
  std::unique_lock lock(mutex_);
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < pool_.size(); ++i) {
    const auto& q = pool_[i];
    if (q.effective.contains(rater_id) || effective_votes(q) >= options_.max_votes) continue;
    open.push_back(i);
  }
  std::shuffle(open.begin(), open.end(), rng_);
  std::stable_sort(open.begin(), open.end(), [&](std::size_t a, std::size_t b) {
    return effective_votes(pool_[a]) < effective_votes(pool_[b]);
  });
  if (open.size() > batch_size) open.resize(batch_size);
  std::vector<ServedQuestion> out;
  for (std::size_t i : open) out.push_back({pool_[i].record.id, pool_[i].record.sentence, pool_[i].record.question});
  return out;
}

PostResult EvaluationService::post_rating(Rating rating) {
  try {
    rating.validate();
  } catch (const InputError& e) {
    return {PostStatus::Malformed, e.what()};
  }
  if (rating.timestamp.empty()) rating.timestamp = utc_now();

  std::unique_lock lock(mutex_);
  auto it = index_.find(rating.question_id);
  if (it == index_.end()) return {PostStatus::UnknownQuestion, "unknown question '" + rating.question_id + "'"};
  if (!options_.ratings_log.empty()) append_rating(options_.ratings_log, rating);
  ingest(rating);
  recompute(pool_[it->second].record.rule_id);
  if (!options_.store_out.empty()) save_store(store_, options_.store_out);
  if (rating.skipped) return {PostStatus::Skipped, "skipped"};
  return {PostStatus::Accepted, "accepted"};
}

ServiceReport EvaluationService::report() const {
  std::shared_lock lock(mutex_);
  ServiceReport report;
  std::map<std::string, SystemReport> by_system;
  std::map<std::string, std::size_t> rated;  // questions with at least one verdict
  std::vector<std::string> order;
  for (const auto& q : pool_) {
    auto [it, fresh] = by_system.try_emplace(q.record.system);
    if (fresh) {
      it->second.system = q.record.system;
      order.push_back(q.record.system);
    }
    auto& s = it->second;
    ++s.questions;
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& [rater, r] : q.effective) {
      if (r.skipped) {
        ++report.skipped;
        continue;
      }
      ++count;
      sum += r.value();
      s.avg_score += r.value();
      s.syntax_score += *r.syntax;
      s.semantics_score += *r.semantics;
    }
    if (count == 0) continue;
    s.ratings += count;
    ++rated[q.record.system];
    if (sum / static_cast<double>(count) >= options_.correct_threshold) ++s.correct;
  }
  for (const auto& name : order) {
    auto s = by_system.at(name);
    if (s.ratings > 0) {
      const double n = static_cast<double>(s.ratings);
      s.avg_score /= n;
      s.syntax_score /= n;
      s.semantics_score /= n;
      s.correctness = 100.0 * static_cast<double>(s.correct) / static_cast<double>(rated.at(name));
    }
    report.total_questions += s.questions;
    report.total_ratings += s.ratings;
    report.systems.push_back(s);
  }
  return report;
}

RuleStore EvaluationService::store() const {
  std::shared_lock lock(mutex_);
  return store_;
}

std::vector<Rating> EvaluationService::log() const {
  std::shared_lock lock(mutex_);
  return log_;
}

RuleStore replay_ratings(const RuleStore& baseline, const std::vector<QuestionRecord>& pool,
                         const std::vector<Rating>& log) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < pool.size(); ++i) index.emplace(pool[i].id, i);
  std::vector<Effective> effective(pool.size());
  for (const auto& r : log) {
    auto it = index.find(r.question_id);
    if (it != index.end()) effective[it->second][r.rater_id] = r;
  }
  std::vector<const QuestionRecord*> records;
  std::vector<const Effective*> refs;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    records.push_back(&pool[i]);
    refs.push_back(&effective[i]);
  }
  RuleStore store = baseline;
  fold(store, baseline, records, refs, std::nullopt);
  return store;
}

std::string report_to_json(const ServiceReport& report) {
  nlohmann::ordered_json systems = nlohmann::ordered_json::array();
  for (const auto& s : report.systems) {
    systems.push_back({{"system", s.system},
                       {"questions", s.questions},
                       {"ratings", s.ratings},
                       {"avg_score", s.avg_score},
                       {"syntax_score", s.syntax_score},
                       {"semantics_score", s.semantics_score},
                       {"correct", s.correct},
                       {"correctness", s.correctness}});
  }
  nlohmann::ordered_json j{{"systems", std::move(systems)},
                           {"total_questions", report.total_questions},
                           {"total_ratings", report.total_ratings},
                           {"skipped", report.skipped}};
  return j.dump();
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

std::optional<double> verdict(const nlohmann::json& body, const char* key) {
  if (!body.contains(key) || body[key].is_null()) return std::nullopt;
  if (!body[key].is_number()) throw InputError(std::string("field '") + key + "' must be a number");
  return body[key].get<double>();
}

}  // namespace

void register_routes(httplib::Server& server, EvaluationService& service) {
  server.Get("/api/health", [&service](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}, {"questions", service.pool_size()}});
  });

  server.Get("/api/questions", [&service](const httplib::Request& req, httplib::Response& res) {
    const auto rater = req.get_param_value("rater");
    if (rater.empty()) return send_error(res, 400, "missing rater parameter");
    std::size_t n = 5;
    if (req.has_param("n")) {
      try {
        const auto value = std::stoll(req.get_param_value("n"));
        if (value < 1 || value > 1000) throw std::out_of_range("n");
        n = static_cast<std::size_t>(value);
      } catch (const std::exception&) {
        return send_error(res, 400, "n must be an integer between 1 and 1000");
      }
    }
    nlohmann::json items = nlohmann::json::array();
    for (const auto& q : service.next_questions(rater, n))
      items.push_back({{"question_id", q.question_id}, {"sentence", q.sentence}, {"question", q.question}});
    send_json(res, 200, {{"rater", rater}, {"questions", std::move(items)}});
  });

  server.Post("/api/ratings", [&service](const httplib::Request& req, httplib::Response& res) {
    Rating rating;
    try {
      const auto body = nlohmann::json::parse(req.body);
      if (!body.is_object()) throw InputError("body must be a JSON object");
      if (!body.contains("question_id") || !body["question_id"].is_string())
        throw InputError("missing question_id");
      if (!body.contains("rater_id") || !body["rater_id"].is_string()) throw InputError("missing rater_id");
      rating.question_id = body["question_id"].get<std::string>();
      rating.rater_id = body["rater_id"].get<std::string>();
      rating.syntax = verdict(body, "syntax");
      rating.semantics = verdict(body, "semantics");
      if (body.contains("skipped") && !body["skipped"].is_null()) {
        if (!body["skipped"].is_boolean()) throw InputError("field 'skipped' must be a boolean");
        rating.skipped = body["skipped"].get<bool>();
      }
      if (body.contains("correction") && body["correction"].is_string() &&
          !body["correction"].get<std::string>().empty())
        rating.correction = body["correction"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      return send_error(res, 400, std::string("invalid JSON: ") + e.what());
    } catch (const InputError& e) {
      return send_error(res, 400, e.what());
    }
    const auto result = service.post_rating(std::move(rating));
    switch (result.status) {
      case PostStatus::Accepted:
      case PostStatus::Skipped:
        return send_json(res, 200, {{"status", result.message}});
      case PostStatus::UnknownQuestion:
        return send_error(res, 404, result.message);
      case PostStatus::Malformed:
        return send_error(res, 400, result.message);
    }
  });

  server.Get("/api/report", [&service](const httplib::Request&, httplib::Response& res) {
    res.status = 200;
    res.set_content(report_to_json(service.report()), "application/json");
  });

  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      if (ep) std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    }
    send_error(res, 500, message);
  });
}

}  // namespace qgen
