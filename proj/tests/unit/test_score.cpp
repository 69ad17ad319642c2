#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "helpers.hpp"
#include "qgen/score.hpp"

using namespace qgen;

namespace {

CompositePattern one_token(const std::string& lemma) {
  return create_cp(parse_annotations("# id=" + lemma + "\n0\t" + lemma + "\t" + lemma + "\tNN\tperson\tcity\t_\t_\n")[0]);
}

Rating verdict(std::string question, std::string rater, double syntax, double semantics) {
  Rating r;
  r.question_id = std::move(question);
  r.rater_id = std::move(rater);
  r.syntax = syntax;
  r.semantics = semantics;
  r.timestamp = "2024-01-01T00:00:00Z";
  return r;
}

QuestionCandidate candidate(const std::string& text, RuleId rule, double score, const CompositePattern& cp,
                            std::string source = "s1") {
  QuestionCandidate c;
  c.text = text;
  c.rule_id = rule;
  c.estimated_score = score;
  c.question_cp = cp;
  c.source_id = std::move(source);
  return c;
}

}  // namespace

TEST_SUITE("score") {

TEST_CASE("reward arithmetic") {
  TransformationRule rule;
  rule.question_cp = one_token("y");
  rule.application_count = 10;
  rule.success_sum = 9.0;
  const auto question = one_token("x");
  REQUIRE(similarity(question, rule.question_cp).score == 0.8);
  CHECK(reward(question, rule, TrainingQuestionIndex{}) == doctest::Approx(0.72).epsilon(1e-12));
  CHECK(std::abs(reward(question, rule, TrainingQuestionIndex{}) - 0.72) < 1e-12);

  TrainingQuestionIndex index;
  index.add(one_token("X"));
  CHECK(reward(question, rule, index) == 1.0);
}

TEST_CASE("training questions earn the full reward") {
  const auto store = qgen::test::worked_store();
  const auto index = TrainingQuestionIndex::from_store(store);
  for (const auto& [id, rule] : store.rules()) CHECK(reward(rule.question_cp, rule, index) == 1.0);
  CHECK_FALSE(index.contains(qgen::test::cp_of("Who was the king of Thailand?")));
}

TEST_CASE("estimated score is the product of its factors") {
  auto store = qgen::test::worked_store();
  store.set_statistics(1, 2, 1.0);
  const auto& rule = *store.find(1);
  QuestionCandidate c;
  c.rule_id = 1;
  c.match.score = 0.5;
  c.question_cp = rule.question_cp;
  const auto b = estimate_score(c, rule, store);
  CHECK(b.sent_sim == 0.5);
  CHECK(b.quest_sim == 1.0);
  CHECK(b.application_rate == 1.0);
  CHECK(b.success_rate == 0.5);
  CHECK(b.product == 0.25);
  CHECK_FALSE(b.semantic_conflict);

  SUBCASE("entity class conflict halves the score") {
    c.answer_tokens = {AnswerToken{LabelSet{"person"}, LabelSet{"country"}}};
    const auto conflicted = estimate_score(c, rule, store);
    CHECK(conflicted.semantic_conflict);
    CHECK(conflicted.product == 0.125);
  }
  SUBCASE("application rate is relative to the busiest rule") {
    store.set_statistics(2, 4, 4.0);
    CHECK(estimate_score(c, *store.find(1), store).application_rate == 0.5);
  }
}

TEST_CASE("semantic conflict") {
  CHECK_FALSE(semantic_conflict({LabelSet{"location"}, LabelSet{"country"}}));
  CHECK_FALSE(semantic_conflict({LabelSet{"location"}, LabelSet{"city"}}));
  CHECK_FALSE(semantic_conflict({LabelSet{"person"}, LabelSet{}}));
  CHECK_FALSE(semantic_conflict({LabelSet{"person", "location"}, LabelSet{"city"}}));
  CHECK(semantic_conflict({LabelSet{"organization"}, LabelSet{"person"}}));
  CHECK(coarse_entity_class("Country") == "location");
  CHECK(coarse_entity_class("galaxy") == "galaxy");
}

TEST_CASE("feedback ordering of cloned rules") {
  const auto base = qgen::test::worked_store();
  auto a = *base.find(1);
  auto b = a;
  b.id = 2;
  auto store = RuleStore::from_rules({a, b}, 3);
  const auto pristine = store;

  std::vector<std::pair<Rating, RuleId>> log;
  for (int i = 0; i < 3; ++i) {
    log.emplace_back(verdict("qa", "r" + std::to_string(i), 1.0, 1.0), 1);
    log.emplace_back(verdict("qb", "r" + std::to_string(i), 0.0, 0.0), 2);
  }
  for (const auto& [rating, rule] : log) apply_feedback(store, rating, rule);
  CHECK(store.find(1)->success_rate() == 1.0);
  CHECK(store.find(2)->success_rate() == 0.25);

  std::vector<QuestionCandidate> candidates;
  for (RuleId id : {2, 1}) {
    QuestionCandidate c = candidate("Who is it?", id, 0.0, a.question_cp, "s" + std::to_string(id));
    c.match.score = 0.8;
    candidates.push_back(c);
  }
  score_candidates(candidates, store);
  const auto ranked = rank_and_filter(candidates, 0.0, 0);
  CHECK(ranked[0].rule_id == 1);
  CHECK(ranked[1].rule_id == 2);
  CHECK(ranked[0].estimated_score > ranked[1].estimated_score);

  auto replayed = pristine;
  for (const auto& [rating, rule] : log) apply_feedback(replayed, rating, rule);
  CHECK(replayed == store);
}

TEST_CASE("feedback details") {
  auto store = qgen::test::worked_store();
  apply_feedback(store, verdict("q", "r", 1.0, 0.5), 1);
  CHECK(store.find(1)->application_count == 2);
  CHECK(store.find(1)->success_sum == 1.75);

  Rating skip;
  skip.question_id = "q";
  skip.rater_id = "r";
  skip.skipped = true;
  apply_feedback(store, skip, 1);
  CHECK(store.find(1)->application_count == 2);

  CHECK_THROWS_AS(apply_feedback(store, verdict("q", "r", 1.0, 1.0), 42), InputError);
  CHECK_THROWS_AS(apply_feedback(store, verdict("q", "r", 0.7, 1.0), 1), InputError);
}

TEST_CASE("rating validation") {
  CHECK(verdict("q", "r", 1.0, 0.5).value() == 0.75);
  CHECK_NOTHROW(verdict("q", "r", 0.0, 0.0).validate());
  CHECK_THROWS_AS(verdict("", "r", 1.0, 1.0).validate(), InputError);
  CHECK_THROWS_AS(verdict("q", "", 1.0, 1.0).validate(), InputError);
  CHECK_THROWS_AS(verdict("q", "r", 0.25, 1.0).validate(), InputError);
  auto skipped = verdict("q", "r", 1.0, 1.0);
  skipped.skipped = true;
  CHECK_THROWS_AS(skipped.validate(), InputError);
  CHECK(skipped.value() == 0.0);
  auto half = verdict("q", "r", 1.0, 1.0);
  half.semantics.reset();
  CHECK_THROWS_AS(half.validate(), InputError);
  CHECK(is_scale_value(0.5));
  CHECK_FALSE(is_scale_value(0.75));
}

TEST_CASE("dedup collapses near-identical questions") {
  const auto is = qgen::test::cp_of("Who is the king of Thailand?");
  const auto was = qgen::test::cp_of("Who was the king of Thailand?");
  REQUIRE(similarity(is, was).score >= 0.9);
  const auto out = dedup({candidate("Who is the king of Thailand?", 1, 0.4, is),
                          candidate("Who was the king of Thailand?", 2, 0.6, was)},
                         0.9);
  REQUIRE(out.size() == 1);
  CHECK(out[0].text == "Who was the king of Thailand?");

  SUBCASE("per source keeps other sentences' questions") {
    const auto split = dedup({candidate("Who is the king of Thailand?", 1, 0.4, is, "a"),
                              candidate("Who was the king of Thailand?", 2, 0.6, was, "b"),
                              candidate("Who was the king of Thailand?", 3, 0.5, was, "c")},
                             0.9, true);
    CHECK(split.size() == 2);
  }
}

TEST_CASE("dedup property on random candidate sets") {
  qgen::test::PatternFactory factory(404);
  for (int round = 0; round < 100; ++round) {
    std::vector<QuestionCandidate> cs;
    const std::size_t n = factory.uniform(1, 25);
    std::vector<CompositePattern> pool;
    for (std::size_t i = 0; i < n; ++i) {
      if (!pool.empty() && factory.chance(0.3)) {
        pool.push_back(pool[factory.uniform(0, pool.size() - 1)]);
      } else {
        pool.push_back(create_cp(factory.sentence(2, 5)));
      }
      const auto text = "q" + std::to_string(factory.uniform(0, n));
      cs.push_back(candidate(text, i + 1, static_cast<double>(factory.uniform(0, 10)) / 10.0, pool.back(),
                             "s" + std::to_string(factory.uniform(0, 3))));
    }
    const auto out = dedup(cs, 0.9);
    CHECK_FALSE(out.empty());
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = i + 1; j < out.size(); ++j) {
        CHECK(out[i].text != out[j].text);
        CHECK(similarity(out[i].question_cp, out[j].question_cp).score < 0.9);
      }
    }
    CHECK(dedup(out, 0.9).size() == out.size());
  }
}

TEST_CASE("rank_and_filter") {
  const auto cp = one_token("x");
  std::vector<QuestionCandidate> cs = {candidate("a", 3, 0.2, cp, "s1"), candidate("b", 1, 0.9, cp, "s1"),
                                       candidate("c", 2, 0.9, cp, "s1"), candidate("d", 4, 0.8, cp, "s2")};
  const auto all = rank_and_filter(cs, 0.0, 0);
  REQUIRE(all.size() == 4);
  CHECK(all[0].text == "b");
  CHECK(all[1].text == "c");
  CHECK(all[2].text == "d");
  CHECK(rank_and_filter(cs, 0.5, 0).size() == 3);
  const auto capped = rank_and_filter(cs, 0.0, 1);
  REQUIRE(capped.size() == 2);
  CHECK(capped[0].text == "b");
  CHECK(capped[1].text == "d");
}

TEST_CASE("ratings csv") {
  auto corrected = verdict("q1", "alice", 0.5, 1.0);
  corrected.correction = "Who, \"exactly\", was it?";
  Rating skip;
  skip.question_id = "q2";
  skip.rater_id = "bob";
  skip.skipped = true;
  skip.timestamp = "2024-01-02T00:00:00Z";
  const std::string csv = ratings_csv_header() + "\n" + format_rating_row(corrected) + "\n" + format_rating_row(skip) + "\n";
  const auto parsed = parse_ratings_csv(csv);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0] == corrected);
  CHECK(parsed[1] == skip);

  const auto fixture = load_ratings(qgen::test::fixture("ratings.csv"));
  CHECK_FALSE(fixture.empty());
  for (const auto& r : fixture) CHECK_NOTHROW(r.validate());

  CHECK_THROWS_WITH_AS(parse_ratings_csv(ratings_csv_header() + "\nq1,alice,2,1,false,,t\n", "r.csv"),
                       doctest::Contains("r.csv:2"), InputError);
  CHECK_THROWS_AS(parse_ratings_csv("a,b\n"), InputError);

  SUBCASE("append creates the header once") {
    const std::string path = "ratings_append_test.csv";
    std::remove(path.c_str());
    append_rating(path, corrected);
    append_rating(path, skip);
    CHECK(load_ratings(path) == std::vector<Rating>{corrected, skip});
    CHECK(read_file(path).find(ratings_csv_header()) == 0);
    std::remove(path.c_str());
  }
}

}  // TEST_SUITE
