#include <doctest.h>

#include <algorithm>
#include <cstdio>

#include "helpers.hpp"
#include "qgen/rules.hpp"

using namespace qgen;

namespace {

std::string question_text(const TransformationRule& rule) { return detokenize(rule.question_cp.surface); }

TransformationRule extract(const std::string& sentence, const std::string& question,
                           std::optional<std::string> answer, const Toolkit& toolkit = qgen::test::worked()) {
  return extract_rule(annotate(sentence, toolkit.providers, "s"), annotate(question, toolkit.providers, "q"),
                      answer, *toolkit.morphology);
}

}  // namespace

TEST_SUITE("rules") {

TEST_CASE("worked example edit script") {
  const auto rule = extract("The president of Slovakia is Andrej Kiska.", "Who is the president of Slovakia?",
                            "Andrej Kiska");
  const std::vector<EditOp> expected = {
      edit::Remove{5}, edit::Remove{6}, edit::Remove{7}, edit::Insert{"Who", 0},
      edit::Move{4, 1}, edit::Insert{"?", 6},
  };
  CHECK(rule.edits == expected);
  CHECK(rule.answer.start_slot == 5);
  CHECK(rule.answer.end_slot == 6);
  REQUIRE(rule.answer.guard);
  CHECK(*rule.answer.guard == AnswerGuard{LayerId::Ner, "person"});
  CHECK(replay(rule, *qgen::test::worked().morphology) == "Who is the president of Slovakia?");
  CHECK(rule.application_count == 1);
  CHECK(rule.success_rate() == 1.0);
}

TEST_CASE("verb re-inflection is learned as ChangeForm") {
  const auto rule = extract("Peter Sagan comes from Slovakia.", "Where does Peter Sagan come from?", "from Slovakia");
  CHECK(std::find(rule.edits.begin(), rule.edits.end(), EditOp{edit::ChangeForm{2, "VB"}}) != rule.edits.end());
  CHECK(std::find(rule.edits.begin(), rule.edits.end(), EditOp{edit::Insert{"does", 1}}) != rule.edits.end());
  CHECK(replay(rule, *qgen::test::worked().morphology) == "Where does Peter Sagan come from?");
}

TEST_CASE("answer span without an explicit answer") {
  const auto rule = extract("The president of Slovakia is Andrej Kiska.", "Who is the president of Slovakia?",
                            std::nullopt);
  CHECK(rule.answer.start_slot == 5);
  CHECK(rule.answer.end_slot == 6);
}

TEST_CASE("extraction failures") {
  CHECK_THROWS_WITH_AS(extract("Peter Sagan comes from Slovakia.", "Tell me about cycling", "Peter Sagan"),
                       "unalignable pair", RuleError);
  CHECK_THROWS_AS(extract("Peter Sagan comes from Slovakia.", "Peter Sagan comes from Slovakia.", std::nullopt),
                  RuleError);
  CHECK_THROWS_AS(extract("Peter Sagan comes from Slovakia.", "Where does Peter Sagan come from?", "Bratislava"),
                  RuleError);
}

TEST_CASE("describe") {
  CHECK(describe(edit::Insert{"Who", 0}) == "insert('Who'@0)");
  CHECK(describe(edit::Move{4, 1}) == "move(4->1)");
  CHECK(describe(edit::Remove{7}) == "remove(7)");
  CHECK(describe(edit::ChangeForm{2, "VB"}) == "change_form(2, VB)");
}

TEST_CASE("apply_edits capitalization") {
  std::vector<SlotToken> slots = {{"The", "the", "DT", true}, {"capital", "capital", "NN", false},
                                  {"is", "be", "VBZ", false}, {"Prague", "Prague", "NNP", false}};
  const std::vector<EditOp> edits = {edit::Remove{3}, edit::Insert{"What", 0}, edit::Move{2, 1},
                                     edit::Insert{"?", 4}};
  const auto out = apply_edits(edits, slots, *qgen::test::builtin().morphology);
  std::vector<std::string> words;
  for (const auto& t : out) words.push_back(t.text);
  CHECK(words == std::vector<std::string>{"What", "is", "the", "capital", "?"});
  CHECK(out[0].literal.has_value());
  CHECK(out[1].slot == std::optional<std::size_t>{2});
}

TEST_CASE("replay reproduces every training question of the corpus") {
  const auto& toolkit = qgen::test::builtin();
  const auto pairs = load_training_pairs(qgen::test::data_file("corpus/train_pairs.jsonl"));
  REQUIRE(pairs.size() >= 1000);
  std::size_t extracted = 0;
  for (const auto& pair : pairs) {
    TransformationRule rule;
    try {
      rule = extract_rule(annotate(pair.sentence, toolkit.providers, pair.id),
                          annotate(pair.question, toolkit.providers, pair.id + "?"), pair.answer,
                          *toolkit.morphology);
    } catch (const RuleError&) {
      continue;
    }
    ++extracted;
    CHECK(replay(rule, *toolkit.morphology) == pair.question);
    CHECK(rule.answer.start_slot <= rule.answer.end_slot);
    CHECK(rule.answer.end_slot < rule.sentence_cp.token_count);
  }
  CHECK(extracted > pairs.size() * 9 / 10);
}

TEST_CASE("training the ten pairs") {
  TrainingReport report;
  const auto store = train(load_training_pairs(qgen::test::fixture("ten_pairs.jsonl")), qgen::test::worked().providers,
                           *qgen::test::worked().morphology, &report);
  CHECK(report.pairs == 10);
  CHECK(report.extracted == 9);
  CHECK(store.size() == 9);
  REQUIRE(report.failures.size() == 1);
  CHECK(report.failures[0].pair_id == "10");
  CHECK(report.failures[0].reason == "unalignable pair");
  CHECK(store.next_id() == 10);
  CHECK(store.hierarchy().size() == 9);
}

TEST_CASE("duplicate rules are stored once") {
  const auto pairs = load_training_pairs(qgen::test::fixture("worked_example_pairs.jsonl"));
  auto store = qgen::test::worked_store();
  const auto before = store;
  TrainingReport report;
  train_into(store, pairs, qgen::test::worked().providers, *qgen::test::worked().morphology, &report);
  CHECK(report.extracted == 4);
  CHECK(report.added == 0);
  CHECK(store == before);

  auto copy = *store.find(1);
  CHECK_FALSE(store.add(copy).has_value());
}

TEST_CASE("training errors") {
  CHECK_THROWS_AS(train({}, qgen::test::builtin().providers, *qgen::test::builtin().morphology), InputError);
  const std::vector<TrainingPair> hopeless = {{"x", "Peter Sagan comes from Slovakia.", "Tell me about cycling", {}}};
  CHECK_THROWS_AS(train(hopeless, qgen::test::builtin().providers, *qgen::test::builtin().morphology), RuleError);
}

TEST_CASE("training pairs parsing") {
  const auto pairs = parse_training_pairs(
      "{\"id\": \"a\", \"sentence\": \"S.\", \"question\": \"Q?\"}\n\n{\"id\": 7, \"sentence\": \"T.\", "
      "\"question\": \"R?\", \"answer\": \"x\"}\n");
  REQUIRE(pairs.size() == 2);
  CHECK_FALSE(pairs[0].answer);
  CHECK(pairs[1].id == "7");
  CHECK(pairs[1].answer == std::optional<std::string>{"x"});
  CHECK_THROWS_WITH_AS(parse_training_pairs("{\"id\": \"a\"}\n", "p.jsonl"), doctest::Contains("p.jsonl:1"),
                       InputError);
  CHECK_THROWS_AS(parse_training_pairs("not json\n"), InputError);
}

TEST_CASE("store persistence") {
  auto store = qgen::test::worked_store();
  store.set_statistics(2, 5, 3.5);
  const auto text = serialize_store(store);
  const auto loaded = deserialize_store(text);
  CHECK(loaded == store);
  CHECK(serialize_store(loaded) == text);
  CHECK(loaded.find(2)->success_rate() == 0.7);
  CHECK(loaded.hierarchy().size() == store.size());

  SUBCASE("unknown version") {
    auto json = text;
    const auto at = json.find("\"version\": 1");
    REQUIRE(at != std::string::npos);
    json.replace(at, 12, "\"version\": 99");
    CHECK_THROWS_WITH_AS(deserialize_store(json), doctest::Contains("version"), InputError);
  }
  SUBCASE("malformed") {
    CHECK_THROWS_AS(deserialize_store("{"), InputError);
    CHECK_THROWS_AS(load_store("/nonexistent/store.json"), InputError);
  }
  SUBCASE("file round trip") {
    const std::string path = "rules_roundtrip_test.json";
    save_store(store, path);
    CHECK(load_store(path) == store);
    std::remove(path.c_str());
  }
}

TEST_CASE("statistics") {
  auto store = qgen::test::worked_store();
  CHECK(store.max_application_count() == 1);
  store.set_statistics(3, 4, 2.0);
  CHECK(store.max_application_count() == 4);
  CHECK(store.find(3)->success_rate() == 0.5);
  CHECK_THROWS_AS(store.set_statistics(99, 1, 1.0), InputError);
  CHECK(store.find(99) == nullptr);
}

}  // TEST_SUITE
