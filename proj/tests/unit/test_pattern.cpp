#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "qgen/pattern.hpp"

using namespace qgen;

namespace {

std::vector<CompositePattern> similarity_pair() {
  const auto sentences = load_annotations(qgen::test::fixture("similarity_pair.tsv"));
  return {create_cp(sentences[0]), create_cp(sentences[1])};
}

// Every stored rule scored directly, sorted the way lookup promises.
std::vector<LookupResult> brute_force(const std::vector<std::pair<RuleId, CompositePattern>>& rules,
                                      const CompositePattern& query, double min_similarity, std::size_t max) {
  std::vector<LookupResult> all;
  for (const auto& [id, cp] : rules) {
    auto match = similarity(query, cp);
    if (match.score >= min_similarity) all.push_back({id, match});
  }
  std::sort(all.begin(), all.end(), [](const LookupResult& a, const LookupResult& b) {
    if (a.match.score != b.match.score) return a.match.score > b.match.score;
    return a.rule_id < b.rule_id;
  });
  if (all.size() > max) all.resize(max);
  return all;
}

}  // namespace

TEST_SUITE("pattern") {

TEST_CASE("create_cp") {
  const auto cp = qgen::test::cp_of("Peter Sagan comes from Slovakia.");
  CHECK(pattern_key(cp, LayerId::Pos) == "NNP NNP VBZ IN NNP .");
  CHECK(pattern_key(cp, LayerId::PosSimple) == "NN NN VB IN NN .");
  CHECK(qgen::test::cp_of("Go.").token_count == 2);
  CHECK(qgen::test::cp_of("Peter Sagan comes from Slovakia.") == cp);

  AnnotatedSentence broken = qgen::test::annotated("Peter Sagan comes from Slovakia.");
  broken.layer(LayerId::Ner).pop_back();
  CHECK_THROWS_AS(create_cp(broken), InputError);
}

TEST_CASE("pattern keys render multi-values and empty cells") {
  const auto s = parse_annotations("# id=x\n0\tParis\tParis\tNNP\tperson|location\t_\t_\t_\n");
  CHECK(pattern_key(create_cp(s[0]), LayerId::Ner) == "location|person");
  CHECK(pattern_key(create_cp(s[0]), LayerId::Gkg) == "_");
}

TEST_CASE("per-layer agreement on the fixture pair") {
  const auto cps = similarity_pair();
  const auto& a = cps[0];
  const auto& b = cps[1];
  CHECK(layer_match(a, b, LayerId::Lemma) == LayerMatch{3, 6});
  CHECK(layer_match(a, b, LayerId::Pos) == LayerMatch{6, 6});
  CHECK(layer_match(a, b, LayerId::PosSimple) == LayerMatch{6, 6});
  CHECK(layer_match(a, b, LayerId::Ner) == LayerMatch{0, 2});
  CHECK(layer_match(a, b, LayerId::Sst) == LayerMatch{1, 3});
  CHECK(layer_match(a, b, LayerId::Gkg) == LayerMatch{1, 2});
  CHECK(layer_match(a, b, LayerId::Viaf) == LayerMatch{0, 0});

  const auto sim = similarity(a, b);
  CHECK(sim.matched_total == 17);
  CHECK(sim.comparable_total == 25);
  CHECK(sim.score == 17.0 / 25.0);
}

TEST_CASE("similarity edge cases") {
  const auto cp = qgen::test::cp_of("The president of Slovakia is Andrej Kiska.");
  CHECK(similarity(cp, cp).score == 1.0);

  CompositePattern empty;
  CHECK(similarity(empty, empty).score == 0.0);
  CHECK(similarity(cp, empty).score == 0.0);

  const auto x = parse_annotations("# id=x\n0\tfoo\tfoo\tAA\tp\tq\tr\ts\n1\tbar\tbar\tBB\tp\tq\tr\ts\n");
  const auto y = parse_annotations("# id=y\n0\tbaz\tbaz\tCC\tt\tu\tv\tw\n1\tqux\tqux\tDD\tt\tu\tv\tw\n");
  CHECK(similarity(create_cp(x[0]), create_cp(y[0])).score == 0.0);
}

TEST_CASE("lemma comparison ignores case") {
  const auto a = parse_annotations("# id=a\n0\tThe\tThe\tDT\t_\t_\t_\t_\n1\tend\tend\tNN\t_\t_\t_\t_\n");
  const auto b = parse_annotations("# id=b\n0\tthe\tthe\tDT\t_\t_\t_\t_\n1\tend\tend\tNN\t_\t_\t_\t_\n");
  CHECK(layer_match(create_cp(a[0]), create_cp(b[0]), LayerId::Lemma) == LayerMatch{2, 2});
}

TEST_CASE("unequal lengths fall back to subsequence matching") {
  const auto a = qgen::test::cp_of("Peter Sagan comes from Slovakia.");
  const auto b = qgen::test::cp_of("Peter Sagan comes from the north of Slovakia.");
  const auto pos = layer_match(a, b, LayerId::Pos);
  CHECK(pos.comparable == 9);
  CHECK(pos.matched == 6);
  const auto ner = layer_match(a, b, LayerId::Ner);
  CHECK(ner == LayerMatch{3, 3});
}

TEST_CASE("similarity properties on random patterns") {
  qgen::test::PatternFactory factory(2024);
  for (int i = 0; i < 300; ++i) {
    const auto a = create_cp(factory.sentence());
    const auto b = create_cp(factory.sentence());
    const auto ab = similarity(a, b);
    const auto ba = similarity(b, a);
    CHECK(ab.score == ba.score);
    CHECK(ab.score >= 0.0);
    CHECK(ab.score <= 1.0);
    CHECK(similarity(a, a).score == 1.0);
    for (LayerId layer : kAllLayers) {
      const auto m = layer_match(a, b, layer);
      CHECK(m.matched <= m.comparable);
      CHECK(m.comparable <= std::max(a.token_count, b.token_count));
    }
  }
}

TEST_CASE("hierarchy insert") {
  PatternHierarchy h;
  auto cp = std::make_shared<const CompositePattern>(qgen::test::cp_of("Peter Sagan comes from Slovakia."));
  CHECK(h.insert(cp, 1));
  REQUIRE(h.roots().size() == 1);
  const auto& root = h.roots().begin()->second;
  CHECK(root.key == "NN NN VB IN NN .");
  REQUIRE(root.children.size() == 1);
  CHECK(root.children.begin()->first == "NNP NNP VBZ IN NNP .");

  SUBCASE("same POS, different entities share one leaf") {
    auto other = std::make_shared<const CompositePattern>(qgen::test::cp_of("Milan Kral comes from Vienna."));
    CHECK(h.insert(other, 2));
    CHECK(h.roots().size() == 1);
    CHECK(h.roots().begin()->second.children.begin()->second.entries.size() == 2);
  }
  SUBCASE("duplicate id under the same leaf is a no-op") {
    const auto before = warning_count();
    CHECK_FALSE(h.insert(cp, 1));
    CHECK(h.size() == 1);
    CHECK(warning_count() == before + 1);
  }
  SUBCASE("erase") {
    CHECK(h.erase(1));
    CHECK(h.empty());
    CHECK(h.roots().empty());
    CHECK_FALSE(h.erase(1));
  }
}

TEST_CASE("hierarchy well-formedness") {
  qgen::test::PatternFactory factory(5);
  PatternHierarchy h;
  for (RuleId id = 1; id <= 60; ++id)
    h.insert(std::make_shared<const CompositePattern>(create_cp(factory.sentence(2, 5))), id);
  CHECK(h.size() == 60);
  for (const auto& [key, root] : h.roots()) {
    CHECK(root.key == key);
    for (const auto& [pos_key, leaf] : root.children) {
      std::vector<std::string> simplified;
      for (const auto& tag : text::split(pos_key, ' ')) simplified.push_back(simplify_pos(tag));
      CHECK(text::join(simplified, " ") == key);
    }
  }
}

TEST_CASE("lookup on the worked example store") {
  const auto store = qgen::test::worked_store();
  const auto query = qgen::test::cp_of("Bhumibol Adulyadej was the king of Thailand.", qgen::test::worked());
  const auto results = store.hierarchy().lookup(query, 0.0, 8);
  REQUIRE_FALSE(results.empty());
  CHECK(results.front().rule_id == 1);
  CHECK(store.find(1)->sentence_cp.surface.front() == "The");

  SUBCASE("exact hit ranks first with score 1") {
    const auto& rule = *store.find(4);
    const auto hit = store.hierarchy().lookup(rule.sentence_cp, 0.0, 8);
    REQUIRE_FALSE(hit.empty());
    CHECK(hit.front().rule_id == 4);
    CHECK(hit.front().match.score == 1.0);
  }
  SUBCASE("nothing reaches similarity 1 for a foreign sentence") {
    CHECK(store.hierarchy().lookup(qgen::test::cp_of("Run!"), 1.0, 8).empty());
  }
  SUBCASE("empty hierarchy") {
    CHECK(PatternHierarchy{}.lookup(query, 0.0, 8).empty());
  }
}

TEST_CASE("hierarchy lookup equals brute force") {
  qgen::test::PatternFactory factory(77);
  for (int round = 0; round < 60; ++round) {
    PatternHierarchy h;
    std::vector<std::pair<RuleId, CompositePattern>> rules;
    const std::size_t count = factory.uniform(1, 50);
    for (RuleId id = 1; id <= count; ++id) {
      auto cp = create_cp(factory.sentence(2, 6));
      rules.emplace_back(id, cp);
      h.insert(std::make_shared<const CompositePattern>(cp), id);
    }
    for (int q = 0; q < 5; ++q) {
      const auto query = create_cp(factory.sentence(2, 6));
      const double min_sim = factory.chance(0.5) ? 0.0 : 0.4;
      const std::size_t max = factory.uniform(1, 10);
      const auto got = h.lookup(query, min_sim, max);
      const auto want = brute_force(rules, query, min_sim, max);
      REQUIRE(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].rule_id == want[i].rule_id);
        CHECK(got[i].match.score == want[i].match.score);
      }
    }
  }
}

TEST_CASE("adding rules never hides a previously reachable rule") {
  qgen::test::PatternFactory factory(9);
  PatternHierarchy h;
  const auto query = create_cp(factory.sentence(3, 5));
  for (RuleId id = 1; id <= 30; ++id) {
    const auto before = h.lookup(query, 0.0, 1000);
    h.insert(std::make_shared<const CompositePattern>(create_cp(factory.sentence(2, 6))), id);
    const auto after = h.lookup(query, 0.0, 1000);
    for (const auto& r : before) {
      CHECK(std::any_of(after.begin(), after.end(), [&](const LookupResult& x) { return x.rule_id == r.rule_id; }));
    }
  }
}

TEST_CASE("similarity bound is sound") {
  qgen::test::PatternFactory factory(31);
  for (int i = 0; i < 500; ++i) {
    const auto a = create_cp(factory.sentence(2, 7));
    const auto b = create_cp(factory.sentence(2, 7));
    if (pattern_key(a, LayerId::PosSimple) == pattern_key(b, LayerId::PosSimple)) continue;
    const auto m = layer_match(a, b, LayerId::PosSimple);
    CHECK(similarity(a, b).score <= PatternHierarchy::similarity_bound(m) + 1e-12);
  }
}

}  // TEST_SUITE
