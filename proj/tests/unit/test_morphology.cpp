#include <doctest.h>

#include "helpers.hpp"
#include "qgen/morphology.hpp"

using namespace qgen;

TEST_SUITE("morphology") {

TEST_CASE("change_form") {
  const auto& table = *qgen::test::builtin().morphology;
  CHECK(change_form(table, "is", "be", "VBD") == "was");
  CHECK(change_form(table, "comes", "come", "VB") == "come");
  CHECK(change_form(table, "Is", "be", "VBD") == "Was");
  CHECK(change_form(table, "was", "be", "VBZ") == "is");
  CHECK(change_form(table, "rides", "ride", "VBD") == "rode");
  CHECK(change_form(table, "walks", "walk", "VBD") == "walked");

  SUBCASE("unknown tag leaves the surface and warns") {
    const auto before = warning_count();
    CHECK(change_form(table, "Slovakia", "Slovakia", "XYZ") == "Slovakia");
    CHECK(warning_count() == before + 1);
  }
}

TEST_CASE("regular fallback") {
  const MorphologyTable empty;
  CHECK(empty.inflect("walk", "VBZ") == "walks");
  CHECK(empty.inflect("walk", "VBD") == "walked");
  CHECK(empty.inflect("walk", "VBG") == "walking");
  CHECK(empty.inflect("walk", "VB") == "walk");
  CHECK(empty.inflect("try", "VBZ") == "tries");
  CHECK(empty.inflect("pass", "VBZ") == "passes");
  CHECK(empty.inflect("city", "NNS") == "cities");
  CHECK(empty.inflect("walk", "IN").empty());
}

TEST_CASE("table entries win over rules") {
  MorphologyTable table;
  table.add("go", "VB", "go");
  table.add("go", "VBD", "went");
  CHECK(table.inflect("go", "VBD") == "went");
  CHECK(table.lookup("go", "VBD") == "went");
  CHECK(table.lookup("go", "VBZ").empty());
  CHECK(table.knows_lemma("go"));
  REQUIRE(table.readings("went").size() == 1);
  CHECK(table.readings("went")[0] == std::pair<std::string, std::string>{"go", "VBD"});
  CHECK(table.readings("unknown").empty());

  MorphologyTable other;
  other.add("go", "VBD", "goed");
  table.merge(other);
  CHECK(table.inflect("go", "VBD") == "goed");
}

TEST_CASE("parse") {
  const auto table = MorphologyTable::parse("# comment\nbe\tVBD\twas\nbe\tVBZ\tis\n\n");
  CHECK(table.size() == 2);
  CHECK(table.lookup("be", "VBZ") == "is");
  CHECK_THROWS_WITH_AS(MorphologyTable::parse("be\tVBD\n", "m.tsv"), doctest::Contains("m.tsv:1"), InputError);
  CHECK_THROWS_AS(MorphologyTable::parse("be VBZ is\n"), InputError);
  CHECK_THROWS_AS(MorphologyTable::load("/nonexistent/morph.tsv"), InputError);
}

TEST_CASE("bundled table round trips its own readings") {
  const auto& table = *qgen::test::builtin().morphology;
  CHECK(table.size() > 1000);
  for (const auto& surface : {"was", "came", "rode", "led", "won"}) {
    for (const auto& [lemma, tag] : table.readings(surface)) CHECK(table.inflect(lemma, tag) == surface);
  }
}

}  // TEST_SUITE
