#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "helpers.hpp"
#include "qgen/metrics.hpp"

using namespace qgen;
using namespace qgen::metrics;

namespace {

// Straightforward reference implementations used as oracles.
double oracle_bleu(const std::vector<std::string>& c, const std::vector<std::string>& r, int n) {
  if (c.size() < static_cast<std::size_t>(n)) return 0.0;
  double log_sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    std::map<std::string, int> rc, cc;
    auto gram = [&](const std::vector<std::string>& v, std::size_t i) {
      std::string g;
      for (int j = 0; j < k; ++j) g += v[i + static_cast<std::size_t>(j)] + "\x1f";
      return g;
    };
    for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= r.size(); ++i) ++rc[gram(r, i)];
    for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= c.size(); ++i) ++cc[gram(c, i)];
    double matched = 0.0, total = 0.0;
    for (const auto& [g, count] : cc) {
      total += count;
      matched += std::min(count, rc[g]);
    }
    if (matched == 0.0) matched = 0.1;
    log_sum += std::log(matched / total);
  }
  const double bp = c.size() >= r.size() ? 1.0 : std::exp(1.0 - static_cast<double>(r.size()) / c.size());
  return bp * std::exp(log_sum / n);
}

double oracle_rouge(const std::vector<std::string>& c, const std::vector<std::string>& r) {
  std::vector<std::vector<std::size_t>> t(c.size() + 1, std::vector<std::size_t>(r.size() + 1, 0));
  for (std::size_t i = 1; i <= c.size(); ++i)
    for (std::size_t j = 1; j <= r.size(); ++j)
      t[i][j] = c[i - 1] == r[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
  const double lcs = static_cast<double>(t[c.size()][r.size()]);
  if (lcs == 0.0) return 0.0;
  const double p = lcs / c.size(), rec = lcs / r.size();
  return 2 * p * rec / (p + rec);
}

const std::string kEgyptGenerated = "Is Egypt situated in the north?";
const std::string kEgyptReference = "Is Egypt situated in the north of Africa?";

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("tokens") {
  CHECK(metric_tokens("Is Egypt situated in the north?") ==
        std::vector<std::string>{"is", "egypt", "situated", "in", "the", "north", "?"});
  CHECK(metric_tokens("  ").empty());
}

TEST_CASE("Egypt example") {
  const auto c = metric_tokens(kEgyptGenerated), r = metric_tokens(kEgyptReference);
  for (int n = 1; n <= 4; ++n) CHECK(bleu_n(kEgyptGenerated, kEgyptReference, n) == doctest::Approx(oracle_bleu(c, r, n)));
  const double avg = bleu_average(kEgyptGenerated, kEgyptReference);
  CHECK(avg == doctest::Approx(0.6815).epsilon(1e-3));
  CHECK(std::fabs(avg - 0.72) <= 0.05);
  const double rouge = rouge_l(kEgyptGenerated, kEgyptReference);
  CHECK(rouge == doctest::Approx(0.875));
  CHECK(std::fabs(rouge - 0.84) <= 0.05);

  const auto report = corpus_report(parse_eval_pairs(read_file(qgen::test::fixture("egypt_pair.jsonl"))));
  CHECK(report.pairs == 1);
  CHECK(report.bleu_average == doctest::Approx(avg));
  CHECK(report.rouge_l == doctest::Approx(rouge));
}

TEST_CASE("identity and disjoint pairs") {
  const std::string q = "Who was the king of Thailand?";
  for (int n = 1; n <= 4; ++n) CHECK(bleu_n(q, q, n) == 1.0);
  CHECK(bleu_average(q, q) == 1.0);
  CHECK(rouge_l(q, q) == 1.0);

  CHECK(rouge_l("alpha beta gamma delta", "one two three four") == 0.0);
  // Every order falls back to the epsilon count.
  CHECK(bleu_n("alpha beta gamma delta", "one two three four", 1) == doctest::Approx(0.1 / 4));
  CHECK(bleu_n("alpha", "one two", 2) == 0.0);
  CHECK(rouge_l("", "x") == 0.0);
}

TEST_CASE("metrics agree with the oracle on random sentences") {
  std::mt19937_64 rng(3);
  const std::vector<std::string> vocab = {"the", "king", "of", "is", "who", "what", "capital", "?", "a", "city"};
  auto sentence = [&] {
    std::vector<std::string> words;
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    for (std::size_t i = 0; i < n; ++i) words.push_back(vocab[rng() % vocab.size()]);
    return words;
  };
  for (int i = 0; i < 300; ++i) {
    const auto c = sentence(), r = sentence();
    const auto cs = text::join(c, " "), rs = text::join(r, " ");
    for (int n = 1; n <= 4; ++n) CHECK(bleu_n(cs, rs, n) == doctest::Approx(oracle_bleu(c, r, n)));
    CHECK(rouge_l(cs, rs) == doctest::Approx(oracle_rouge(c, r)));
    CHECK(rouge_l(cs, rs) == doctest::Approx(rouge_l(rs, cs)));
    const double b = bleu_average(cs, rs);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
  }
}

TEST_CASE("corpus report picks the best candidate per group") {
  const std::vector<EvalPair> pairs = {
      {"g", "What was Bhumibol Adulyadej?", "Who was the king of Thailand?"},
      {"g", "Who was the king of Thailand?", "Who was the king of Thailand?"},
      {"h", "Is Egypt situated in the north?", "Is Egypt situated in the north of Africa?"},
  };
  const auto report = corpus_report(pairs);
  CHECK(report.pairs == 2);
  CHECK(report.rouge_l == doctest::Approx((1.0 + 0.875) / 2));
  CHECK(report.len_generated == 29 + 31);
  CHECK(report.len_reference == 29 + 41);
  CHECK(report.length_ratio == doctest::Approx(60.0 / 70.0));
  CHECK_THROWS_AS(corpus_report({}), InputError);
}

TEST_CASE("generated questions are shorter than references on the fixture export") {
  const auto report = corpus_report(parse_eval_pairs(read_file(qgen::test::fixture("eval_export.jsonl"))));
  CHECK(report.length_ratio < 1.0);
  CHECK(report.len_generated < report.len_reference);
  CHECK(report.pairs == 8);
  const auto json = report_json(report);
  CHECK(json.find("\"length_ratio\"") != std::string::npos);
  CHECK(format_report_table(report).find("ROUGE-L") != std::string::npos);
}

TEST_CASE("eval pairs parsing") {
  CHECK_THROWS_WITH_AS(parse_eval_pairs("{\"generated\": \"x\"}\n", "e.jsonl"), doctest::Contains("e.jsonl:1"),
                       InputError);
  CHECK(parse_eval_pairs("\n").empty());
}

TEST_CASE("inter-rater reliability examples") {
  CHECK(irr_binary({{"q", {1.0, 1.0, 1.0}}}) == 100.0);
  CHECK(irr_numeric({{"q", {0.5, 0.5}}}) == 100.0);
  CHECK(irr_binary({{"q", {1.0, 1.0, 0.5}}}) == doctest::Approx(33.33).epsilon(1e-4));
  CHECK(irr_numeric({{"q", {1.0, 1.0, 0.5}}}) == doctest::Approx(83.33).epsilon(1e-4));
  CHECK(irr_binary({{"q", {1.0, 0.0}}}) == 0.0);
  CHECK(irr_numeric({{"q", {1.0, 0.0}}}) == 0.0);
  // Single ratings carry no agreement information.
  CHECK(irr_binary({{"q", {1.0}}}) == 0.0);
  CHECK(irr_binary({{"q", {1.0}}, {"p", {0.5, 0.5}}}) == 100.0);
  CHECK(irr_binary({}) == 0.0);
}

TEST_CASE("IRRn never falls below IRRb") {
  std::mt19937_64 rng(8);
  const std::vector<double> scale = {0.0, 0.5, 1.0};
  for (int round = 0; round < 500; ++round) {
    RatingsByQuestion ratings;
    const int questions = 1 + static_cast<int>(rng() % 6);
    for (int q = 0; q < questions; ++q) {
      const int raters = 2 + static_cast<int>(rng() % 4);
      auto& values = ratings["q" + std::to_string(q)];
      for (int r = 0; r < raters; ++r) values.push_back(scale[rng() % 3]);
    }
    const double b = irr_binary(ratings), n = irr_numeric(ratings);
    CHECK(n >= b - 1e-9);
    CHECK(b >= 0.0);
    CHECK(n <= 100.0 + 1e-9);
  }
}

}  // TEST_SUITE
