// Reference-based metrics (BLEU, ROUGE-L) and inter-rater reliability.

#ifndef QGEN_METRICS_HPP
#define QGEN_METRICS_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qgen::metrics {

/// Smoothing count used for an n-gram order without any match.
inline constexpr double kBleuEpsilon = 0.1;

/// Lowercased tokens as used by every metric.
std::vector<std::string> metric_tokens(std::string_view text);

/// Clipped precision of n-grams of one order: (matches, total).
std::pair<double, std::size_t> ngram_precision(const std::vector<std::string>& candidate,
                                               const std::vector<std::string>& reference,
                                               std::size_t n);

/// Cumulative BLEU-n: brevity penalty times the geometric mean of the clipped
/// precisions of orders 1..n. An order without matches counts epsilon matches.
/// Candidates shorter than n tokens score 0.
double bleu_n(std::string_view candidate, std::string_view reference, int n);
double bleu_average(std::string_view candidate, std::string_view reference);

/// F1 of the longest common token subsequence.
double rouge_l(std::string_view candidate, std::string_view reference);

struct EvalPair {
  std::string group;
  std::string generated;
  std::string reference;
};

struct MetricReport {
  std::array<double, 4> bleu{};  // index 0 -> BLEU-1
  double bleu_average = 0.0;
  double rouge_l = 0.0;
  std::size_t len_reference = 0;  // characters
  std::size_t len_generated = 0;
  double length_ratio = 0.0;
  std::size_t pairs = 0;          // selected pairs
};

/// Picks the best generated question (by BLEU average) per group and
/// macro-averages the metrics over the picks. Throws for empty input.
MetricReport corpus_report(const std::vector<EvalPair>& pairs);

std::vector<EvalPair> parse_eval_pairs(std::string_view contents, std::string_view origin = "<memory>");

std::string format_report_table(const MetricReport& report);
std::string report_json(const MetricReport& report);

using RatingsByQuestion = std::map<std::string, std::vector<double>>;

/// Percentage of agreeing rater pairs, averaged over questions.
double irr_binary(const RatingsByQuestion& ratings);
/// 100 * (1 - mean squared pairwise difference), averaged over questions.
/// Ratings lie on [0, 1], so a pair never scores below its exact-agreement score.
double irr_numeric(const RatingsByQuestion& ratings);

}  // namespace qgen::metrics

#endif
