#include "qgen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qgen/annotate.hpp"
#include "qgen/common.hpp"

namespace qgen::metrics {

std::vector<std::string> metric_tokens(std::string_view text_in) {
  std::vector<std::string> out;
  if (text::trim(text_in).empty()) return out;
  for (const auto& t : tokenize(text_in)) out.push_back(text::to_lower(t.text));
  return out;
}

std::pair<double, std::size_t> ngram_precision(const std::vector<std::string>& candidate,
                                               const std::vector<std::string>& reference, std::size_t n) {
  if (n == 0 || candidate.size() < n) return {0.0, 0};
  std::map<std::vector<std::string>, std::size_t> ref_counts, cand_counts;
  for (std::size_t i = 0; i + n <= reference.size(); ++i)
    ++ref_counts[std::vector<std::string>(reference.begin() + i, reference.begin() + i + n)];
  for (std::size_t i = 0; i + n <= candidate.size(); ++i)
    ++cand_counts[std::vector<std::string>(candidate.begin() + i, candidate.begin() + i + n)];
  std::size_t matches = 0;
  for (const auto& [gram, count] : cand_counts) {
    auto it = ref_counts.find(gram);
    if (it != ref_counts.end()) matches += std::min(count, it->second);
  }
  return {static_cast<double>(matches), candidate.size() - n + 1};
}

namespace {

double bleu_tokens(const std::vector<std::string>& c, const std::vector<std::string>& r, int n) {
  if (n < 1 || n > 4) throw InputError("BLEU order must be between 1 and 4");
  if (c.size() < static_cast<std::size_t>(n) || r.empty()) return 0.0;
  double log_sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    auto [matches, total] = ngram_precision(c, r, static_cast<std::size_t>(k));
    if (matches == 0.0) matches = kBleuEpsilon;
    log_sum += std::log(matches / static_cast<double>(total));
  }
  const double ratio = static_cast<double>(r.size()) / static_cast<double>(c.size());
  const double brevity = std::exp(std::min(0.0, 1.0 - ratio));
  return brevity * std::exp(log_sum / n);
}

double bleu_average_tokens(const std::vector<std::string>& c, const std::vector<std::string>& r) {
  double sum = 0.0;
  for (int n = 1; n <= 4; ++n) sum += bleu_tokens(c, r, n);
  return sum / 4.0;
}

double rouge_tokens(const std::vector<std::string>& c, const std::vector<std::string>& r) {
  if (c.empty() || r.empty()) return 0.0;
  std::vector<std::size_t> prev(r.size() + 1, 0), cur(r.size() + 1, 0);
  for (std::size_t i = 1; i <= c.size(); ++i) {
    for (std::size_t j = 1; j <= r.size(); ++j)
      cur[j] = c[i - 1] == r[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  const double lcs = static_cast<double>(prev[r.size()]);
  if (lcs == 0.0) return 0.0;
  const double p = lcs / static_cast<double>(c.size()), rec = lcs / static_cast<double>(r.size());
  return 2.0 * p * rec / (p + rec);
}

}  // namespace

double bleu_n(std::string_view candidate, std::string_view reference, int n) {
  return bleu_tokens(metric_tokens(candidate), metric_tokens(reference), n);
}

double bleu_average(std::string_view candidate, std::string_view reference) {
  return bleu_average_tokens(metric_tokens(candidate), metric_tokens(reference));
}

double rouge_l(std::string_view candidate, std::string_view reference) {
  return rouge_tokens(metric_tokens(candidate), metric_tokens(reference));
}

MetricReport corpus_report(const std::vector<EvalPair>& pairs) {
  if (pairs.empty()) throw InputError("no evaluation pairs");

  // group -> index of the best pair so far, in order of first appearance
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::size_t, double>> best;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    const std::string key = p.group.empty() ? "#" + std::to_string(i) : p.group;
    if (metric_tokens(p.reference).empty()) {
      warn("evaluation group '" + key + "' has an empty reference; skipped");
      continue;
    }
    const double score = bleu_average(p.generated, p.reference);
    auto it = best.find(key);
    if (it == best.end()) {
      order.push_back(key);
      best.emplace(key, std::make_pair(i, score));
    } else if (score > it->second.second) {
      it->second = {i, score};
    }
  }

  MetricReport report;
  for (const auto& key : order) {
    const auto& p = pairs[best.at(key).first];
    const auto c = metric_tokens(p.generated), r = metric_tokens(p.reference);
    for (int n = 1; n <= 4; ++n) report.bleu[static_cast<std::size_t>(n - 1)] += bleu_tokens(c, r, n);
    report.rouge_l += rouge_tokens(c, r);
    report.len_generated += text::utf8_length(text::trim(p.generated));
    report.len_reference += text::utf8_length(text::trim(p.reference));
    ++report.pairs;
  }
  if (report.pairs == 0) return report;
  const double k = static_cast<double>(report.pairs);
  for (auto& b : report.bleu) b /= k;
  report.rouge_l /= k;
  report.bleu_average = (report.bleu[0] + report.bleu[1] + report.bleu[2] + report.bleu[3]) / 4.0;
  report.length_ratio = report.len_reference == 0
                            ? 0.0
                            : static_cast<double>(report.len_generated) / static_cast<double>(report.len_reference);
  return report;
}

std::vector<EvalPair> parse_eval_pairs(std::string_view contents, std::string_view origin) {
  std::vector<EvalPair> pairs;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      EvalPair p;
      if (j.contains("group") && !j["group"].is_null())
        p.group = j["group"].is_string() ? j["group"].get<std::string>() : j["group"].dump();
      p.generated = j.at("generated").get<std::string>();
      p.reference = j.at("reference").get<std::string>();
      pairs.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return pairs;
}

std::string format_report_table(const MetricReport& r) {
  char buf[128];
  std::string out;
  auto row = [&](const char* label, double v) {
    std::snprintf(buf, sizeof buf, "%-30s %8.4f\n", label, v);
    out += buf;
  };
  auto count = [&](const char* label, std::size_t v) {
    std::snprintf(buf, sizeof buf, "%-30s %8zu\n", label, v);
    out += buf;
  };
  row("BLEU - 1gram", r.bleu[0]);
  row("BLEU - 2gram", r.bleu[1]);
  row("BLEU - 3gram", r.bleu[2]);
  row("BLEU - 4gram", r.bleu[3]);
  row("BLEU - average", r.bleu_average);
  row("ROUGE-L", r.rouge_l);
  count("length - reference questions", r.len_reference);
  count("length - generated questions", r.len_generated);
  row("length ratio", r.length_ratio);
  count("pairs", r.pairs);
  return out;
}

std::string report_json(const MetricReport& r) {
  nlohmann::ordered_json j{{"bleu_1", r.bleu[0]},
                           {"bleu_2", r.bleu[1]},
                           {"bleu_3", r.bleu[2]},
                           {"bleu_4", r.bleu[3]},
                           {"bleu_average", r.bleu_average},
                           {"rouge_l", r.rouge_l},
                           {"len_reference", r.len_reference},
                           {"len_generated", r.len_generated},
                           {"length_ratio", r.length_ratio},
                           {"pairs", r.pairs}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Inter-rater reliability

namespace {

template <typename PairScore>
double pairwise_average(const RatingsByQuestion& ratings, PairScore score) {
  double total = 0.0;
  std::size_t questions = 0;
  for (const auto& [id, values] : ratings) {
    if (values.size() < 2) {
      warn("question '" + id + "' has fewer than 2 ratings; excluded from IRR");
      continue;
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = i + 1; j < values.size(); ++j, ++pairs) sum += score(values[i], values[j]);
    total += sum / static_cast<double>(pairs);
    ++questions;
  }
  return questions == 0 ? 0.0 : 100.0 * total / static_cast<double>(questions);
}

}  // namespace

double irr_binary(const RatingsByQuestion& ratings) {
  return pairwise_average(ratings, [](double a, double b) { return a == b ? 1.0 : 0.0; });
}

double irr_numeric(const RatingsByQuestion& ratings) {
  return pairwise_average(ratings, [](double a, double b) { return 1.0 - (a - b) * (a - b); });
}

}  // namespace qgen::metrics
