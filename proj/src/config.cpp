#include "qgen/config.hpp"

#include <charconv>
#include <sstream>

#include "qgen/common.hpp"

namespace qgen {

namespace {

template <typename T>
T parse_number(std::string_view value, const std::string& where) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw InputError(where + "invalid number '" + std::string(value) + "'");
  return out;
}

double parse_fraction(std::string_view value, const std::string& where) {
  const double v = parse_number<double>(value, where);
  if (v < 0.0 || v > 1.0) throw InputError(where + "value must lie in [0, 1]");
  return v;
}

}  // namespace

Config parse_config(std::string_view contents, Config base) {
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '[') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string_view::npos) throw InputError(where + "expected key = value");
    const std::string key(text::trim(trimmed.substr(0, eq)));
    std::string_view value = text::trim(trimmed.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);

    if (key == "min_similarity") {
      base.min_similarity = parse_fraction(value, where);
    } else if (key == "min_score") {
      base.min_score = parse_fraction(value, where);
    } else if (key == "dedup_threshold") {
      base.dedup_threshold = parse_fraction(value, where);
      if (base.dedup_threshold == 0.0) throw InputError(where + "dedup_threshold must be above 0");
    } else if (key == "max_per_sentence") {
      base.max_per_sentence = parse_number<std::size_t>(value, where);
    } else if (key == "morphology_path") {
      base.morphology_path = std::string(value);
    } else if (key == "port") {
      base.port = parse_number<int>(value, where);
      if (base.port < 1 || base.port > 65535) throw InputError(where + "port out of range");
    } else {
      throw InputError(where + "unknown key '" + key + "'");
    }
  }
  return base;
}

Config load_config(const std::string& path, Config base) {
  try {
    return parse_config(read_file(path), std::move(base));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace qgen
