// Shared error types, logging sink and small string helpers.

#ifndef QGEN_COMMON_HPP
#define QGEN_COMMON_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qgen {

/// Malformed or inconsistent user input (files, flags, requests).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A rule could not be extracted from, or applied to, a sentence.
class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using RuleId = std::uint64_t;

// Warnings go through a process-wide sink so tests and the CLI can redirect them.
using WarningSink = std::function<void(std::string_view)>;
void set_warning_sink(WarningSink sink);
void warn(std::string_view message);
std::size_t warning_count();

namespace text {

std::string to_lower(std::string_view s);
std::string capitalize(std::string_view s);
std::string decapitalize(std::string_view s);
bool is_capitalized(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string_view trim(std::string_view s);
std::size_t utf8_length(std::string_view s);

}  // namespace text

/// Writes `contents` to a temporary sibling of `path` and renames it over the target.
void write_file_atomic(const std::string& path, std::string_view contents);
std::string read_file(const std::string& path);

}  // namespace qgen

#endif
