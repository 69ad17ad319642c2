// key = value configuration shared by the CLI subcommands.

#ifndef QGEN_CONFIG_HPP
#define QGEN_CONFIG_HPP

#include <string>
#include <string_view>

namespace qgen {

struct Config {
  double min_similarity = 0.5;
  double min_score = 0.75;
  std::size_t max_per_sentence = 8;
  double dedup_threshold = 0.9;
  std::string morphology_path;
  int port = 8080;
};

/// Parses `key = value` lines; '#' starts a comment, values may be quoted.
/// Unknown keys and bad values throw InputError naming the line.
Config parse_config(std::string_view contents, Config base = {});
Config load_config(const std::string& path, Config base = {});

}  // namespace qgen

#endif
