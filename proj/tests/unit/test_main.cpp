#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "qgen/common.hpp"

int main(int argc, char** argv) {
  // Library warnings are expected in many cases; keep test output readable.
  qgen::set_warning_sink([](std::string_view) {});
  doctest::Context context(argc, argv);
  return context.run();
}
