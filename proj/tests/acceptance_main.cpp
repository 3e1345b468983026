// Runs every acceptance criterion and exits non-zero if any of them fails.

#include <cstdlib>
#include <iostream>
#include <string>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  cesradon::acceptance::Options opt;
  if (argc > 1) opt.filter = argv[1];
  if (const char* s = std::getenv("CESRADON_SEED")) opt.seed = std::strtoull(s, nullptr, 10);
  const auto results = cesradon::acceptance::run(opt, std::cout);
  cesradon::acceptance::print_table(std::cout, results);
  return cesradon::acceptance::all_passed(results) ? 0 : 1;
}
