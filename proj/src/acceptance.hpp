#pragma once

// The acceptance suite: one result line per criterion, runnable from the CLI
// (--mode selftest) and from the ctest driver.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cesradon::acceptance {

struct Options {
  std::string filter;  // substring of the criterion name; empty runs everything
  std::uint64_t seed = 1;
};

struct Result {
  std::string id;
  std::string name;
  std::string target;
  std::string measured;
  bool pass = false;
  bool informational = false;  // printed, not counted
  double seconds = 0.0;
};

std::vector<std::string> criterion_names();

/// Runs the selected criteria; one progress line per result goes to `log`.
std::vector<Result> run(const Options& opt, std::ostream& log);

void print_table(std::ostream& os, const std::vector<Result>& results);
bool all_passed(const std::vector<Result>& results);

}  // namespace cesradon::acceptance
