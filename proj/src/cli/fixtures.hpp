#pragma once

// Named measures and synthetic data used by the CLI, the self-test and the
// characterization suite. Four are clean, four are deliberately broken.

#include <optional>
#include <string>
#include <vector>

#include "cesradon/characterize.hpp"
#include "cesradon/measures.hpp"

namespace cesradon::cli {

enum class FixtureKind { Measure, Profit, FProbe };

struct Fixture {
  std::string name;
  FixtureKind kind = FixtureKind::Measure;
  std::size_t n = 1;
  double alpha = 1.0;
  std::optional<MeasureModel> measure;
  ProfitProvider profit;
  FProbe f;
  std::vector<std::vector<double>> f_grid;  // overrides the default probe grid when set
  bool clean = true;
  std::string expected_condition;  // a condition that must fail for broken fixtures
};

std::vector<std::string> fixture_names();
std::vector<std::string> clean_fixture_names();
std::vector<std::string> corrupted_fixture_names();

/// ConfigError for unknown names.
Fixture make_fixture(const std::string& name);

std::vector<CheckReport> run_fixture(const Fixture& fx, CharacterizeOptions opt);

}  // namespace cesradon::cli
