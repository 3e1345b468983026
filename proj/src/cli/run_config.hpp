#pragma once

// Run configuration shared by the command-line tool and the self-test.
// JSON keys mirror the field names; unknown keys are rejected.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cesradon/forward.hpp"
#include "cesradon/log_grid.hpp"

namespace cesradon::cli {

enum class Mode { Forward, Invert, Characterize, Kernel, Selftest };

std::string_view to_string(Mode m) noexcept;
Mode mode_from_string(const std::string& s);

struct RunConfig {
  Mode mode = Mode::Selftest;
  std::string measure;   // path to a measure JSON file
  std::string fixture;   // or a built-in fixture name
  std::string input;     // grid file (invert / characterize)
  double alpha = 1.0;
  std::vector<GridAxis> grid;                   // empty: mode default
  std::vector<std::vector<double>> prices;      // forward: explicit p vectors instead of a grid
  double p0 = 1.0;
  std::string quantity = "profit";              // forward: profit, radon, mass
  std::vector<double> strip;                    // empty: 0.5 on every axis
  std::optional<double> radius;
  std::string taper = "hard";
  std::string out;
  std::optional<Tolerance> tol;
  std::vector<double> kernel_u;                 // kernel mode: log coordinates, one point
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string filter;

  /// ConfigError with the offending key.
  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json config_to_json(const RunConfig& c);
/// Checks key names and types only; call validate() once flags are merged.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// "u_min:u_max:N" per axis, comma separated.
std::vector<GridAxis> parse_grid(const std::string& text);

}  // namespace cesradon::cli
