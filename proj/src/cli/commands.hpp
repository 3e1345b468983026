#pragma once

#include <iosfwd>
#include <vector>

#include "cesradon/characterize.hpp"
#include "cesradon/error.hpp"
#include "cesradon/measures.hpp"
#include "cli/run_config.hpp"

namespace cesradon::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitSelftestFail = 1,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitCharacterizationFail = 4,
  kExitInconclusive = 5,
};

int exit_code_for(const std::vector<CheckReport>& reports);
int exit_code_for(ErrorKind kind);

/// Measure named by cfg.fixture or loaded from cfg.measure.
MeasureModel load_measure(const RunConfig& cfg);

int cmd_forward(const RunConfig& cfg, std::ostream& out);
int cmd_invert(const RunConfig& cfg, std::ostream& out);
int cmd_characterize(const RunConfig& cfg, std::ostream& out);
int cmd_kernel(const RunConfig& cfg, std::ostream& out);
int cmd_selftest(const RunConfig& cfg, std::ostream& out);

/// Validates, applies --threads, dispatches, and maps errors to exit codes
/// (message on `err`).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace cesradon::cli
