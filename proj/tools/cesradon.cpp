// cesradon: forward transforms, inversion, characterization, kernel values and
// the self-test. Flags override keys from --config.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cesradon/error.hpp"
#include "cli/commands.hpp"
#include "cli/run_config.hpp"

using namespace cesradon;

int main(int argc, char** argv) {
  CLI::App app{"CES Radon / profit transforms and their inversion"};
  std::string mode, config, strip, taper, grid, out, filter, measure, fixture, input, quantity;
  double alpha = 0.0, radius = 0.0, p0 = 0.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  app.add_option("--mode", mode, "forward | invert | characterize | kernel | selftest");
  app.add_option("--config", config, "JSON run configuration");
  app.add_option("--alpha", alpha, "CES exponent in (0, 1]");
  app.add_option("--strip", strip, "contour abscissa c (comma separated per axis)");
  app.add_option("--radius", radius, "frequency truncation radius R");
  app.add_option("--taper", taper, "hard | gaussian");
  app.add_option("--grid", grid, "u_min:u_max:N per axis, comma separated");
  app.add_option("--out", out, "output path");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "cap on worker threads (0 = all cores)");
  app.add_option("--filter", filter, "selftest: run criteria whose name contains this");
  app.add_option("--measure", measure, "measure JSON file");
  app.add_option("--fixture", fixture, "built-in fixture name");
  app.add_option("--input", input, "grid file input");
  app.add_option("--quantity", quantity, "forward: profit | radon | mass");
  app.add_option("--p0", p0, "output price level");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kExitConfig;
  }

  cli::RunConfig cfg;
  try {
    if (!config.empty()) cfg = cli::load_config(config);
    if (app.count("--mode")) cfg.mode = cli::mode_from_string(mode);
    if (app.count("--alpha")) cfg.alpha = alpha;
    if (app.count("--strip")) {
      cfg.strip.clear();
      std::size_t pos = 0;
      while (pos <= strip.size()) {
        const std::size_t next = std::min(strip.find(',', pos), strip.size());
        cfg.strip.push_back(std::stod(strip.substr(pos, next - pos)));
        pos = next + 1;
      }
    }
    if (app.count("--radius")) cfg.radius = radius;
    if (app.count("--taper")) cfg.taper = taper;
    if (app.count("--grid")) cfg.grid = cli::parse_grid(grid);
    if (app.count("--out")) cfg.out = out;
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--threads")) cfg.threads = threads;
    if (app.count("--filter")) cfg.filter = filter;
    if (app.count("--measure")) cfg.measure = measure;
    if (app.count("--fixture")) cfg.fixture = fixture;
    if (app.count("--input")) cfg.input = input;
    if (app.count("--quantity")) cfg.quantity = quantity;
    if (app.count("--p0")) cfg.p0 = p0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: bad flag value: " << e.what() << '\n';
    return cli::kExitConfig;
  }
  return cli::run(cfg, std::cout, std::cerr);
}
