#include "cli/fixtures.hpp"

#include <cmath>

#include "cesradon/error.hpp"

namespace cesradon::cli {
namespace {

MeasureModel density_model(DensitySpec d) { return MeasureModel::from_density(std::move(d)); }

SeparableDensity separable(std::vector<std::vector<Factor>> axes) { return SeparableDensity{std::move(axes), 1.0}; }

}  // namespace

std::vector<std::string> clean_fixture_names() { return {"exp1", "exp2", "box2", "atoms2"}; }

std::vector<std::string> corrupted_fixture_names() {
  return {"negative_bump", "homogeneity_deg2", "f_oscillatory", "origin_atom"};
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> v = clean_fixture_names();
  for (auto& s : corrupted_fixture_names()) v.push_back(s);
  v.push_back("gauss_alpha");
  v.push_back("bump2");
  return v;
}

Fixture make_fixture(const std::string& name) {
  Fixture fx;
  fx.name = name;
  if (name == "exp1") {
    fx.measure = density_model(separable({{Factor::exponential(1.0)}}));
  } else if (name == "exp2") {
    fx.n = 2;
    fx.measure = density_model(separable({{Factor::exponential(1.0)}, {Factor::exponential(1.0)}}));
  } else if (name == "box2") {
    fx.n = 2;
    fx.alpha = 0.5;
    fx.measure = density_model(BoxDensity{{}, {1.0, 1.0}, 1.0});
  } else if (name == "atoms2") {
    fx.n = 2;
    fx.measure = MeasureModel(2, {Atom{{1.0, 1.0}, 1.0}, Atom{{2.0, 0.5}, 0.5}}, std::nullopt);
  } else if (name == "gauss_alpha") {
    fx.alpha = 0.5;
    fx.measure = density_model(separable({{Factor::power(1.0), Factor::gaussian()}}));
  } else if (name == "bump2") {
    fx.n = 2;
    fx.measure = density_model(separable({{Factor::bump(2.0, 3.0)}, {Factor::bump(1.5, 3.0)}}));
  } else if (name == "negative_bump") {
    fx.clean = false;
    fx.expected_condition = "radon_nonneg";
    fx.measure = density_model(separable({{Factor::exponential(1.0), Factor::indicator_scale(1.0, 1.2, -1.0)}}));
  } else if (name == "origin_atom") {
    fx.clean = false;
    fx.expected_condition = "radon_f_decay";
    fx.measure = MeasureModel(1, {Atom{{0.0}, 0.5}}, DensitySpec(separable({{Factor::exponential(1.0)}})));
  } else if (name == "homogeneity_deg2") {
    fx.clean = false;
    fx.kind = FixtureKind::Profit;
    fx.expected_condition = "profit_homogeneity";
    fx.profit = [](std::span<const double>, double p0) { return p0 > 0.0 ? p0 * p0 : 0.0; };
  } else if (name == "f_oscillatory") {
    fx.clean = false;
    fx.kind = FixtureKind::FProbe;
    fx.expected_condition = "radon_f_completely_monotone";
    fx.f.eval = [](std::span<const double> p) { return std::sin(p[0]) + 2.0; };
    for (int i = 1; i <= 20; ++i) fx.f_grid.push_back({0.5 * i});
  } else {
    fail(ErrorKind::ConfigError, "unknown fixture '" + name + "'");
  }
  fx.f.alpha = fx.alpha;
  return fx;
}

std::vector<CheckReport> run_fixture(const Fixture& fx, CharacterizeOptions opt) {
  if (!fx.f_grid.empty()) opt.f_grid = fx.f_grid;
  const Alpha alpha(fx.alpha);
  switch (fx.kind) {
    case FixtureKind::Measure:
      return characterize_measure(*fx.measure, alpha, opt);
    case FixtureKind::Profit: {
      const std::vector<PricePoint> probes = random_probes(fx.n, opt.probes, opt.seed);
      return check_profit_conditions(fx.profit, alpha, probes, opt);
    }
    case FixtureKind::FProbe:
      return characterize_f(fx.f, fx.n, opt);
  }
  return {};
}

}  // namespace cesradon::cli
