#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cesradon/characterize.hpp"
#include "cesradon/error.hpp"
#include "gen.hpp"

using namespace cesradon;

namespace {

MeasureModel exp_measure(std::size_t n) {
  SeparableDensity s;
  s.axes.assign(n, {Factor::exponential(1.0)});
  return MeasureModel::from_density(s);
}

FProbe synthetic(std::function<double(std::span<const double>)> fn) {
  FProbe f;
  f.eval = std::move(fn);
  return f;
}

const Tolerance kTight{1e-12, 1e-11};

}  // namespace

TEST(Classify, Bands) {
  EXPECT_EQ(classify(0.0, 1e-6), Verdict::Pass);
  EXPECT_EQ(classify(1e-6, 1e-6), Verdict::Pass);
  EXPECT_EQ(classify(5e-6, 1e-6), Verdict::Inconclusive);
  EXPECT_EQ(classify(9e-6, 1e-6), Verdict::Inconclusive);
  EXPECT_EQ(classify(2e-5, 1e-6), Verdict::Fail);
  EXPECT_EQ(to_string(Verdict::Inconclusive), "inconclusive");
}

TEST(RadonNonneg, NegativeValueAndWitness) {
  RadonSlice rs;
  rs.p = {1.0};
  rs.p0_grid = {0.5, 1.0, 1.5};
  rs.values = {0.2, -0.3, 0.1};
  const CheckReport r = check_radon_nonneg(rs, 1e-6);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->point, (std::vector<double>{1.0, 1.0}));  // (p, p0)
  EXPECT_NEAR(r.violation, 0.3, 1e-15);
  const auto j = report_to_json(r);
  EXPECT_EQ(j["verdict"], "fail");
  EXPECT_EQ(j["condition"], "radon_nonneg");
  rs.values = {0.2, 0.3, 0.1};
  EXPECT_EQ(check_radon_nonneg(rs, 1e-6).verdict, Verdict::Pass);
}

TEST(RadonNonneg, DecreasingCdfFails) {
  RadonSlice rs;
  rs.p = {1.0};
  rs.p0_grid = {0.5, 1.0, 1.5};
  rs.values = {0.2, 0.3, 0.1};
  rs.cdf_values = {0.1, 0.4, 0.2};
  EXPECT_EQ(check_radon_nonneg(rs, 1e-6).verdict, Verdict::Fail);
}

TEST(FProbe, MeasureRouteClosedForm) {
  // int e^{-p x} e^{-x} dx = 1 / (1 + p); alpha = 1/2 atoms give e^{-p sqrt(x)}
  const FProbe f = f_probe_from_measure(exp_measure(1), Alpha::one(), 1e-12);
  for (double p : {0.1, 1.0, 3.0}) EXPECT_NEAR(f(std::vector<double>{p}), 1.0 / (1.0 + p), 1e-11);
  const MeasureModel atoms(2, {Atom{{4.0, 1.0}, 2.0}}, std::nullopt);
  const FProbe g = f_probe_from_measure(atoms, Alpha(0.5));
  EXPECT_NEAR(g(std::vector<double>{1.0, 3.0}), 2.0 * std::exp(-2.0 - 3.0), 1e-15);
}

TEST(FProbe, ThreeRoutesAgree) {
  const MeasureModel m(2, {Atom{{1.0, 0.5}, 0.5}}, exp_measure(2).density());
  gen::for_all(71, 3, [&](gen::Gen& g, int i) {
    const Alpha a(i < 2 ? 1.0 : g.uniform(0.6, 1.0));
    const MassProvider mass = [&](std::span<const double> p, double p0) {
      return sublevel_mass(m, PricePoint(std::vector<double>(p.begin(), p.end()), p0), a, kTight);
    };
    const ProfitProvider profit = [&](std::span<const double> p, double p0) {
      return profit_transform(m, PricePoint(std::vector<double>(p.begin(), p.end()), p0), a, kTight);
    };
    const std::vector<double> p = g.vec(2, 0.5, 2.0);
    const double direct = f_probe_from_measure(m, a)(p);
    EXPECT_NEAR(f_probe_from_radon(mass, a, 1e-9)(p), direct, 1e-8) << "case " << i;
    EXPECT_NEAR(f_probe_from_profit(profit, a, 1e-9)(p), direct, 1e-8) << "case " << i;
  });
}

TEST(FProbe, RejectsNonPositivePrices) {
  const FProbe f = f_probe_from_radon([](std::span<const double>, double) { return 0.0; }, Alpha::one(), 1e-8);
  try {
    f(std::vector<double>{0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(CompletelyMonotone, LaplaceTransformPasses) {
  const FProbe f = synthetic([](std::span<const double> p) { return 1.0 / (1.0 + p[0]) + std::exp(-2.0 * p[0]); });
  const auto grid = default_f_grid(1);
  EXPECT_EQ(check_completely_monotone(f, grid, 0.05, 3, 1e-9).verdict, Verdict::Pass);
}

TEST(CompletelyMonotone, OscillationFails) {
  const FProbe f = synthetic([](std::span<const double> p) { return std::sin(3.0 * p[0]) + 2.0; });
  const auto grid = default_f_grid(1);
  const CheckReport r = check_completely_monotone(f, grid, 0.05, 3, 1e-6, "x");
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_EQ(r.condition, "x");
  EXPECT_TRUE(r.witness.has_value());
}

TEST(CompletelyMonotone, MixedDifferences2d) {
  // e^{-p1 p2} is decreasing in each variable but its mixed difference has the wrong sign
  const FProbe f = synthetic([](std::span<const double> p) { return std::exp(-p[0] * p[1]); });
  const auto grid = default_f_grid(2);
  EXPECT_EQ(check_completely_monotone(f, grid, 0.05, 2, 1e-6).verdict, Verdict::Fail);
  const FProbe ok = synthetic([](std::span<const double> p) { return std::exp(-p[0] - 2.0 * p[1]); });
  EXPECT_EQ(check_completely_monotone(ok, grid, 0.05, 3, 1e-9).verdict, Verdict::Pass);
}

TEST(FLimits, BoundedAndDecay) {
  const double dir[1] = {1.0};
  const FProbe good = synthetic([](std::span<const double> p) { return 1.0 / (1.0 + p[0]); });
  EXPECT_EQ(check_f_bounded(good, dir, 1e-6).verdict, Verdict::Pass);
  EXPECT_EQ(check_f_decay(good, dir, 1e-6).verdict, Verdict::Pass);
  const FProbe plateau = synthetic([](std::span<const double> p) { return 0.5 + std::exp(-p[0]); });
  EXPECT_EQ(check_f_decay(plateau, dir, 1e-6).verdict, Verdict::Fail);
  const FProbe blowup = synthetic([](std::span<const double> p) { return 1.0 / (p[0] * p[0]); });
  EXPECT_EQ(check_f_bounded(blowup, dir, 1e-6).verdict, Verdict::Fail);
  // slow growth cannot be told apart from a late plateau on a finite ladder
  const FProbe creep = synthetic([](std::span<const double> p) { return 1.0 / std::sqrt(p[0]); });
  EXPECT_EQ(check_f_bounded(creep, dir, 1e-6).verdict, Verdict::Inconclusive);
}

TEST(Probes, Deterministic) {
  const auto a = random_probes(2, 5, 9), b = random_probes(2, 5, 9), c = random_probes(2, 5, 10);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].p0(), b[i].p0());
    EXPECT_GE(a[i].p0(), 0.5);
    EXPECT_LE(a[i].p0(), 3.0);
  }
  EXPECT_NE(a[0].p0(), c[0].p0());
}

TEST(CharacterizeMeasure, CleanExponentialPasses) {
  const auto reps = characterize_measure(exp_measure(1), Alpha::one(), CharacterizeOptions{});
  EXPECT_EQ(reps.size(), 10u);
  for (const CheckReport& r : reps) EXPECT_EQ(r.verdict, Verdict::Pass) << r.condition << " " << r.violation;
}

TEST(CharacterizeMeasure, SignedDensityFailsNonneg) {
  SeparableDensity s;
  s.axes = {{Factor::exponential(1.0), Factor::indicator_scale(0.5, 1.0, -2.0)}};
  const auto reps = characterize_measure(MeasureModel::from_density(s), Alpha::one(), CharacterizeOptions{});
  bool nonneg_failed = false;
  for (const CheckReport& r : reps) {
    if (r.condition == "radon_nonneg") nonneg_failed = r.verdict == Verdict::Fail;
  }
  EXPECT_TRUE(nonneg_failed);
}

TEST(ProfitConditions, WrongDegreeFailsHomogeneity) {
  const ProfitProvider sq = [](std::span<const double>, double p0) { return p0 * p0; };
  const auto probes = random_probes(1, 5, 3);
  const auto reps = check_profit_conditions(sq, Alpha::one(), probes, CharacterizeOptions{});
  bool failed = false;
  for (const CheckReport& r : reps) {
    if (r.condition == "profit_homogeneity") failed = r.verdict == Verdict::Fail;
  }
  EXPECT_TRUE(failed);
}
