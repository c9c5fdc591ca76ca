#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "wsndet/asymptotics.hpp"
#include "wsndet/montecarlo.hpp"

using namespace wsndet;

namespace {

const Region kUnit = Region::unit_square();

Scene small_scene(double pe = 0.0) {
  return Scene::homogeneous(preset_grid_wsn(4, kUnit), NoiseModel::gaussian(1.0), 0.0, pe, 0.2,
                            4.0, kUnit);
}

GridSpec coarse_grid() {
  const auto snr = db_range(-10, 20, 2);
  return default_grids(kUnit, 8, snr);
}

}  // namespace

TEST(EstimateTest, BinomialStandardError) {
  const auto e = Estimate::from_count(25, 100);
  EXPECT_EQ(e.p, 0.25);
  EXPECT_NEAR(e.se, std::sqrt(0.25 * 0.75 / 100), 1e-15);
  EXPECT_EQ(e.trials, 100u);
}

TEST(Calibration, ConservativeQuantile) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  const auto c = calibrate_from_sample(v, 0.01);
  EXPECT_EQ(c.gamma, 989.0);
  EXPECT_EQ(c.achieved_pf.p, 0.01);

  // Heavy ties: many equal values push the achieved level below target.
  std::vector<double> ties(1000, 0.0);
  for (int i = 0; i < 5; ++i) ties[i] = 1.0 + i;
  const auto t = calibrate_from_sample(ties, 0.01);
  EXPECT_LE(t.achieved_pf.p, 0.01);
  EXPECT_EQ(t.gamma, 0.0);
  EXPECT_EQ(t.achieved_pf.p, 0.005);

  std::vector<double> ties2(1000, 1.0);
  for (int i = 0; i < 500; ++i) ties2[i] = 0.0;
  const auto t2 = calibrate_from_sample(ties2, 0.3);
  EXPECT_EQ(t2.gamma, 1.0);
  EXPECT_EQ(t2.achieved_pf.p, 0.0);
}

TEST(Calibration, SmallestValidValueProperty) {
  std::mt19937_64 gen(3);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> v(200 + gen() % 800);
    for (auto& x : v) x = static_cast<double>(gen() % 40);  // plenty of ties
    const double pf = 0.01 + 0.3 * std::uniform_real_distribution<double>()(gen);
    const auto c = calibrate_from_sample(v, pf);
    EXPECT_LE(c.achieved_pf.p, pf + 1e-12);
    // No smaller sample value satisfies the level.
    for (double x : v) {
      if (x < c.gamma) EXPECT_GT(exceedance(v, x).p, pf);
    }
  }
}

TEST(Calibration, BudgetGuard) {
  EXPECT_THROW(check_calibration_budget(0.01, 9999), std::invalid_argument);
  EXPECT_NO_THROW(check_calibration_budget(0.01, 10000));
  EXPECT_THROW(check_calibration_budget(1.0, 1000000), std::invalid_argument);
  EXPECT_THROW(check_calibration_budget(0.0, 1000000), std::invalid_argument);
}

TEST(Simulation, IndependentOfThreadCount) {
  const Scene scene = small_scene(0.1);
  const GridSpec grid = coarse_grid();
  for (Rule rule : {Rule::GRao, Rule::GLR, Rule::ClairvoyantRao}) {
    const auto stat = make_statistic(rule, scene, grid);
    const TargetModel h1{TargetDraw::Uniform, {}, 1.5};
    const auto a = simulate_statistics(*stat, scene, h1, {1000, 99, Purpose::Detection, 0, 1});
    const auto b = simulate_statistics(*stat, scene, h1, {1000, 99, Purpose::Detection, 0, 3});
    const auto c = simulate_statistics(*stat, scene, h1, {1000, 99, Purpose::Detection, 0, 8});
    EXPECT_EQ(a, b) << to_string(rule);
    EXPECT_EQ(a, c) << to_string(rule);
    const auto d = simulate_statistics(*stat, scene, h1, {1000, 100, Purpose::Detection, 0, 1});
    EXPECT_NE(a, d);
  }
}

TEST(Simulation, CalibrationReproducibleAndValid) {
  const Scene scene = small_scene();
  const GridSpec grid = coarse_grid();
  const auto stat = make_statistic(Rule::GRao, scene, grid);
  const auto null = TargetModel::null();
  const auto c1 = calibrate_threshold(*stat, scene, null, 0.05, {20000, 5, Purpose::Calibration, 0, 1});
  const auto c2 = calibrate_threshold(*stat, scene, null, 0.05, {20000, 5, Purpose::Calibration, 0, 4});
  EXPECT_EQ(c1.gamma, c2.gamma);
  EXPECT_LE(c1.achieved_pf.p, 0.05);
  const auto fresh = estimate_pd(*stat, scene, null, c1.gamma, {20000, 5, Purpose::Validation, 0, 1});
  EXPECT_LE(std::fabs(fresh.p - 0.05), 3.0 * std::sqrt(0.05 * 0.95 / 20000));
  EXPECT_THROW(calibrate_threshold(*stat, scene, null, 0.01, {5000, 5}), std::invalid_argument);
}

TEST(Simulation, DetectionLimits) {
  const Scene scene = small_scene();
  const GridSpec grid = coarse_grid();
  const auto stat = make_statistic(Rule::GRao, scene, grid);
  const auto cal = calibrate_threshold(*stat, scene, TargetModel::null(), 0.05,
                                       {20000, 7, Purpose::Calibration});
  // theta = 0 under "H1" is H0 again.
  const auto zero = estimate_pd(*stat, scene, {TargetDraw::Uniform, {}, 0.0}, cal.gamma,
                                {20000, 7, Purpose::Detection});
  EXPECT_LE(std::fabs(zero.p - cal.achieved_pf.p), 3.0 * zero.se + 3.0 * cal.achieved_pf.se);
  // 40 dB at the centre saturates.
  const auto big = estimate_pd(*stat, scene, {TargetDraw::Fixed, {0.5, 0.5}, 100.0}, cal.gamma,
                               {2000, 7, Purpose::Detection});
  EXPECT_GE(big.p, 0.99);
  const auto again = estimate_pd(*stat, scene, {TargetDraw::Fixed, {0.5, 0.5}, 100.0}, cal.gamma,
                                 {2000, 7, Purpose::Detection});
  EXPECT_EQ(big.p, again.p);
}

TEST(Simulation, RejectsFixedTargetOutsideRegion) {
  const Scene scene = small_scene();
  const auto stat = make_statistic(Rule::GRao, scene, coarse_grid());
  EXPECT_THROW(simulate_statistics(*stat, scene, {TargetDraw::Fixed, {1.5, 0.5}, 1.0}, {10, 1}),
               std::invalid_argument);
}

TEST(Roc, EndpointsAndMonotone) {
  const Scene scene = small_scene();
  McConfig cfg;
  cfg.default_budget = {5000, 5000};
  cfg.master_seed = 17;
  const Table t = roc(scene, coarse_grid(), {Rule::GRao, 5.0, 41}, cfg);
  ASSERT_EQ(t.rows.size(), 42u);
  EXPECT_EQ(t.number(0, "pf"), 1.0);
  EXPECT_EQ(t.number(0, "pd"), 1.0);
  EXPECT_EQ(t.number(t.rows.size() - 1, "pf"), 0.0);
  EXPECT_LT(t.number(t.rows.size() - 1, "pd"), 0.05);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    EXPECT_GE(t.number(i, "gamma"), t.number(i - 1, "gamma"));
    EXPECT_LE(t.number(i, "pf"), t.number(i - 1, "pf"));
    EXPECT_LE(t.number(i, "pd"), t.number(i - 1, "pd"));
  }
}

TEST(Sweeps, TableSchemas) {
  const Scene scene = small_scene();
  const GridSpec grid = coarse_grid();
  McConfig cfg;
  cfg.default_budget = {2000, 500};
  cfg.glr_budget = {2000, 200};
  cfg.pf_targets = {0.05, 0.1};
  const Table tau = sweep_tau(scene, grid, {{Rule::GRao}, {-0.5, 0.0, 0.5}, {0.0, 10.0}, {1, -1}}, cfg);
  EXPECT_EQ(tau.rows.size(), 3u * 2 * 2 * 2);
  EXPECT_EQ(tau.columns.front(), "rule");

  const Table snr = sweep_snr(scene, grid, {{Rule::GRao, Rule::GLR}, {-10.0, 0.0, 10.0}}, cfg);
  EXPECT_EQ(snr.rows.size(), 2u * 3 * 2);
  EXPECT_EQ(snr.number(snr.rows.size() - 1, "h1_trials"), 200.0);

  const Table heat = heatmap_pd(scene, grid, {{Rule::GRao}, evaluation_lattice(kUnit, 3), 5.0}, cfg);
  EXPECT_EQ(heat.rows.size(), 9u * 2);
  for (const char* col : {"x", "y", "pd", "se"}) EXPECT_NO_THROW(heat.column(col));
}

TEST(Csv, Format) {
  Table t{{"name", "value", "n"}, {}};
  t.rows.push_back({std::string("a,b"), 0.1, std::int64_t{3}});
  t.rows.push_back({std::string("say \"hi\""), 1e-300, std::int64_t{-1}});
  std::ostringstream os;
  write_csv(os, t);
  EXPECT_EQ(os.str(), "name,value,n\r\n\"a,b\",0.1,3\r\n\"say \"\"hi\"\"\",1e-300,-1\r\n");
}

TEST(Lattice, BoundaryAndInteriorCounts) {
  const auto cells = evaluation_lattice(kUnit, 10);
  ASSERT_EQ(cells.size(), 100u);
  int boundary = 0;
  for (const auto& c : cells) {
    if (c[0] < 0.1 || c[0] > 0.9 || c[1] < 0.1 || c[1] > 0.9) ++boundary;
  }
  EXPECT_EQ(boundary, 36);
}

TEST(Asymptotics, MatchesMonteCarloInTheLocalRegime) {
  // Small per-sensor signal: the clairvoyant Rao detection probability
  // follows the noncentral chi-square prediction.
  const Region unit = Region::unit_square();
  const Scene scene = Scene::homogeneous(preset_grid_wsn(7, unit), NoiseModel::gaussian(1.0), 0.0,
                                         0.0, 0.2, 4.0, unit);
  const ClairvoyantRaoEvaluator stat(scene);
  const Point centre{0.5, 0.5};
  const double theta = snr_db_to_theta(-5.0);
  const auto cal = calibrate_threshold(stat, scene, TargetModel::null(TargetDraw::Fixed, centre),
                                       0.01, {100000, 11, Purpose::Calibration});
  const auto pd = estimate_pd(stat, scene, {TargetDraw::Fixed, centre, theta}, cal.gamma,
                              {100000, 11, Purpose::Detection});
  EXPECT_NEAR(pd.p, predict(0.01, theta, centre, scene).pd_predicted, 0.02);
}
