#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "wsndet/scene.hpp"

using namespace wsndet;

namespace {

Scene grid_scene(double tau = 0.0, double pe = 0.0) {
  return Scene::homogeneous(preset_grid_wsn(7, Region::unit_square()), NoiseModel::gaussian(1.0),
                            tau, pe, 0.2, 4.0, Region::unit_square());
}

}  // namespace

TEST(Aaf, KnownValues) {
  const Point a{0.3, 0.3};
  EXPECT_EQ(aaf(a, a, 0.2, 4.0), 1.0);
  EXPECT_NEAR(aaf(Point{0.0, 0.0}, Point{0.2, 0.0}, 0.2, 4.0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(aaf(Point{0.0, 0.0}, Point{0.0, 0.4}, 0.2, 4.0), 1.0 / std::sqrt(17.0), 1e-15);
}

TEST(Aaf, StrictlyDecreasingInDistance) {
  double prev = 2.0;
  for (double d = 0.0; d < 3.0; d += 0.01) {
    const double g = aaf(Point{d, 0.0}, Point{0.0, 0.0}, 0.2, 4.0);
    EXPECT_LT(g, prev);
    EXPECT_GT(g, 0.0);
    prev = g;
  }
}

TEST(PresetGrid, PlacementConventions) {
  const auto pts = preset_grid_wsn(7, Region::unit_square());
  ASSERT_EQ(pts.size(), 49u);
  std::set<std::pair<double, double>> unique;
  for (const auto& p : pts) {
    unique.insert({p[0], p[1]});
    for (double c : p) {
      const double scaled = c * 6.0;
      EXPECT_NEAR(scaled, std::round(scaled), 1e-12);
    }
  }
  EXPECT_EQ(unique.size(), 49u);
  EXPECT_EQ(pts.front(), (Point{0.0, 0.0}));
  EXPECT_EQ(pts.back(), (Point{1.0, 1.0}));

  const auto corners = preset_grid_wsn(2, Region::unit_square());
  EXPECT_EQ(corners, (std::vector<Point>{{0, 0}, {1, 0}, {0, 1}, {1, 1}}));

  const auto centered = preset_grid_wsn(2, Region::unit_square(), SensorPlacement::CellCentered);
  EXPECT_EQ(centered.front(), (Point{0.25, 0.25}));
  EXPECT_THROW(preset_grid_wsn(1, Region::unit_square()), std::invalid_argument);
}

TEST(SceneTest, ValidatesConstruction) {
  const auto sensors = preset_grid_wsn(2, Region::unit_square());
  const auto g = NoiseModel::gaussian(1.0);
  EXPECT_THROW(Scene::homogeneous(sensors, g, 0.0, 0.5, 0.2, 4.0, Region::unit_square()),
               std::invalid_argument);
  EXPECT_THROW(Scene::homogeneous(sensors, g, 0.0, -0.1, 0.2, 4.0, Region::unit_square()),
               std::invalid_argument);
  EXPECT_THROW(Scene::homogeneous(sensors, g, 0.0, 0.0, 0.0, 4.0, Region::unit_square()),
               std::invalid_argument);
  EXPECT_THROW(Scene::homogeneous(sensors, g, 0.0, 0.0, 0.2, -1.0, Region::unit_square()),
               std::invalid_argument);
  EXPECT_THROW(Scene::homogeneous({}, g, 0.0, 0.0, 0.2, 4.0, Region::unit_square()),
               std::invalid_argument);
  EXPECT_THROW(Scene::homogeneous({{1.5, 0.5}}, g, 0.0, 0.0, 0.2, 4.0, Region::unit_square()),
               std::invalid_argument);
  EXPECT_NO_THROW(Scene::homogeneous(sensors, g, 0.0, 0.49, 0.2, 4.0, Region::unit_square()));
}

TEST(Quantize, TieAndExtremes) {
  EXPECT_EQ(quantize(std::vector{0.3, -0.2}, std::vector{0.0, 0.0}),
            (std::vector<std::uint8_t>{1, 0}));
  EXPECT_EQ(quantize(std::vector{0.5, -1.0, 2.0}, std::vector{0.5, -1.0, 2.0}),
            (std::vector<std::uint8_t>{1, 1, 1}));
  EXPECT_EQ(quantize(std::vector{-5.0, 3.0}, std::vector{-1e9, -1e9}),
            (std::vector<std::uint8_t>{1, 1}));
  EXPECT_THROW(quantize(std::vector{1.0}, std::vector{0.0, 0.0}), std::invalid_argument);
}

TEST(Bsc, NoiselessChannelIsIdentity) {
  RandomStream rng(5);
  const std::vector<std::uint8_t> bits{1, 0, 1, 1, 0, 0, 1};
  for (int rep = 0; rep < 1000; ++rep) {
    EXPECT_EQ(bsc_transmit(bits, std::vector<double>(bits.size(), 0.0), rng).bits, bits);
  }
}

TEST(Bsc, FlipRate) {
  RandomStream rng(11);
  const std::vector<std::uint8_t> bits{1, 0, 1};
  const std::vector<double> pes(3, 0.1);
  std::vector<int> flips(3, 0);
  for (int t = 0; t < 100000; ++t) {
    const auto out = bsc_transmit(bits, pes, rng);
    for (int k = 0; k < 3; ++k) flips[k] += out.bits[k] != bits[k];
  }
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(flips[k] / 1e5, 0.1, 0.005);
}

TEST(Bsc, Deterministic) {
  const std::vector<std::uint8_t> bits(20, 1);
  const std::vector<double> pes(20, 0.3);
  RandomStream a(9, 1), b(9, 1);
  EXPECT_EQ(bsc_transmit(bits, pes, a), bsc_transmit(bits, pes, b));
}

TEST(Measurements, MeanShiftAndNullEquivalence) {
  const Scene scene = grid_scene();
  const TargetState target{1e3, scene.sensors()[0]};
  RandomStream rng(3);
  double sum = 0.0;
  for (int t = 0; t < 20000; ++t) sum += generate_measurements(scene, target, rng)[0];
  EXPECT_NEAR(sum / 20000, 1000.0, 0.05);

  // theta = 0 consumes the stream exactly like H0.
  RandomStream a(77), b(77);
  EXPECT_EQ(generate_measurements(scene, TargetState{0.0, {0.5, 0.5}}, a),
            generate_measurements(scene, std::nullopt, b));

  RandomStream c(8), d(8);
  EXPECT_EQ(generate_measurements(scene, target, c), generate_measurements(scene, target, d));
}

TEST(Measurements, NullBitsAreFairCoinsAtZeroThreshold) {
  const Scene scene = grid_scene();
  RandomStream rng(101);
  std::vector<int> ones(scene.size(), 0);
  const int n = 100000;
  for (int t = 0; t < n; ++t) {
    const auto r = simulate_report(scene, std::nullopt, rng);
    for (std::size_t k = 0; k < scene.size(); ++k) ones[k] += r.bits[k];
  }
  // 4.5 sigma band per sensor so 49 simultaneous checks stay robust.
  const double band = 4.5 * std::sqrt(0.25 / n);
  for (int c : ones) EXPECT_NEAR(static_cast<double>(c) / n, 0.5, band);
}

TEST(RegionTest, UniformSampleStaysInside) {
  const Region r{{-1.0, 2.0, 0.0}, {1.0, 3.0, 0.5}};
  RandomStream rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(r.contains(r.sample(rng)));
}
