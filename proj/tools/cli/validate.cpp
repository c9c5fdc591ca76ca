#include "validate.hpp"

#include <algorithm>
#include <cmath>

#include "wsndet/asymptotics.hpp"
#include "wsndet/fusion.hpp"
#include "wsndet/quantizer.hpp"
#include "wsndet/rng.hpp"

namespace wsndet::cli {

namespace {

constexpr int kScenes = 20;

Scene random_scene(RandomStream& rng, std::size_t k, bool zero_tau) {
  std::vector<Point> sensors;
  std::vector<NoiseModel> noise;
  std::vector<double> taus, pes;
  for (std::size_t i = 0; i < k; ++i) {
    sensors.push_back({rng.uniform(), rng.uniform()});
    const double scale = 0.5 + rng.uniform();
    switch (rng() % 4) {
      case 0: noise.push_back(NoiseModel::gaussian(scale)); break;
      case 1: noise.push_back(NoiseModel::laplace(scale)); break;
      case 2: noise.push_back(NoiseModel::cauchy(scale)); break;
      default: noise.push_back(NoiseModel::generalized_gaussian(scale, 0.5 + 1.5 * rng.uniform()));
    }
    taus.push_back(zero_tau ? 0.0 : 2.0 * rng.uniform() - 1.0);
    pes.push_back(0.4 * rng.uniform());
  }
  return {std::move(sensors), std::move(noise), std::move(taus), std::move(pes),
          0.1 + 0.4 * rng.uniform(), 2.0 + 2.0 * rng.uniform(), Region::unit_square()};
}

BitReport report_from_mask(std::uint64_t mask, std::size_t k) {
  BitReport r{std::vector<std::uint8_t>(k)};
  for (std::size_t i = 0; i < k; ++i) r.bits[i] = (mask >> i) & 1U;
  return r;
}

struct Tracker {
  const char* name;
  double tolerance;
  double worst = 0.0;

  void observe(double error) { worst = std::max(worst, std::isnan(error) ? INFINITY : error); }
  CheckResult result(std::string detail) const {
    return {name, worst <= tolerance, worst, tolerance, std::move(detail)};
  }
};

}  // namespace

std::vector<CheckResult> run_validation(std::uint64_t seed) {
  std::vector<CheckResult> out;
  RandomStream rng(seed, 0x76616c6964617465ULL);

  Tracker norm{"likelihood_normalization", 1e-12};
  Tracker fisher{"fisher_equals_score_variance", 1e-10};
  Tracker fd{"score_finite_difference", 1e-6};
  Tracker nullmean{"clairvoyant_null_mean", 1e-10};
  for (int s = 0; s < kScenes; ++s) {
    const std::size_t k = 1 + rng() % 8;
    const Scene scene = random_scene(rng, k, false);
    const Point x{rng.uniform(), rng.uniform()};
    const double fi = fisher_information(scene, 0.0, x);
    double total = 0.0, score_sq = 0.0, mean = 0.0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
      const BitReport r = report_from_mask(m, k);
      const double p = std::exp(log_likelihood(scene, r, 0.0, x));
      const double sc = score(scene, r, x);
      total += p;
      score_sq += p * sc * sc;
      mean += p * clairvoyant_rao(r, scene, x);

      const double h = 1e-5;
      const double diff =
          (log_likelihood(scene, r, h, x) - log_likelihood(scene, r, -h, x)) / (2.0 * h);
      fd.observe(std::fabs(diff - sc) / std::max(1.0, std::fabs(sc)));
    }
    norm.observe(std::fabs(total - 1.0));
    fisher.observe(std::fabs(score_sq - fi) / std::max(1.0, fi));
    nullmean.observe(std::fabs(mean - 1.0));
  }
  out.push_back(norm.result("sum of P(b) over every report, 20 random scenes with K <= 8"));
  out.push_back(fisher.result("I(0) against the exact E[score^2]"));
  out.push_back(fd.result("score against a central difference of the log-likelihood, relative"));
  out.push_back(nullmean.result("exact H0 mean of the clairvoyant Rao statistic"));

  Tracker grao{"grao_zero_threshold_form", 1e-12};
  Tracker lambda{"noncentrality_zero_threshold_form", 1e-12};
  const std::vector<double> snr{-10.0, 0.0, 10.0};
  for (int s = 0; s < kScenes; ++s) {
    const std::size_t k = 1 + rng() % 30;
    const Scene scene = random_scene(rng, k, true);
    const GridSpec grid = default_grids(scene.region(), 6, snr);
    BitReport r{std::vector<std::uint8_t>(k)};
    for (auto& b : r.bits) b = rng() & 1U;
    const double generic = grao_statistic(r, scene, grid).value;
    const double optimized = grao_statistic_optimized(r, scene, grid).value;
    grao.observe(std::fabs(generic - optimized) / std::max(1.0, std::fabs(generic)));
    const Point x{rng.uniform(), rng.uniform()};
    const double theta = 10.0 * rng.uniform() - 5.0;
    const double a = noncentrality(theta, x, scene);
    lambda.observe(std::fabs(a - noncentrality_optimized(theta, x, scene)) / std::max(1.0, a));
  }
  out.push_back(grao.result("threshold-optimized G-Rao against the generic form, tau = 0"));
  out.push_back(lambda.result("closed-form non-centrality against theta^2 I(0), tau = 0"));

  Tracker tau{"quantizer_zero_threshold", 1e-6};
  for (const auto& noise : {NoiseModel::gaussian(1.0), NoiseModel::laplace(1.0 / std::sqrt(2.0)),
                            NoiseModel::cauchy(1.0)}) {
    for (double pe : {0.0, 0.1, 0.3}) {
      tau.observe(std::fabs(optimize_threshold(noise, pe, ThresholdSearch::around_zero(noise)).tau_star));
    }
  }
  out.push_back(tau.result("|tau*| for gaussian, laplace, cauchy at pe in {0, 0.1, 0.3}"));
  return out;
}

}  // namespace wsndet::cli
