// Test-only reference computations. Nothing here calls into the fusion,
// asymptotics or quantizer code paths it is used to check.
#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "wsndet/noise.hpp"
#include "wsndet/scene.hpp"

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 30, tol);
}

/// Integral over [a, +inf).
inline double integrate_tail(const std::function<double(double)>& f, double a) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double x) { return f(x); }, a,
                              std::numeric_limits<double>::infinity());
}

/// Every bit vector of length k, in binary counting order.
inline std::vector<wsndet::BitReport> all_reports(std::size_t k) {
  std::vector<wsndet::BitReport> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
    wsndet::BitReport r{std::vector<std::uint8_t>(k)};
    for (std::size_t i = 0; i < k; ++i) r.bits[i] = (m >> i) & 1U;
    out.push_back(std::move(r));
  }
  return out;
}

/// Pr{bhat_k = 1} written out from the model: noise tail, quantizer, channel.
inline double prob_one(const wsndet::Scene& s, std::size_t k, double theta, const wsndet::Point& x) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d2 += (x[i] - s.sensors()[k][i]) * (x[i] - s.sensors()[k][i]);
  }
  const double g = 1.0 / std::sqrt(1.0 + std::pow(std::sqrt(d2) / s.eta(), s.alpha()));
  const double local = s.noise()[k].ccdf(s.taus()[k] - theta * g);
  const double pe = s.pes()[k];
  return local * (1.0 - pe) + (1.0 - local) * pe;
}

inline double report_prob(const wsndet::Scene& s, const wsndet::BitReport& r, double theta,
                          const wsndet::Point& x) {
  double p = 1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double a = prob_one(s, k, theta, x);
    p *= r.bits[k] ? a : 1.0 - a;
  }
  return p;
}

inline double report_logprob(const wsndet::Scene& s, const wsndet::BitReport& r, double theta,
                             const wsndet::Point& x) {
  double ll = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double a = std::clamp(prob_one(s, k, theta, x), 1e-12, 1.0 - 1e-12);
    ll += r.bits[k] ? std::log(a) : std::log(1.0 - a);
  }
  return ll;
}

struct BruteGlr {
  double value;
  std::size_t i;
  std::size_t j;
};

inline BruteGlr brute_force_glr(const wsndet::Scene& s, const wsndet::BitReport& r,
                                const std::vector<wsndet::Point>& positions,
                                const std::vector<double>& thetas) {
  const double null = report_logprob(s, r, 0.0, positions.front());
  BruteGlr best{-std::numeric_limits<double>::infinity(), 0, 0};
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = 0; j < thetas.size(); ++j) {
      const double ll = report_logprob(s, r, thetas[j], positions[i]);
      if (ll > best.value) best = {ll, i, j};
    }
  }
  best.value = 2.0 * (best.value - null);
  return best;
}

/// Random scene over the unit square with mixed noise families, thresholds
/// and channel error rates.
inline wsndet::Scene random_scene(std::mt19937_64& gen, std::size_t k, bool zero_tau = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<wsndet::Point> sensors;
  std::vector<wsndet::NoiseModel> noise;
  std::vector<double> taus, pes;
  for (std::size_t i = 0; i < k; ++i) {
    sensors.push_back({u(gen), u(gen)});
    const double scale = 0.5 + u(gen);
    switch (gen() % 4) {
      case 0: noise.push_back(wsndet::NoiseModel::gaussian(scale)); break;
      case 1: noise.push_back(wsndet::NoiseModel::laplace(scale)); break;
      case 2: noise.push_back(wsndet::NoiseModel::cauchy(scale)); break;
      default: noise.push_back(wsndet::NoiseModel::generalized_gaussian(scale, 0.5 + 1.5 * u(gen)));
    }
    taus.push_back(zero_tau ? 0.0 : 2.0 * u(gen) - 1.0);
    pes.push_back(0.4 * u(gen));
  }
  return {std::move(sensors), std::move(noise), std::move(taus), std::move(pes),
          0.1 + 0.4 * u(gen), 2.0 + 2.0 * u(gen), wsndet::Region::unit_square()};
}

inline wsndet::BitReport random_report(std::mt19937_64& gen, std::size_t k) {
  wsndet::BitReport r{std::vector<std::uint8_t>(k)};
  for (auto& b : r.bits) b = gen() & 1U;
  return r;
}

inline wsndet::Point random_point(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {u(gen), u(gen)};
}

}  // namespace oracle
