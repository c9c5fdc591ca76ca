#include "wsndet/quantizer.hpp"

#include <cmath>
#include <stdexcept>

namespace wsndet {

double bsc_penalty(double pe) {
  if (!(pe >= 0.0 && pe < 0.5)) throw std::invalid_argument("pe must lie in [0, 1/2)");
  const double q = 1.0 - 2.0 * pe;
  return pe * (1.0 - pe) / (q * q);
}

double threshold_objective(double tau, const NoiseModel& noise, double pe) {
  const double p = noise.pdf(tau);
  const double f = noise.ccdf(tau);
  const double den = bsc_penalty(pe) + f * (1.0 - f);
  if (!(den > 0.0)) return 0.0;
  return p * p / den;
}

ThresholdDesign optimize_threshold(const NoiseModel& noise, double pe,
                                   const ThresholdSearch& search) {
  if (!(search.lo <= 0.0 && 0.0 <= search.hi)) {
    throw std::invalid_argument("threshold search interval must contain 0");
  }
  if (!(search.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (search.scan_points < 2) throw std::invalid_argument("scan needs at least 2 points");
  bsc_penalty(pe);

  auto f = [&](double t) { return threshold_objective(t, noise, pe); };
  const int n = search.scan_points;
  const double step = (search.hi - search.lo) / (n - 1);
  int best = 0;
  double best_value = f(search.lo);
  for (int i = 1; i < n; ++i) {
    const double v = f(search.lo + step * i);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  double a = search.lo + step * std::max(0, best - 1);
  double b = search.lo + step * std::min(n - 1, best + 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > search.tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double tau = 0.5 * (a + b);
  double value = f(tau);
  // Keep the scanned point if refinement landed on something worse.
  const double scanned = search.lo + step * best;
  if (best_value > value) {
    tau = scanned;
    value = best_value;
  }
  return {tau, value, search.lo, search.hi, search.tolerance};
}

std::vector<ObjectivePoint> threshold_objective_curve(const NoiseModel& noise, double pe,
                                                      double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("curve needs at least 2 points");
  std::vector<ObjectivePoint> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = lo + (hi - lo) * i / (n - 1);
    out.push_back({t, threshold_objective(t, noise, pe)});
  }
  return out;
}

}  // namespace wsndet
