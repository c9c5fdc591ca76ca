#pragma once

#include <vector>

#include "wsndet/noise.hpp"

namespace wsndet {

/// Channel penalty Delta = pe (1 - pe) / (1 - 2 pe)^2. Throws unless pe is in [0, 1/2).
double bsc_penalty(double pe);

/// Threshold design objective psi_0(tau) = p(tau)^2 / (Delta + F(tau) [1 - F(tau)]).
/// Maximizing it over tau maximizes the clairvoyant non-centrality, sensor by sensor.
double threshold_objective(double tau, const NoiseModel& noise, double pe);

struct ThresholdDesign {
  double tau_star = 0.0;
  double objective_at_star = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double tolerance = 0.0;
};

struct ThresholdSearch {
  double lo;
  double hi;
  double tolerance = 1e-8;
  int scan_points = 10000;

  /// [-5 scale, 5 scale] around zero.
  static ThresholdSearch around_zero(const NoiseModel& noise) {
    return {-5.0 * noise.scale(), 5.0 * noise.scale()};
  }
};

/// Global maximizer of threshold_objective: uniform scan, then golden-section
/// refinement inside the bracket around the best scanned point.
ThresholdDesign optimize_threshold(const NoiseModel& noise, double pe,
                                   const ThresholdSearch& search);

struct ObjectivePoint {
  double tau;
  double objective;
};

/// Objective sampled at n evenly spaced points of [lo, hi].
std::vector<ObjectivePoint> threshold_objective_curve(const NoiseModel& noise, double pe,
                                                      double lo, double hi, int n);

}  // namespace wsndet
