#pragma once

#include <span>

#include "wsndet/scene.hpp"

namespace wsndet {

/// Large-sample behaviour of the position-clairvoyant Rao and GLR tests:
/// chi^2_1 under H0 and noncentral chi^2_1(lambda) under H1.
struct AsymptoticPrediction {
  double lambda = 0.0;
  double pf = 0.0;
  double pd_predicted = 0.0;
};

/// lambda = theta1^2 I(0, x_T).
double noncentrality(double theta1, std::span<const double> target, const Scene& scene);

/// Zero-threshold closed form 4 theta1^2 sum (1 - 2 pe)^2 p(0)^2 g^2.
/// Throws if any threshold is nonzero.
double noncentrality_optimized(double theta1, std::span<const double> target,
                               const Scene& scene);

double chi2_cdf(double x, int dof);
/// Inverse of chi2_cdf by bisection on [0, 1000].
double chi2_quantile(double p, int dof);

/// Pr{chi'^2_dof(lambda) > x} as a Poisson mixture of central tails, summed
/// outward from the Poisson mode until the remaining weight is below 1e-14.
double noncentral_chi2_ccdf(double x, int dof, double lambda);

namespace detail {
/// Same series with `extra_terms` additional terms summed on each side of
/// the stopping point; exposed to check the truncation rule.
double noncentral_chi2_ccdf_series(double x, int dof, double lambda, int extra_terms);
}  // namespace detail

/// Detection probability of the clairvoyant test at false-alarm level pf.
double clairvoyant_pd(double pf, double lambda);

AsymptoticPrediction predict(double pf, double theta1, std::span<const double> target,
                             const Scene& scene);

}  // namespace wsndet
