#include "wsndet/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "wsndet/fusion.hpp"
#include "wsndet/special_functions.hpp"

namespace wsndet {
namespace {

constexpr double kSideTail = 0.5e-14;  // per side; 1e-14 in total
constexpr double kQuantileHi = 1000.0;
constexpr double kQuantileTol = 1e-12;

void check_dof(int dof) {
  if (dof < 1) throw std::domain_error("chi-square needs dof >= 1");
}

double central_ccdf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return special::gamma_q(0.5 * dof, 0.5 * x);
}

}  // namespace

double noncentrality(double theta1, std::span<const double> target, const Scene& scene) {
  return theta1 * theta1 * fisher_information(scene, 0.0, target);
}

double noncentrality_optimized(double theta1, std::span<const double> target,
                               const Scene& scene) {
  if (!scene.all_taus_zero()) throw std::invalid_argument("optimized form requires tau=0");
  double sum = 0.0;
  for (std::size_t k = 0; k < scene.size(); ++k) {
    const double a = (1.0 - 2.0 * scene.pes()[k]) * scene.noise()[k].pdf(0.0);
    const double g = scene.gain(target, k);
    sum += a * a * g * g;
  }
  return 4.0 * theta1 * theta1 * sum;
}

double chi2_cdf(double x, int dof) {
  check_dof(dof);
  if (std::isnan(x)) throw std::domain_error("chi2_cdf: x is NaN");
  if (x <= 0.0) return 0.0;
  return special::gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_quantile(double p, int dof) {
  check_dof(dof);
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("chi2_quantile: p must lie in (0, 1)");
  double lo = 0.0;
  double hi = kQuantileHi;
  if (chi2_cdf(hi, dof) < p) throw std::domain_error("chi2_quantile: quantile beyond 1000");
  // Relative width so small quantiles keep full precision.
  while (hi - lo > kQuantileTol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_cdf(mid, dof) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (mid == lo && mid == hi) break;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

double noncentral_chi2_ccdf_series(double x, int dof, double lambda, int extra_terms) {
  check_dof(dof);
  if (!(lambda >= 0.0)) throw std::domain_error("noncentrality must be nonnegative");
  if (x <= 0.0) return 1.0;
  if (lambda == 0.0) return central_ccdf(x, dof);

  const double mu = 0.5 * lambda;
  const long mode = static_cast<long>(std::floor(mu));
  const double w_mode =
      std::exp(-mu + static_cast<double>(mode) * std::log(mu) - std::lgamma(mode + 1.0));
  auto term = [&](long j, double w) { return w * central_ccdf(x, dof + 2.0 * j); };

  double sum = 0.0;
  // Upward from the mode. Beyond j the weights shrink at least geometrically
  // with ratio mu / (j + 2), which bounds the remaining tail.
  {
    double w = w_mode;
    int extra = -1;
    for (long j = mode;; ++j) {
      sum += term(j, w);
      w *= mu / static_cast<double>(j + 1);
      if (extra >= 0) {
        if (++extra > extra_terms) break;
        continue;
      }
      const double ratio = mu / static_cast<double>(j + 2);
      if (ratio < 1.0 && w / (1.0 - ratio) < kSideTail) {
        extra = 0;
        if (extra_terms == 0) break;
      }
    }
  }
  // Downward; below j the ratio is (j - 1) / mu.
  {
    double w = w_mode;
    int extra = -1;
    for (long j = mode; j > 0;) {
      w *= static_cast<double>(j) / mu;
      --j;
      if (extra < 0) {
        const double ratio = static_cast<double>(j) / mu;
        if (ratio < 1.0 && w / (1.0 - ratio) < kSideTail) {
          extra = 0;
          if (extra_terms == 0) break;
        }
      } else if (++extra > extra_terms) {
        break;
      }
      sum += term(j, w);
    }
  }
  return std::min(1.0, sum);
}

}  // namespace detail

double noncentral_chi2_ccdf(double x, int dof, double lambda) {
  return detail::noncentral_chi2_ccdf_series(x, dof, lambda, 0);
}

double clairvoyant_pd(double pf, double lambda) {
  if (!(pf > 0.0 && pf < 1.0)) throw std::domain_error("pf must lie in (0, 1)");
  return noncentral_chi2_ccdf(chi2_quantile(1.0 - pf, 1), 1, lambda);
}

AsymptoticPrediction predict(double pf, double theta1, std::span<const double> target,
                             const Scene& scene) {
  const double lambda = noncentrality(theta1, target, scene);
  return {lambda, pf, clairvoyant_pd(pf, lambda)};
}

}  // namespace wsndet
