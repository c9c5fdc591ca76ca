#include "wsndet/noise.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "wsndet/special_functions.hpp"

namespace wsndet {

std::string_view to_string(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::Gaussian: return "gaussian";
    case NoiseFamily::Laplace: return "laplace";
    case NoiseFamily::GeneralizedGaussian: return "gengauss";
    case NoiseFamily::Cauchy: return "cauchy";
  }
  return "unknown";
}

NoiseFamily parse_noise_family(std::string_view key) {
  if (key == "gaussian") return NoiseFamily::Gaussian;
  if (key == "laplace") return NoiseFamily::Laplace;
  if (key == "gengauss") return NoiseFamily::GeneralizedGaussian;
  if (key == "cauchy") return NoiseFamily::Cauchy;
  throw std::invalid_argument("unknown noise family '" + std::string(key) + "'");
}

NoiseModel::NoiseModel(NoiseFamily family, double scale, double shape)
    : family_(family), scale_(scale), shape_(shape) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("noise scale must be positive and finite");
  }
  if (family == NoiseFamily::GeneralizedGaussian) {
    if (!(shape > 0.0 && shape <= 2.0)) {
      throw std::invalid_argument("generalized Gaussian shape must lie in (0, 2]");
    }
    gg_norm_ = shape / (2.0 * scale * std::tgamma(1.0 / shape));
  } else {
    shape_ = 2.0;
  }
}

NoiseModel NoiseModel::unit_variance(NoiseFamily family, std::optional<double> shape) {
  switch (family) {
    case NoiseFamily::Gaussian: return gaussian(1.0);
    case NoiseFamily::Laplace: return laplace(1.0 / std::numbers::sqrt2);
    case NoiseFamily::GeneralizedGaussian: {
      const double eps = shape.value_or(2.0);
      if (!(eps > 0.0 && eps <= 2.0)) {
        throw std::invalid_argument("generalized Gaussian shape must lie in (0, 2]");
      }
      // Var = s^2 Gamma(3/eps) / Gamma(1/eps)
      const double s = std::sqrt(std::tgamma(1.0 / eps) / std::tgamma(3.0 / eps));
      return generalized_gaussian(s, eps);
    }
    case NoiseFamily::Cauchy:
      throw std::invalid_argument("cauchy: no finite variance; pass explicit scale");
  }
  throw std::invalid_argument("unknown noise family");
}

double NoiseModel::pdf(double x) const noexcept {
  const double z = std::fabs(x) / scale_;
  switch (family_) {
    case NoiseFamily::Gaussian:
      return std::exp(-0.5 * z * z) / (scale_ * std::sqrt(2.0 * std::numbers::pi));
    case NoiseFamily::Laplace:
      return std::exp(-z) / (2.0 * scale_);
    case NoiseFamily::GeneralizedGaussian:
      return gg_norm_ * std::exp(-std::pow(z, shape_));
    case NoiseFamily::Cauchy:
      return 1.0 / (std::numbers::pi * scale_ * (1.0 + z * z));
  }
  return 0.0;
}

double NoiseModel::upper_tail(double x) const noexcept {
  const double z = x / scale_;
  switch (family_) {
    case NoiseFamily::Gaussian:
      return 0.5 * std::erfc(z / std::numbers::sqrt2);
    case NoiseFamily::Laplace:
      return 0.5 * std::exp(-z);
    case NoiseFamily::GeneralizedGaussian:
      return 0.5 * special::gamma_q(1.0 / shape_, std::pow(z, shape_));
    case NoiseFamily::Cauchy:
      // atan2 keeps precision in the far tail: 0.5 - atan(z)/pi = atan(1/z)/pi.
      return std::atan2(1.0, z) / std::numbers::pi;
  }
  return 0.0;
}

double NoiseModel::ccdf(double x) const noexcept {
  if (std::isnan(x)) return x;
  if (x >= 0.0) return upper_tail(x);
  return 1.0 - upper_tail(-x);
}

double NoiseModel::sample(RandomStream& rng) const {
  switch (family_) {
    case NoiseFamily::Gaussian: {
      std::normal_distribution<double> dist(0.0, scale_);
      return dist(rng);
    }
    case NoiseFamily::Laplace: {
      const double u = rng.uniform_open() - 0.5;
      return scale_ * std::copysign(-std::log1p(-2.0 * std::fabs(u)), u);
    }
    case NoiseFamily::GeneralizedGaussian: {
      // |w|/s = G^(1/eps) with G ~ Gamma(1/eps, 1); independent random sign.
      std::gamma_distribution<double> gamma(1.0 / shape_, 1.0);
      const double magnitude = scale_ * std::pow(gamma(rng), 1.0 / shape_);
      return (rng() & 1U) ? magnitude : -magnitude;
    }
    case NoiseFamily::Cauchy: {
      std::cauchy_distribution<double> dist(0.0, scale_);
      return dist(rng);
    }
  }
  return 0.0;
}

double NoiseModel::variance() const noexcept {
  switch (family_) {
    case NoiseFamily::Gaussian: return scale_ * scale_;
    case NoiseFamily::Laplace: return 2.0 * scale_ * scale_;
    case NoiseFamily::GeneralizedGaussian:
      return scale_ * scale_ * std::tgamma(3.0 / shape_) / std::tgamma(1.0 / shape_);
    case NoiseFamily::Cauchy: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

}  // namespace wsndet
