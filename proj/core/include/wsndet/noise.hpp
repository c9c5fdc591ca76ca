#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "wsndet/rng.hpp"

namespace wsndet {

enum class NoiseFamily { Gaussian, Laplace, GeneralizedGaussian, Cauchy };

/// Config key for a family: "gaussian" | "laplace" | "gengauss" | "cauchy".
std::string_view to_string(NoiseFamily family);
NoiseFamily parse_noise_family(std::string_view key);

/// Zero-mean, unimodal, symmetric sensing noise.
///
/// Scale conventions:
///   Gaussian             standard deviation sigma
///   Laplace              beta, pdf = exp(-|x|/beta) / (2 beta)
///   GeneralizedGaussian  s, pdf = eps / (2 s Gamma(1/eps)) exp(-(|x|/s)^eps)
///   Cauchy               half-width s, pdf = 1 / (pi s (1 + (x/s)^2))
///
/// The shape exponent eps applies to GeneralizedGaussian only and must lie
/// in (0, 2].
class NoiseModel {
 public:
  NoiseModel(NoiseFamily family, double scale, double shape = 2.0);

  static NoiseModel gaussian(double sigma) { return {NoiseFamily::Gaussian, sigma}; }
  static NoiseModel laplace(double beta) { return {NoiseFamily::Laplace, beta}; }
  static NoiseModel cauchy(double scale) { return {NoiseFamily::Cauchy, scale}; }
  static NoiseModel generalized_gaussian(double scale, double shape) {
    return {NoiseFamily::GeneralizedGaussian, scale, shape};
  }

  /// Scale chosen so that E{w^2} = 1. Throws for Cauchy.
  static NoiseModel unit_variance(NoiseFamily family,
                                  std::optional<double> shape = std::nullopt);

  NoiseFamily family() const noexcept { return family_; }
  double scale() const noexcept { return scale_; }
  double shape() const noexcept { return shape_; }

  double pdf(double x) const noexcept;
  /// Pr{w > x}.
  double ccdf(double x) const noexcept;
  double sample(RandomStream& rng) const;

  /// E{w^2}; infinite for Cauchy.
  double variance() const noexcept;

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;

 private:
  double upper_tail(double x) const noexcept;  // ccdf for x >= 0

  NoiseFamily family_;
  double scale_;
  double shape_;
  double gg_norm_ = 0.0;  // GeneralizedGaussian pdf normalizer
};

}  // namespace wsndet
