#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wsndet/noise.hpp"
#include "wsndet/rng.hpp"

namespace wsndet {

using Point = std::vector<double>;

/// Axis-aligned box [lo, hi] in R^d.
struct Region {
  Point lo;
  Point hi;

  static Region unit_square() { return {{0.0, 0.0}, {1.0, 1.0}}; }

  std::size_t dim() const noexcept { return lo.size(); }
  bool contains(std::span<const double> x) const noexcept;
  /// A point drawn uniformly from the box.
  Point sample(RandomStream& rng) const;
};

struct TargetState {
  double theta = 0.0;
  Point position;
};

/// Bits received at the fusion center, one per sensor.
struct BitReport {
  std::vector<std::uint8_t> bits;

  std::size_t size() const noexcept { return bits.size(); }
  friend bool operator==(const BitReport&, const BitReport&) = default;
};

/// Amplitude attenuation g = 1 / sqrt(1 + (|x_T - x_k| / eta)^alpha).
double aaf(std::span<const double> target, std::span<const double> sensor, double eta,
           double alpha) noexcept;

enum class SensorPlacement {
  Boundary,      // coordinates lo + i (hi - lo) / (n - 1)
  CellCentered,  // coordinates lo + (i + 1/2) (hi - lo) / n
};

/// n_side x n_side regular square grid over a 2-D region, row-major in y then x.
std::vector<Point> preset_grid_wsn(int n_side, const Region& region,
                                   SensorPlacement placement = SensorPlacement::Boundary);

/// Sensor network geometry plus everything each sensor does to its reading.
/// Immutable after construction.
class Scene {
 public:
  Scene(std::vector<Point> sensors, std::vector<NoiseModel> noise, std::vector<double> taus,
        std::vector<double> pes, double eta, double alpha, Region region);

  /// Same noise, threshold and bit-error probability at every sensor.
  static Scene homogeneous(std::vector<Point> sensors, const NoiseModel& noise, double tau,
                           double pe, double eta, double alpha, Region region);

  std::size_t size() const noexcept { return sensors_.size(); }
  const std::vector<Point>& sensors() const noexcept { return sensors_; }
  const std::vector<NoiseModel>& noise() const noexcept { return noise_; }
  const std::vector<double>& taus() const noexcept { return taus_; }
  const std::vector<double>& pes() const noexcept { return pes_; }
  double eta() const noexcept { return eta_; }
  double alpha() const noexcept { return alpha_; }
  const Region& region() const noexcept { return region_; }

  double gain(std::span<const double> target, std::size_t k) const noexcept {
    return aaf(target, sensors_[k], eta_, alpha_);
  }
  bool all_taus_zero() const noexcept;

  /// Copy of this scene with every threshold replaced.
  Scene with_taus(std::vector<double> taus) const;
  Scene with_common_tau(double tau) const;

 private:
  std::vector<Point> sensors_;
  std::vector<NoiseModel> noise_;
  std::vector<double> taus_;
  std::vector<double> pes_;
  double eta_;
  double alpha_;
  Region region_;
};

/// y_k = w_k without a target, y_k = theta g(x_T, x_k) + w_k with one.
std::vector<double> generate_measurements(const Scene& scene,
                                          const std::optional<TargetState>& target,
                                          RandomStream& rng);

/// b_k = u(y_k - tau_k) with u(0) = 1.
std::vector<std::uint8_t> quantize(std::span<const double> y, std::span<const double> taus);

/// Flips each bit independently with its own probability.
BitReport bsc_transmit(std::span<const std::uint8_t> bits, std::span<const double> pes,
                       RandomStream& rng);

/// measurements -> quantizer -> channel, in one call.
BitReport simulate_report(const Scene& scene, const std::optional<TargetState>& target,
                          RandomStream& rng);

}  // namespace wsndet
