#include "wsndet/scene.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wsndet {

bool Region::contains(std::span<const double> x) const noexcept {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

Point Region::sample(RandomStream& rng) const {
  Point x(lo.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform();
  return x;
}

double aaf(std::span<const double> target, std::span<const double> sensor, double eta,
           double alpha) noexcept {
  double d2 = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double diff = target[i] - sensor[i];
    d2 += diff * diff;
  }
  // (d/eta)^alpha == (d2/eta^2)^(alpha/2)
  const double r = std::pow(d2 / (eta * eta), 0.5 * alpha);
  return 1.0 / std::sqrt(1.0 + r);
}

std::vector<Point> preset_grid_wsn(int n_side, const Region& region, SensorPlacement placement) {
  if (n_side < 2) throw std::invalid_argument("grid WSN needs at least 2 sensors per side");
  if (region.dim() != 2) throw std::invalid_argument("grid WSN preset is 2-D only");
  auto coord = [&](int axis, int i) {
    const double lo = region.lo[axis];
    const double hi = region.hi[axis];
    if (placement == SensorPlacement::Boundary) return lo + (hi - lo) * i / (n_side - 1);
    return lo + (hi - lo) * (i + 0.5) / n_side;
  };
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n_side) * n_side);
  for (int iy = 0; iy < n_side; ++iy) {
    for (int ix = 0; ix < n_side; ++ix) out.push_back({coord(0, ix), coord(1, iy)});
  }
  return out;
}

Scene::Scene(std::vector<Point> sensors, std::vector<NoiseModel> noise, std::vector<double> taus,
             std::vector<double> pes, double eta, double alpha, Region region)
    : sensors_(std::move(sensors)),
      noise_(std::move(noise)),
      taus_(std::move(taus)),
      pes_(std::move(pes)),
      eta_(eta),
      alpha_(alpha),
      region_(std::move(region)) {
  const std::size_t k = sensors_.size();
  if (k == 0) throw std::invalid_argument("scene needs at least one sensor");
  if (noise_.size() != k || taus_.size() != k || pes_.size() != k) {
    throw std::invalid_argument("per-sensor noise, taus and pes must all have length K");
  }
  if (!(eta_ > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(alpha_ > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (region_.lo.size() != region_.hi.size() || region_.lo.empty()) {
    throw std::invalid_argument("region bounds must be non-empty and of equal dimension");
  }
  for (std::size_t i = 0; i < region_.dim(); ++i) {
    if (!(region_.lo[i] <= region_.hi[i])) throw std::invalid_argument("region has lo > hi");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!region_.contains(sensors_[i])) {
      throw std::invalid_argument("sensor " + std::to_string(i) + " lies outside the region");
    }
    if (!(pes_[i] >= 0.0 && pes_[i] < 0.5)) {
      throw std::invalid_argument("bit-error probability must lie in [0, 1/2)");
    }
    if (std::isnan(taus_[i])) throw std::invalid_argument("quantizer threshold is NaN");
  }
}

Scene Scene::homogeneous(std::vector<Point> sensors, const NoiseModel& noise, double tau,
                         double pe, double eta, double alpha, Region region) {
  const std::size_t k = sensors.size();
  return Scene(std::move(sensors), std::vector<NoiseModel>(k, noise), std::vector<double>(k, tau),
               std::vector<double>(k, pe), eta, alpha, std::move(region));
}

bool Scene::all_taus_zero() const noexcept {
  for (double t : taus_) {
    if (t != 0.0) return false;
  }
  return true;
}

Scene Scene::with_taus(std::vector<double> taus) const {
  return Scene(sensors_, noise_, std::move(taus), pes_, eta_, alpha_, region_);
}

Scene Scene::with_common_tau(double tau) const {
  return with_taus(std::vector<double>(size(), tau));
}

std::vector<double> generate_measurements(const Scene& scene,
                                          const std::optional<TargetState>& target,
                                          RandomStream& rng) {
  std::vector<double> y(scene.size());
  for (std::size_t k = 0; k < y.size(); ++k) {
    y[k] = scene.noise()[k].sample(rng);
    if (target) y[k] += target->theta * scene.gain(target->position, k);
  }
  return y;
}

std::vector<std::uint8_t> quantize(std::span<const double> y, std::span<const double> taus) {
  if (y.size() != taus.size()) throw std::invalid_argument("quantize: length mismatch");
  std::vector<std::uint8_t> bits(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) bits[k] = y[k] >= taus[k] ? 1 : 0;
  return bits;
}

BitReport bsc_transmit(std::span<const std::uint8_t> bits, std::span<const double> pes,
                       RandomStream& rng) {
  if (bits.size() != pes.size()) throw std::invalid_argument("bsc_transmit: length mismatch");
  BitReport out{std::vector<std::uint8_t>(bits.begin(), bits.end())};
  for (std::size_t k = 0; k < bits.size(); ++k) {
    // Always draw so the stream position does not depend on pe.
    const double u = rng.uniform();
    if (u < pes[k]) out.bits[k] ^= 1U;
  }
  return out;
}

BitReport simulate_report(const Scene& scene, const std::optional<TargetState>& target,
                          RandomStream& rng) {
  const auto y = generate_measurements(scene, target, rng);
  const auto b = quantize(y, scene.taus());
  return bsc_transmit(b, scene.pes(), rng);
}

}  // namespace wsndet
