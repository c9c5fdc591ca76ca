#include "wsndet/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wsndet {
namespace {

double clamp_alpha(double a) noexcept { return std::clamp(a, kAlphaFloor, 1.0 - kAlphaFloor); }

// Pr{bhat = 1} for a given local sensing probability beta = Pr{b = 1}.
double through_channel(double beta, double pe) noexcept {
  return (1.0 - pe) * beta + pe * (1.0 - beta);
}

double alpha_null(const Scene& scene, std::size_t k) {
  return clamp_alpha(through_channel(scene.noise()[k].ccdf(scene.taus()[k]), scene.pes()[k]));
}

void check_report(const Scene& scene, const BitReport& report) {
  if (report.size() != scene.size()) {
    throw std::invalid_argument("report length does not match the number of sensors");
  }
}

void check_grid(const GridSpec& grid) {
  if (grid.positions.empty()) throw std::invalid_argument("grid has no positions");
}

// Cells processed per pass over the GLR table; the per-sensor rows of one
// tile stay resident in L2 while a batch of reports sweeps over them.
constexpr std::size_t kGlrTile = 1024;

}  // namespace

std::size_t GridSpec::null_theta_index() const {
  std::size_t count = 0;
  std::size_t index = 0;
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    if (thetas[j] == 0.0) {
      ++count;
      index = j;
    }
  }
  if (count != 1) throw std::invalid_argument("amplitude grid must contain 0 exactly once");
  return index;
}

void GridSpec::validate(const Region& region) const {
  check_grid(*this);
  null_theta_index();
  for (const auto& p : positions) {
    if (!region.contains(p)) throw std::invalid_argument("grid position outside the region");
  }
}

double snr_db_to_theta(double snr_db, double noise_power) {
  return std::sqrt(noise_power * std::pow(10.0, snr_db / 10.0));
}

std::vector<double> db_range(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("db_range: step must be positive");
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

GridSpec default_grids(const Region& region, int nc, std::span<const double> snr_db,
                       double noise_power) {
  if (nc < 1) throw std::invalid_argument("Nc must be at least 1");
  GridSpec grid;
  const std::size_t d = region.dim();
  std::size_t total = 1;
  for (std::size_t a = 0; a < d; ++a) total *= static_cast<std::size_t>(nc);
  grid.positions.reserve(total);
  // Mixed-radix counter; axis 0 varies fastest.
  std::vector<int> idx(d, 0);
  for (std::size_t n = 0; n < total; ++n) {
    Point p(d);
    for (std::size_t a = 0; a < d; ++a) {
      p[a] = region.lo[a] + (region.hi[a] - region.lo[a]) * (idx[a] + 0.5) / nc;
    }
    grid.positions.push_back(std::move(p));
    for (std::size_t a = 0; a < d && ++idx[a] == nc; ++a) idx[a] = 0;
  }
  std::vector<double> g;
  for (double s : snr_db) g.push_back(snr_db_to_theta(s, noise_power));
  for (double t : g) grid.thetas.push_back(-t);
  grid.thetas.push_back(0.0);
  for (double t : g) grid.thetas.push_back(t);
  return grid;
}

double alpha_k(const Scene& scene, std::size_t k, double theta, std::span<const double> target) {
  const double shift = theta == 0.0 ? 0.0 : theta * scene.gain(target, k);
  const double beta = scene.noise()[k].ccdf(scene.taus()[k] - shift);
  return through_channel(beta, scene.pes()[k]);
}

double log_likelihood(const Scene& scene, const BitReport& report, double theta,
                      std::span<const double> target) {
  check_report(scene, report);
  double ll = 0.0;
  for (std::size_t k = 0; k < scene.size(); ++k) {
    const double a = clamp_alpha(alpha_k(scene, k, theta, target));
    ll += report.bits[k] ? std::log(a) : std::log1p(-a);
  }
  return ll;
}

double score_weight(const Scene& scene, std::size_t k, std::uint8_t bit) {
  const double a0 = alpha_null(scene, k);
  const double slope = (1.0 - 2.0 * scene.pes()[k]) * scene.noise()[k].pdf(scene.taus()[k]);
  return slope * (static_cast<double>(bit) - a0) / (a0 * (1.0 - a0));
}

double psi_null(const Scene& scene, std::size_t k) {
  const double a0 = alpha_null(scene, k);
  const double slope = (1.0 - 2.0 * scene.pes()[k]) * scene.noise()[k].pdf(scene.taus()[k]);
  return slope * slope / (a0 * (1.0 - a0));
}

double score(const Scene& scene, const BitReport& report, std::span<const double> target) {
  check_report(scene, report);
  double s = 0.0;
  for (std::size_t k = 0; k < scene.size(); ++k) {
    s += score_weight(scene, k, report.bits[k]) * scene.gain(target, k);
  }
  return s;
}

double fisher_information(const Scene& scene, double theta, std::span<const double> target) {
  double fi = 0.0;
  for (std::size_t k = 0; k < scene.size(); ++k) {
    const double g = scene.gain(target, k);
    const double a = clamp_alpha(alpha_k(scene, k, theta, target));
    const double slope =
        (1.0 - 2.0 * scene.pes()[k]) * scene.noise()[k].pdf(scene.taus()[k] - theta * g);
    fi += slope * slope / (a * (1.0 - a)) * g * g;
  }
  return fi;
}

double clairvoyant_rao(const BitReport& report, const Scene& scene,
                       std::span<const double> target) {
  const double fi = fisher_information(scene, 0.0, target);
  if (!(fi > 0.0)) return 0.0;
  const double s = score(scene, report, target);
  return s * s / fi;
}

StatisticResult grao_statistic(const BitReport& report, const Scene& scene, const GridSpec& grid) {
  check_report(scene, report);
  check_grid(grid);
  const std::size_t k_count = scene.size();
  std::vector<double> nu(k_count);
  std::vector<double> psi(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    nu[k] = score_weight(scene, k, report.bits[k]);
    psi[k] = psi_null(scene, k);
  }
  StatisticResult best{-1.0, 0, std::nullopt};
  for (std::size_t i = 0; i < grid.positions.size(); ++i) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      const double g = scene.gain(grid.positions[i], k);
      num += nu[k] * g;
      den += psi[k] * g * g;
    }
    if (!(den > 0.0)) continue;
    const double value = num * num / den;
    if (value > best.value) best = {value, i, std::nullopt};
  }
  if (best.value < 0.0) throw std::runtime_error("G-Rao: every grid point has zero information");
  return best;
}

StatisticResult grao_statistic_optimized(const BitReport& report, const Scene& scene,
                                         const GridSpec& grid) {
  check_report(scene, report);
  check_grid(grid);
  if (!scene.all_taus_zero()) throw std::invalid_argument("optimized form requires tau=0");
  const std::size_t k_count = scene.size();
  std::vector<double> a(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    a[k] = (1.0 - 2.0 * scene.pes()[k]) * scene.noise()[k].pdf(0.0);
  }
  StatisticResult best{-1.0, 0, std::nullopt};
  for (std::size_t i = 0; i < grid.positions.size(); ++i) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      const double g = scene.gain(grid.positions[i], k);
      num += a[k] * g * (static_cast<double>(report.bits[k]) - 0.5);
      den += a[k] * a[k] * g * g;
    }
    if (!(den > 0.0)) continue;
    const double value = 4.0 * num * num / den;
    if (value > best.value) best = {value, i, std::nullopt};
  }
  if (best.value < 0.0) throw std::runtime_error("G-Rao: every grid point has zero information");
  return best;
}

StatisticResult glr_statistic(const BitReport& report, const Scene& scene, const GridSpec& grid) {
  check_report(scene, report);
  check_grid(grid);
  const std::size_t j0 = grid.null_theta_index();
  const double ll0 = log_likelihood(scene, report, 0.0, grid.positions.front());
  StatisticResult best{-std::numeric_limits<double>::infinity(), 0, j0};
  for (std::size_t i = 0; i < grid.positions.size(); ++i) {
    for (std::size_t j = 0; j < grid.thetas.size(); ++j) {
      const double ll = log_likelihood(scene, report, grid.thetas[j], grid.positions[i]);
      if (ll > best.value) best = {ll, i, j};
    }
  }
  best.value = std::max(0.0, 2.0 * (best.value - ll0));
  return best;
}

// ---------------------------------------------------------------------------

double BatchStatistic::evaluate(const Trial& trial) const {
  double out = 0.0;
  evaluate(std::span<const Trial>(&trial, 1), std::span<double>(&out, 1));
  return out;
}

GRaoEvaluator::GRaoEvaluator(const Scene& scene, const GridSpec& grid, Form form)
    : n_sensors_(scene.size()), n_positions_(grid.positions.size()) {
  check_grid(grid);
  if (form == Form::ThresholdOptimized && !scene.all_taus_zero()) {
    throw std::invalid_argument("optimized form requires tau=0");
  }
  const std::size_t nk = n_sensors_;
  const std::size_t nx = n_positions_;
  // Numerator per position is sum_k (c0_k + bit_k * dc_k) g_ik; denominator
  // is sum_k d_k g_ik^2.
  std::vector<double> c0(nk), dc(nk), d(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    if (form == Form::Generic) {
      c0[k] = score_weight(scene, k, 0);
      dc[k] = score_weight(scene, k, 1) - c0[k];
      d[k] = psi_null(scene, k);
    } else {
      const double a = (1.0 - 2.0 * scene.pes()[k]) * scene.noise()[k].pdf(0.0);
      c0[k] = -a;
      dc[k] = 2.0 * a;
      d[k] = a * a;
    }
  }
  weights_.assign(nk * nx, 0.0);
  base_zero_.assign(nx, 0.0);
  base_one_.assign(nx, 0.0);
  inv_denom_.assign(nx, 0.0);
  bool any_valid = false;
  for (std::size_t i = 0; i < nx; ++i) {
    double den = 0.0;
    for (std::size_t k = 0; k < nk; ++k) {
      const double g = scene.gain(grid.positions[i], k);
      weights_[k * nx + i] = dc[k] * g;
      base_zero_[i] += c0[k] * g;
      base_one_[i] += (c0[k] + dc[k]) * g;
      den += d[k] * g * g;
    }
    if (den > 0.0) {
      inv_denom_[i] = 1.0 / den;
      any_valid = true;
    }
  }
  if (!any_valid) throw std::runtime_error("G-Rao: every grid point has zero information");
}

StatisticResult GRaoEvaluator::evaluate_one(std::span<const std::uint8_t> bits) const {
  if (bits.size() != n_sensors_) throw std::invalid_argument("report length mismatch");
  const std::size_t nx = n_positions_;
  std::size_t ones = 0;
  for (auto b : bits) ones += b;
  const bool from_ones = 2 * ones > n_sensors_;
  std::vector<double> acc(from_ones ? base_one_ : base_zero_);
  for (std::size_t k = 0; k < n_sensors_; ++k) {
    if ((bits[k] != 0) == from_ones) continue;
    const double* row = weights_.data() + k * nx;
    if (from_ones) {
      for (std::size_t i = 0; i < nx; ++i) acc[i] -= row[i];
    } else {
      for (std::size_t i = 0; i < nx; ++i) acc[i] += row[i];
    }
  }
  StatisticResult best{-1.0, 0, std::nullopt};
  for (std::size_t i = 0; i < nx; ++i) {
    if (inv_denom_[i] == 0.0) continue;
    const double value = acc[i] * acc[i] * inv_denom_[i];
    if (value > best.value) best = {value, i, std::nullopt};
  }
  return best;
}

void GRaoEvaluator::evaluate(std::span<const Trial> trials, std::span<double> out) const {
  for (std::size_t t = 0; t < trials.size(); ++t) out[t] = evaluate_one(trials[t].report.bits).value;
}

GlrEvaluator::GlrEvaluator(const Scene& scene, const GridSpec& grid)
    : n_sensors_(scene.size()),
      n_thetas_(grid.thetas.size()),
      n_cells_(grid.positions.size() * grid.thetas.size()) {
  check_grid(grid);
  null_cell_ = grid.null_theta_index();
  const std::size_t nk = n_sensors_;
  diff_.assign(nk * n_cells_, 0.0);
  all_zero_.assign(n_cells_, 0.0);
  all_one_.assign(n_cells_, 0.0);
  for (std::size_t i = 0; i < grid.positions.size(); ++i) {
    for (std::size_t k = 0; k < nk; ++k) {
      const double g = scene.gain(grid.positions[i], k);
      const auto& noise = scene.noise()[k];
      const double tau = scene.taus()[k];
      const double pe = scene.pes()[k];
      for (std::size_t j = 0; j < n_thetas_; ++j) {
        const double theta = grid.thetas[j];
        const double shift = theta == 0.0 ? 0.0 : theta * g;
        const double a = clamp_alpha(through_channel(noise.ccdf(tau - shift), pe));
        const double l1 = std::log(a);
        const double l0 = std::log1p(-a);
        const std::size_t cell = i * n_thetas_ + j;
        diff_[k * n_cells_ + cell] = l1 - l0;
        all_zero_[cell] += l0;
        all_one_[cell] += l1;
      }
    }
  }
}

GlrEvaluator::Selection GlrEvaluator::select(std::span<const std::uint8_t> bits) const {
  if (bits.size() != n_sensors_) throw std::invalid_argument("report length mismatch");
  std::size_t ones = 0;
  for (auto b : bits) ones += b;
  Selection sel;
  sel.from_ones = 2 * ones > n_sensors_;
  for (std::size_t k = 0; k < n_sensors_; ++k) {
    if ((bits[k] != 0) != sel.from_ones) sel.rows.push_back(k);
  }
  return sel;
}

void GlrEvaluator::accumulate(const Selection& sel, std::size_t begin, std::size_t end,
                              std::span<double> acc) const {
  const std::size_t n = end - begin;
  double* out = acc.data();
  const double* base = (sel.from_ones ? all_one_.data() : all_zero_.data()) + begin;
  std::copy(base, base + n, out);
  for (std::size_t k : sel.rows) {
    const double* row = diff_.data() + k * n_cells_ + begin;
    if (sel.from_ones) {
      for (std::size_t c = 0; c < n; ++c) out[c] -= row[c];
    } else {
      for (std::size_t c = 0; c < n; ++c) out[c] += row[c];
    }
  }
}

StatisticResult GlrEvaluator::evaluate_one(std::span<const std::uint8_t> bits) const {
  const Selection sel = select(bits);
  std::vector<double> acc(n_cells_);
  accumulate(sel, 0, n_cells_, acc);
  std::size_t best = 0;
  for (std::size_t c = 1; c < n_cells_; ++c) {
    if (acc[c] > acc[best]) best = c;
  }
  const double value = std::max(0.0, 2.0 * (acc[best] - acc[null_cell_]));
  return {value, best / n_thetas_, best % n_thetas_};
}

void GlrEvaluator::evaluate(std::span<const Trial> trials, std::span<double> out) const {
  const std::size_t n = trials.size();
  std::vector<Selection> sel(n);
  std::vector<double> best(n, -std::numeric_limits<double>::infinity());
  for (std::size_t t = 0; t < n; ++t) sel[t] = select(trials[t].report.bits);
  std::vector<double> acc(kGlrTile);
  for (std::size_t begin = 0; begin < n_cells_; begin += kGlrTile) {
    const std::size_t end = std::min(n_cells_, begin + kGlrTile);
    const std::size_t len = end - begin;
    for (std::size_t t = 0; t < n; ++t) {
      accumulate(sel[t], begin, end, acc);
      double m = best[t];
      for (std::size_t c = 0; c < len; ++c) m = std::max(m, acc[c]);
      best[t] = m;
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    // The null cell goes through the same summation as in the sweep above,
    // so best >= null exactly.
    double null_ll = 0.0;
    accumulate(sel[t], null_cell_, null_cell_ + 1, std::span<double>(&null_ll, 1));
    out[t] = 2.0 * (best[t] - null_ll);
  }
}

ClairvoyantRaoEvaluator::ClairvoyantRaoEvaluator(const Scene& scene) : scene_(scene) {
  for (std::size_t k = 0; k < scene.size(); ++k) {
    nu_zero_.push_back(score_weight(scene, k, 0));
    nu_one_.push_back(score_weight(scene, k, 1));
    psi0_.push_back(psi_null(scene, k));
  }
}

void ClairvoyantRaoEvaluator::evaluate(std::span<const Trial> trials,
                                       std::span<double> out) const {
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto& bits = trials[t].report.bits;
    if (bits.size() != scene_.size()) throw std::invalid_argument("report length mismatch");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < bits.size(); ++k) {
      const double g = scene_.gain(trials[t].position, k);
      num += (bits[k] ? nu_one_[k] : nu_zero_[k]) * g;
      den += psi0_[k] * g * g;
    }
    out[t] = den > 0.0 ? num * num / den : 0.0;
  }
}

}  // namespace wsndet
