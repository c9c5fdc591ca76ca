#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wsndet/scene.hpp"

namespace wsndet {

/// Bounds applied to Pr{b_k = 1} before logs and divisions.
inline constexpr double kAlphaFloor = 1e-12;

/// Discretized search spaces for the target position and amplitude.
struct GridSpec {
  std::vector<Point> positions;
  std::vector<double> thetas;

  /// Index of theta == 0 in thetas; throws if it is absent or duplicated.
  std::size_t null_theta_index() const;
  void validate(const Region& region) const;
};

struct StatisticResult {
  double value = 0.0;
  std::size_t argmax_position = 0;
  std::optional<std::size_t> argmax_theta;
};

/// theta such that 10 log10(theta^2 / noise_power) = snr_db.
double snr_db_to_theta(double snr_db, double noise_power = 1.0);

/// Regular lattice of nc points per axis (cell centers) over the region, and
/// the amplitude grid [-g, 0, g] where g holds the amplitudes of the listed
/// SNR values in dB.
GridSpec default_grids(const Region& region, int nc, std::span<const double> snr_db,
                       double noise_power = 1.0);

/// Integer dB steps lo:step:hi, inclusive.
std::vector<double> db_range(double lo, double hi, double step = 1.0);

// ---------------------------------------------------------------------------
// Per-sensor quantities and likelihood
// ---------------------------------------------------------------------------

/// Pr{b_k = 1; theta, x_T}, unclamped.
double alpha_k(const Scene& scene, std::size_t k, double theta, std::span<const double> target);

double log_likelihood(const Scene& scene, const BitReport& report, double theta,
                      std::span<const double> target);

/// d/dtheta of the log-likelihood at theta = 0.
double score(const Scene& scene, const BitReport& report, std::span<const double> target);

/// Fisher information on theta with the target position known.
double fisher_information(const Scene& scene, double theta, std::span<const double> target);

/// nu_k(b): the per-sensor score weight at theta = 0 (not multiplied by the gain).
double score_weight(const Scene& scene, std::size_t k, std::uint8_t bit);

/// psi_k at theta = 0: per-sensor Fisher information without the gain factor.
double psi_null(const Scene& scene, std::size_t k);

// ---------------------------------------------------------------------------
// Decision statistics (direct evaluation)
// ---------------------------------------------------------------------------

/// Rao statistic with the target position known: score^2 / I(0, x_T).
double clairvoyant_rao(const BitReport& report, const Scene& scene,
                       std::span<const double> target);

/// Generalized Rao: maximum over the position grid of the clairvoyant Rao
/// statistic. Grid points with a zero denominator are skipped.
StatisticResult grao_statistic(const BitReport& report, const Scene& scene, const GridSpec& grid);

/// Closed form of the generalized Rao statistic for zero thresholds.
/// Throws if any threshold is nonzero.
StatisticResult grao_statistic_optimized(const BitReport& report, const Scene& scene,
                                         const GridSpec& grid);

/// 2 [max_{i,j} ln P(b; theta_j, x_i) - ln P(b; 0)] by exhaustive grid search.
StatisticResult glr_statistic(const BitReport& report, const Scene& scene, const GridSpec& grid);

// ---------------------------------------------------------------------------
// Batch evaluators
// ---------------------------------------------------------------------------

/// A received report together with the position the clairvoyant rule is
/// told about (the true target position under H1).
struct Trial {
  BitReport report;
  Point position;
};

/// Precomputed fusion statistic for repeated evaluation over one
/// (scene, grid) pair. Implementations are immutable and thread-safe.
class BatchStatistic {
 public:
  virtual ~BatchStatistic() = default;
  virtual void evaluate(std::span<const Trial> trials, std::span<double> out) const = 0;
  double evaluate(const Trial& trial) const;
};

/// Generalized Rao over a precomputed gain matrix; each report costs one
/// sparse row sum per sensor and a max over positions, O(K N_x).
class GRaoEvaluator final : public BatchStatistic {
 public:
  enum class Form { Generic, ThresholdOptimized };

  GRaoEvaluator(const Scene& scene, const GridSpec& grid, Form form = Form::Generic);

  StatisticResult evaluate_one(std::span<const std::uint8_t> bits) const;
  void evaluate(std::span<const Trial> trials, std::span<double> out) const override;
  using BatchStatistic::evaluate;

 private:
  std::size_t n_sensors_;
  std::size_t n_positions_;
  std::vector<double> weights_;     // [k][i]: nu_k(1) - nu_k(0) times g_ik
  std::vector<double> base_zero_;   // [i]: numerator when every bit is 0
  std::vector<double> base_one_;    // [i]: numerator when every bit is 1
  std::vector<double> inv_denom_;   // [i]: 1 / sum_k psi_k0 g_ik^2, 0 when degenerate
};

/// GLR over a precomputed table of per-sensor log-probabilities for every
/// (position, amplitude) cell; each report costs O(K N_x N_theta) additions.
/// Memory is 8 K N_x N_theta bytes.
class GlrEvaluator final : public BatchStatistic {
 public:
  GlrEvaluator(const Scene& scene, const GridSpec& grid);

  StatisticResult evaluate_one(std::span<const std::uint8_t> bits) const;
  void evaluate(std::span<const Trial> trials, std::span<double> out) const override;
  using BatchStatistic::evaluate;

 private:
  // Rows of diff_ to add (bit 1, starting from all_zero_) or subtract
  // (bit 0, starting from all_one_), whichever list is shorter.
  struct Selection {
    bool from_ones = false;
    std::vector<std::size_t> rows;
  };
  Selection select(std::span<const std::uint8_t> bits) const;
  void accumulate(const Selection& sel, std::size_t begin, std::size_t end,
                  std::span<double> acc) const;

  std::size_t n_sensors_;
  std::size_t n_thetas_;
  std::size_t n_cells_;
  std::size_t null_cell_;           // cell index of (position 0, theta 0)
  std::vector<double> diff_;        // [k][cell]: ln a - ln(1 - a)
  std::vector<double> all_zero_;    // [cell]: log-likelihood of the all-zero report
  std::vector<double> all_one_;     // [cell]: log-likelihood of the all-one report
};

/// Clairvoyant Rao evaluated at each trial's own position.
class ClairvoyantRaoEvaluator final : public BatchStatistic {
 public:
  explicit ClairvoyantRaoEvaluator(const Scene& scene);
  void evaluate(std::span<const Trial> trials, std::span<double> out) const override;
  using BatchStatistic::evaluate;

 private:
  Scene scene_;
  std::vector<double> nu_zero_;
  std::vector<double> nu_one_;
  std::vector<double> psi0_;
};

}  // namespace wsndet
