#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wsndet/fusion.hpp"
#include "wsndet/scene.hpp"

namespace wsndet {

enum class Rule { GLR, GRao, GRaoOptimized, ClairvoyantRao };

/// "glr" | "grao" | "grao-opt" | "clairvoyant-rao"
std::string_view to_string(Rule rule);
Rule parse_rule(std::string_view key);

std::unique_ptr<BatchStatistic> make_statistic(Rule rule, const Scene& scene,
                                               const GridSpec& grid);

enum class TargetDraw { Fixed, Uniform };

std::string_view to_string(TargetDraw draw);
TargetDraw parse_target_draw(std::string_view key);

/// Where the target is in each trial. Under H0 the position is still drawn
/// (and handed to the clairvoyant rule) but no signal is added.
struct TargetModel {
  TargetDraw draw = TargetDraw::Uniform;
  Point fixed_position;
  std::optional<double> theta;  // nullopt: H0

  static TargetModel null(TargetDraw draw = TargetDraw::Uniform, Point pos = {}) {
    return {draw, std::move(pos), std::nullopt};
  }
};

/// Stream identifiers: every sample gets its own family of per-trial streams.
enum class Purpose : std::uint64_t { Calibration = 1, Validation = 2, Detection = 3 };

struct SampleSpec {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  Purpose purpose = Purpose::Calibration;
  std::uint64_t salt = 0;  // further separates streams within one purpose
  unsigned threads = 0;    // 0: hardware concurrency
};

/// Statistic values of independently simulated trials; trial t draws all of
/// its randomness from RandomStream::for_trial(seed', purpose, t), so the
/// output does not depend on the thread count.
std::vector<double> simulate_statistics(const BatchStatistic& statistic, const Scene& scene,
                                        const TargetModel& target, const SampleSpec& sample);

/// Fraction with its binomial standard error sqrt(p (1 - p) / n).
struct Estimate {
  double p = 0.0;
  double se = 0.0;
  std::size_t trials = 0;

  static Estimate from_count(std::size_t hits, std::size_t n);
};

/// Fraction of values strictly above gamma.
Estimate exceedance(std::span<const double> values, double gamma);

struct Calibration {
  double pf_target = 0.0;
  double gamma = 0.0;
  Estimate achieved_pf;
};

/// Smallest sample value v with fraction{value > v} <= pf0. Decisions use
/// statistic > gamma, so the achieved level never exceeds pf0 on this sample.
Calibration calibrate_from_sample(std::span<const double> h0_values, double pf0);

/// Throws std::invalid_argument unless pf0 lies in (0, 1) and pf0 * trials >= 100.
void check_calibration_budget(double pf0, std::size_t trials);

Calibration calibrate_threshold(const BatchStatistic& statistic, const Scene& scene,
                                const TargetModel& null_model, double pf0,
                                const SampleSpec& sample);

Estimate estimate_pd(const BatchStatistic& statistic, const Scene& scene,
                     const TargetModel& alternative, double gamma, const SampleSpec& sample);

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

struct TrialBudget {
  std::size_t h0 = 50000;
  std::size_t h1 = 20000;
};

struct McConfig {
  TrialBudget default_budget;
  TrialBudget glr_budget{10000, 5000};
  std::uint64_t master_seed = 1;
  std::vector<double> pf_targets{0.01};
  TargetDraw target_draw = TargetDraw::Uniform;
  Point fixed_position;
  unsigned threads = 0;
  double noise_power = 1.0;  // E{w^2}, converts SNR in dB to theta

  const TrialBudget& budget(Rule rule) const {
    return rule == Rule::GLR ? glr_budget : default_budget;
  }
};

using Cell = std::variant<std::int64_t, double, std::string>;

/// CSV-ready result table.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
  std::string text(std::size_t row, std::string_view name) const;
};

/// RFC 4180 style: header row, comma separated, '.' decimals, round-trip
/// precision, fields quoted only when needed.
void write_csv(std::ostream& out, const Table& table);

struct TauSweep {
  std::vector<Rule> rules;
  std::vector<double> taus;
  std::vector<double> snr_db;
  std::vector<int> polarities{+1, -1};
};

/// For each common threshold: recalibrate every rule, then estimate P_D per
/// (SNR, polarity) with the target drawn per trial.
Table sweep_tau(const Scene& scene, const GridSpec& grid, const TauSweep& sweep,
                const McConfig& config);

struct SnrSweep {
  std::vector<Rule> rules;
  std::vector<double> snr_db;
};

/// One calibration per rule (one gamma per pf target), then P_D per SNR.
Table sweep_snr(const Scene& scene, const GridSpec& grid, const SnrSweep& sweep,
                const McConfig& config);

struct Heatmap {
  std::vector<Rule> rules;
  std::vector<Point> positions;
  double snr_db = 5.0;
};

/// P_D per fixed target position; one calibration per rule.
Table heatmap_pd(const Scene& scene, const GridSpec& grid, const Heatmap& heatmap,
                 const McConfig& config);

/// n x n cell-centered evaluation lattice over a 2-D region.
std::vector<Point> evaluation_lattice(const Region& region, int n);

struct RocSpec {
  Rule rule = Rule::GRao;
  double snr_db = 5.0;
  int n_points = 101;
};

/// Empirical ROC from joint H0 / H1 samples, thresholds swept over H0 order
/// statistics from -inf to the sample maximum.
Table roc(const Scene& scene, const GridSpec& grid, const RocSpec& spec, const McConfig& config);

}  // namespace wsndet
