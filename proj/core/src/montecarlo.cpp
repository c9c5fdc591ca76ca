#include "wsndet/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace wsndet {
namespace {

// Trials simulated and evaluated together; large enough for the GLR tile
// to be reused across reports.
constexpr std::size_t kChunk = 64;

std::uint64_t stream_id(Purpose purpose, std::uint64_t salt) {
  return (static_cast<std::uint64_t>(purpose) << 56) ^ salt;
}

unsigned resolve_threads(unsigned requested, std::size_t chunks) {
  unsigned n = requested == 0 ? std::max(1U, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(chunks, 1)));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<Cell> calibration_cells(const Calibration& c, std::size_t h0_trials) {
  return {c.pf_target, c.gamma, c.achieved_pf.p, c.achieved_pf.se,
          static_cast<std::int64_t>(h0_trials)};
}

void append(std::vector<Cell>& row, std::vector<Cell> more) {
  row.insert(row.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

}  // namespace

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::GLR: return "glr";
    case Rule::GRao: return "grao";
    case Rule::GRaoOptimized: return "grao-opt";
    case Rule::ClairvoyantRao: return "clairvoyant-rao";
  }
  return "unknown";
}

Rule parse_rule(std::string_view key) {
  if (key == "glr") return Rule::GLR;
  if (key == "grao") return Rule::GRao;
  if (key == "grao-opt") return Rule::GRaoOptimized;
  if (key == "clairvoyant-rao") return Rule::ClairvoyantRao;
  throw std::invalid_argument("unknown rule '" + std::string(key) + "'");
}

std::string_view to_string(TargetDraw draw) {
  return draw == TargetDraw::Fixed ? "fixed" : "uniform";
}

TargetDraw parse_target_draw(std::string_view key) {
  if (key == "fixed") return TargetDraw::Fixed;
  if (key == "uniform") return TargetDraw::Uniform;
  throw std::invalid_argument("unknown target draw '" + std::string(key) + "'");
}

std::unique_ptr<BatchStatistic> make_statistic(Rule rule, const Scene& scene,
                                               const GridSpec& grid) {
  switch (rule) {
    case Rule::GLR: return std::make_unique<GlrEvaluator>(scene, grid);
    case Rule::GRao: return std::make_unique<GRaoEvaluator>(scene, grid);
    case Rule::GRaoOptimized:
      return std::make_unique<GRaoEvaluator>(scene, grid, GRaoEvaluator::Form::ThresholdOptimized);
    case Rule::ClairvoyantRao: return std::make_unique<ClairvoyantRaoEvaluator>(scene);
  }
  throw std::invalid_argument("unknown rule");
}

std::vector<double> simulate_statistics(const BatchStatistic& statistic, const Scene& scene,
                                        const TargetModel& target, const SampleSpec& sample) {
  if (target.draw == TargetDraw::Fixed && !scene.region().contains(target.fixed_position)) {
    throw std::invalid_argument("fixed target position lies outside the region");
  }
  const std::size_t n = sample.trials;
  std::vector<double> out(n);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::uint64_t stream = stream_id(sample.purpose, sample.salt);

  auto worker = [&] {
    try {
      std::vector<Trial> trials;
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= chunks) break;
        const std::size_t begin = c * kChunk;
        const std::size_t len = std::min(kChunk, n - begin);
        trials.resize(len);
        for (std::size_t i = 0; i < len; ++i) {
          auto rng = RandomStream::for_trial(sample.seed, stream, begin + i);
          Trial& trial = trials[i];
          trial.position = target.draw == TargetDraw::Fixed ? target.fixed_position
                                                            : scene.region().sample(rng);
          std::optional<TargetState> state;
          if (target.theta) state = TargetState{*target.theta, trial.position};
          trial.report = simulate_report(scene, state, rng);
        }
        statistic.evaluate(trials, std::span<double>(out).subspan(begin, len));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(chunks);
    }
  };

  const unsigned threads = resolve_threads(sample.threads, chunks);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

Estimate Estimate::from_count(std::size_t hits, std::size_t n) {
  if (n == 0) return {};
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

Estimate exceedance(std::span<const double> values, double gamma) {
  const auto hits = static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](double v) { return v > gamma; }));
  return Estimate::from_count(hits, values.size());
}

Calibration calibrate_from_sample(std::span<const double> h0_values, double pf0) {
  if (!(pf0 > 0.0 && pf0 < 1.0)) throw std::invalid_argument("pf0 must lie in (0, 1)");
  if (h0_values.empty()) throw std::invalid_argument("empty H0 sample");
  std::vector<double> sorted(h0_values.begin(), h0_values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  // Number of exceedances allowed at level pf0.
  auto allowed = static_cast<std::size_t>(std::floor(pf0 * static_cast<double>(n) + 1e-9));
  allowed = std::min(allowed, n - 1);
  // Values strictly above sorted[n - allowed - 1] occupy at most the top
  // `allowed` slots; any smaller sample value has more than that above it.
  const double gamma = sorted[n - allowed - 1];
  return {pf0, gamma, exceedance(sorted, gamma)};
}

void check_calibration_budget(double pf0, std::size_t trials) {
  if (!(pf0 > 0.0 && pf0 < 1.0)) throw std::invalid_argument("pf0 must lie in (0, 1)");
  if (pf0 * static_cast<double>(trials) < 100.0 - 1e-9) {
    throw std::invalid_argument("insufficient trials: pf0 * trials must be at least 100");
  }
}

Calibration calibrate_threshold(const BatchStatistic& statistic, const Scene& scene,
                                const TargetModel& null_model, double pf0,
                                const SampleSpec& sample) {
  check_calibration_budget(pf0, sample.trials);
  TargetModel h0 = null_model;
  h0.theta.reset();
  const auto values = simulate_statistics(statistic, scene, h0, sample);
  return calibrate_from_sample(values, pf0);
}

Estimate estimate_pd(const BatchStatistic& statistic, const Scene& scene,
                     const TargetModel& alternative, double gamma, const SampleSpec& sample) {
  const auto values = simulate_statistics(statistic, scene, alternative, sample);
  return exceedance(values, gamma);
}

// ---------------------------------------------------------------------------

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::string_view name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw std::invalid_argument("column '" + std::string(name) + "' is not numeric");
}

std::string Table::text(std::size_t row, std::string_view name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return format_double(std::get<double>(c));
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << csv_field(table.columns[i]);
  }
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
              out << csv_field(v);
            } else if constexpr (std::is_same_v<T, double>) {
              out << format_double(v);
            } else {
              out << v;
            }
          },
          row[i]);
    }
    out << "\r\n";
  }
}

namespace {

TargetModel null_model(const McConfig& config) {
  return TargetModel::null(config.target_draw, config.fixed_position);
}

SampleSpec h0_sample(const McConfig& config, Rule rule) {
  return {config.budget(rule).h0, config.master_seed, Purpose::Calibration, 0, config.threads};
}

SampleSpec h1_sample(const McConfig& config, Rule rule, std::uint64_t salt) {
  return {config.budget(rule).h1, config.master_seed, Purpose::Detection, salt, config.threads};
}

std::vector<Calibration> calibrate_all(const BatchStatistic& stat, const Scene& scene,
                                       const McConfig& config, Rule rule) {
  const SampleSpec sample = h0_sample(config, rule);
  for (double pf : config.pf_targets) check_calibration_budget(pf, sample.trials);
  const auto h0 = simulate_statistics(stat, scene, null_model(config), sample);
  std::vector<Calibration> out;
  for (double pf : config.pf_targets) out.push_back(calibrate_from_sample(h0, pf));
  return out;
}

}  // namespace

Table sweep_tau(const Scene& scene, const GridSpec& grid, const TauSweep& sweep,
                const McConfig& config) {
  Table table{{"rule", "tau", "snr_db", "polarity", "pf_target", "gamma", "achieved_pf",
               "achieved_pf_se", "h0_trials", "pd", "pd_se", "h1_trials"},
              {}};
  for (double tau : sweep.taus) {
    const Scene tuned = scene.with_common_tau(tau);
    for (Rule rule : sweep.rules) {
      const auto stat = make_statistic(rule, tuned, grid);
      const auto cals = calibrate_all(*stat, tuned, config, rule);
      for (double snr : sweep.snr_db) {
        for (int polarity : sweep.polarities) {
          TargetModel h1{config.target_draw, config.fixed_position,
                         polarity * snr_db_to_theta(snr, config.noise_power)};
          const auto values = simulate_statistics(*stat, tuned, h1, h1_sample(config, rule, 0));
          for (const auto& cal : cals) {
            const Estimate pd = exceedance(values, cal.gamma);
            std::vector<Cell> row{std::string(to_string(rule)), tau, snr,
                                  static_cast<std::int64_t>(polarity)};
            append(row, calibration_cells(cal, config.budget(rule).h0));
            append(row, {pd.p, pd.se, static_cast<std::int64_t>(pd.trials)});
            table.rows.push_back(std::move(row));
          }
        }
      }
    }
  }
  return table;
}

Table sweep_snr(const Scene& scene, const GridSpec& grid, const SnrSweep& sweep,
                const McConfig& config) {
  Table table{{"rule", "pe", "snr_db", "pf_target", "gamma", "achieved_pf", "achieved_pf_se",
               "h0_trials", "pd", "pd_se", "h1_trials"},
              {}};
  const double pe = scene.pes().front();
  for (Rule rule : sweep.rules) {
    const auto stat = make_statistic(rule, scene, grid);
    const auto cals = calibrate_all(*stat, scene, config, rule);
    for (double snr : sweep.snr_db) {
      TargetModel h1{config.target_draw, config.fixed_position,
                     snr_db_to_theta(snr, config.noise_power)};
      const auto values = simulate_statistics(*stat, scene, h1, h1_sample(config, rule, 0));
      for (const auto& cal : cals) {
        const Estimate pd = exceedance(values, cal.gamma);
        std::vector<Cell> row{std::string(to_string(rule)), pe, snr};
        append(row, calibration_cells(cal, config.budget(rule).h0));
        append(row, {pd.p, pd.se, static_cast<std::int64_t>(pd.trials)});
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

std::vector<Point> evaluation_lattice(const Region& region, int n) {
  if (region.dim() != 2) throw std::invalid_argument("evaluation lattice is 2-D only");
  if (n < 1) throw std::invalid_argument("lattice needs at least one cell per side");
  std::vector<Point> out;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      out.push_back({region.lo[0] + (region.hi[0] - region.lo[0]) * (ix + 0.5) / n,
                     region.lo[1] + (region.hi[1] - region.lo[1]) * (iy + 0.5) / n});
    }
  }
  return out;
}

Table heatmap_pd(const Scene& scene, const GridSpec& grid, const Heatmap& heatmap,
                 const McConfig& config) {
  Table table{{"rule", "x", "y", "pd", "se", "pf_target", "gamma", "achieved_pf", "h1_trials"},
              {}};
  const double theta = snr_db_to_theta(heatmap.snr_db, config.noise_power);
  for (Rule rule : heatmap.rules) {
    const auto stat = make_statistic(rule, scene, grid);
    const auto cals = calibrate_all(*stat, scene, config, rule);
    for (std::size_t cell = 0; cell < heatmap.positions.size(); ++cell) {
      const Point& pos = heatmap.positions[cell];
      TargetModel h1{TargetDraw::Fixed, pos, theta};
      const auto values = simulate_statistics(*stat, scene, h1, h1_sample(config, rule, cell));
      for (const auto& cal : cals) {
        const Estimate pd = exceedance(values, cal.gamma);
        table.rows.push_back({std::string(to_string(rule)), pos.at(0), pos.at(1), pd.p, pd.se,
                              cal.pf_target, cal.gamma, cal.achieved_pf.p,
                              static_cast<std::int64_t>(pd.trials)});
      }
    }
  }
  return table;
}

Table roc(const Scene& scene, const GridSpec& grid, const RocSpec& spec, const McConfig& config) {
  if (spec.n_points < 2) throw std::invalid_argument("ROC needs at least 2 points");
  const auto stat = make_statistic(spec.rule, scene, grid);
  auto h0 = simulate_statistics(*stat, scene, null_model(config), h0_sample(config, spec.rule));
  TargetModel h1m{config.target_draw, config.fixed_position,
                  snr_db_to_theta(spec.snr_db, config.noise_power)};
  const auto h1 = simulate_statistics(*stat, scene, h1m, h1_sample(config, spec.rule, 0));
  std::sort(h0.begin(), h0.end());

  Table table{{"rule", "snr_db", "gamma", "pf", "pf_se", "pd", "pd_se"}, {}};
  auto add = [&](double gamma) {
    const Estimate pf = exceedance(h0, gamma);
    const Estimate pd = exceedance(h1, gamma);
    table.rows.push_back(
        {std::string(to_string(spec.rule)), spec.snr_db, gamma, pf.p, pf.se, pd.p, pd.se});
  };
  add(-std::numeric_limits<double>::infinity());
  const std::size_t n0 = h0.size();
  for (int q = 0; q < spec.n_points; ++q) {
    const auto m = static_cast<std::size_t>(
        std::llround(static_cast<double>(q) * static_cast<double>(n0 - 1) / (spec.n_points - 1)));
    add(h0[m]);
  }
  return table;
}

}  // namespace wsndet
