#include "commands.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "validate.hpp"
#include "wsndet/asymptotics.hpp"

#ifndef WSNDET_GIT_DESCRIBE
#define WSNDET_GIT_DESCRIBE "unknown"
#endif
#ifndef WSNDET_VERSION
#define WSNDET_VERSION "0.0.0"
#endif

namespace wsndet::cli {

namespace {

using json = nlohmann::ordered_json;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Context {
  std::string command;
  const RawConfig& raw;
  const ExperimentConfig& cfg;
  std::ostream& out;
  json results = json::object();
  std::vector<std::string> outputs;

  std::filesystem::path path(const std::string& name) const { return cfg.out_dir / name; }

  /// CSV preceded by '#' lines holding the resolved config.
  void write_table(const std::string& name, const Table& table) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream f(path(name), std::ios::binary);
    f << "# wsndet " << command << "\r\n";
    for (const auto& e : raw.entries()) {
      f << "# " << e.section << '.' << e.key << '=' << e.value << "\r\n";
    }
    write_csv(f, table);
    if (!f) throw std::runtime_error("could not write " + path(name).string());
    outputs.push_back(name);
    out << "wrote " << path(name).string() << " (" << table.rows.size() << " rows)\n";
  }
};

void insert_column(Table& table, std::size_t at, const std::string& name, const Cell& value) {
  table.columns.insert(table.columns.begin() + static_cast<std::ptrdiff_t>(at), name);
  for (auto& row : table.rows) row.insert(row.begin() + static_cast<std::ptrdiff_t>(at), value);
}

void append(Table& acc, Table&& part) {
  if (acc.columns.empty()) {
    acc = std::move(part);
    return;
  }
  for (auto& row : part.rows) acc.rows.push_back(std::move(row));
}

bool has_column(const Table& t, const std::string& name) {
  return std::find(t.columns.begin(), t.columns.end(), name) != t.columns.end();
}

// Adds the pe column right after "rule" when the table does not carry it.
Table with_pe(Table t, double pe) {
  if (!has_column(t, "pe")) insert_column(t, 1, "pe", pe);
  return t;
}

int design_quantizer(Context& ctx) {
  const auto& c = ctx.cfg;
  Table summary{{"family", "scale", "shape", "pe", "tau_star", "objective_at_star", "lo", "hi"}, {}};
  Table curve{{"pe", "tau", "objective"}, {}};
  json designs = json::array();
  for (double pe : c.pes) {
    const auto d = optimize_threshold(c.noise, pe, c.search);
    ctx.out << "pe=" << pe << " tau_star=" << d.tau_star << " psi_star=" << d.objective_at_star
            << '\n';
    summary.rows.push_back({std::string(to_string(c.noise.family())), c.noise.scale(),
                            c.noise.shape(), pe, d.tau_star, d.objective_at_star, d.lo, d.hi});
    for (const auto& p : threshold_objective_curve(c.noise, pe, c.search.lo, c.search.hi,
                                                   c.curve_points)) {
      curve.rows.push_back({pe, p.tau, p.objective});
    }
    designs.push_back({{"pe", pe}, {"tau_star", d.tau_star}, {"objective_at_star", d.objective_at_star}});
  }
  ctx.results["designs"] = designs;
  ctx.write_table("quantizer.csv", summary);
  ctx.write_table("quantizer_curve.csv", curve);
  return kOk;
}

int calibrate(Context& ctx) {
  const auto& c = ctx.cfg;
  const GridSpec grid = c.grid();
  Table t{{"rule", "pe", "pf_target", "gamma", "achieved_pf", "achieved_pf_se", "h0_trials",
           "validation_pf", "validation_pf_se", "validation_trials"},
          {}};
  for (double pe : c.pes) {
    const Scene scene = c.scene(pe);
    for (Rule rule : c.rules) {
      const auto stat = make_statistic(rule, scene, grid);
      const auto& budget = c.mc.budget(rule);
      const auto null = TargetModel::null();
      const auto h0 = simulate_statistics(
          *stat, scene, null, {budget.h0, c.mc.master_seed, Purpose::Calibration, 0, c.mc.threads});
      const auto fresh = simulate_statistics(
          *stat, scene, null, {budget.h0, c.mc.master_seed, Purpose::Validation, 0, c.mc.threads});
      for (double pf : c.mc.pf_targets) {
        const auto cal = calibrate_from_sample(h0, pf);
        const auto val = exceedance(fresh, cal.gamma);
        ctx.out << to_string(rule) << " pe=" << pe << " pf=" << pf << " gamma=" << cal.gamma
                << " achieved=" << cal.achieved_pf.p << " validation=" << val.p << '\n';
        t.rows.push_back({std::string(to_string(rule)), pe, pf, cal.gamma, cal.achieved_pf.p,
                          cal.achieved_pf.se, static_cast<std::int64_t>(budget.h0), val.p, val.se,
                          static_cast<std::int64_t>(fresh.size())});
      }
    }
  }
  ctx.write_table("calibration.csv", t);
  return kOk;
}

int sweep_tau_cmd(Context& ctx) {
  const auto& c = ctx.cfg;
  const GridSpec grid = c.grid();
  Table acc;
  for (double pe : c.pes) {
    append(acc, with_pe(sweep_tau(c.scene(pe), grid, {c.rules, c.taus, c.snr_db, c.polarities}, c.mc), pe));
  }
  ctx.write_table("sweep_tau.csv", acc);
  return kOk;
}

int sweep_snr_cmd(Context& ctx) {
  const auto& c = ctx.cfg;
  const GridSpec grid = c.grid();
  Table acc;
  for (double pe : c.pes) append(acc, sweep_snr(c.scene(pe), grid, {c.rules, c.snr_db}, c.mc));
  ctx.write_table("sweep_snr.csv", acc);
  return kOk;
}

int heatmap_cmd(Context& ctx) {
  const auto& c = ctx.cfg;
  const GridSpec grid = c.grid();
  const auto cells = evaluation_lattice(c.region(), c.lattice);
  Table acc;
  for (double pe : c.pes) {
    for (double snr : c.snr_db) {
      Table t = heatmap_pd(c.scene(pe), grid, {c.rules, cells, snr}, c.mc);
      insert_column(t, 1, "snr_db", snr);
      append(acc, with_pe(std::move(t), pe));
    }
  }
  ctx.write_table("heatmap.csv", acc);
  return kOk;
}

int roc_cmd(Context& ctx) {
  const auto& c = ctx.cfg;
  const GridSpec grid = c.grid();
  Table acc;
  for (double pe : c.pes) {
    const Scene scene = c.scene(pe);
    for (Rule rule : c.rules) {
      for (double snr : c.snr_db) {
        append(acc, with_pe(roc(scene, grid, {rule, snr, c.roc_points}, c.mc), pe));
      }
    }
  }
  ctx.write_table("roc.csv", acc);
  return kOk;
}

int predict_cmd(Context& ctx) {
  const auto& c = ctx.cfg;
  const Point x = c.fixed_target();
  Table t{{"pe", "snr_db", "x", "y", "theta", "lambda", "pf", "pd_predicted"}, {}};
  json preds = json::array();
  for (double pe : c.pes) {
    const Scene scene = c.scene(pe);
    for (double snr : c.snr_db) {
      const double theta = snr_db_to_theta(snr, c.noise_power);
      for (double pf : c.mc.pf_targets) {
        const auto p = predict(pf, theta, x, scene);
        ctx.out << "pe=" << pe << " snr_db=" << snr << " pf=" << pf << " lambda=" << p.lambda
                << " pd=" << p.pd_predicted << '\n';
        t.rows.push_back({pe, snr, x[0], x[1], theta, p.lambda, pf, p.pd_predicted});
        preds.push_back({{"pe", pe}, {"snr_db", snr}, {"pf", pf}, {"lambda", p.lambda},
                         {"pd_predicted", p.pd_predicted}});
      }
    }
  }
  ctx.results["predictions"] = preds;
  ctx.write_table("predict.csv", t);
  return kOk;
}

int validate_cmd(Context& ctx) {
  Table t{{"check", "passed", "worst_error", "tolerance", "detail"}, {}};
  bool all = true;
  json checks = json::array();
  for (const auto& r : run_validation(ctx.cfg.mc.master_seed)) {
    ctx.out << (r.passed ? "PASS " : "FAIL ") << r.name << "  worst=" << r.worst
            << " tol=" << r.tolerance << "  (" << r.detail << ")\n";
    all = all && r.passed;
    t.rows.push_back({r.name, std::int64_t{r.passed}, r.worst, r.tolerance, r.detail});
    checks.push_back({{"check", r.name}, {"passed", r.passed}, {"worst_error", r.worst},
                      {"tolerance", r.tolerance}});
  }
  ctx.results["checks"] = checks;
  ctx.results["all_passed"] = all;
  ctx.write_table("validate.csv", t);
  return all ? kOk : kRuntimeError;
}

const std::map<std::string, std::function<int(Context&)>>& handlers() {
  static const std::map<std::string, std::function<int(Context&)>> h = {
      {"design-quantizer", design_quantizer}, {"calibrate", calibrate},
      {"sweep-tau", sweep_tau_cmd},           {"sweep-snr", sweep_snr_cmd},
      {"heatmap", heatmap_cmd},               {"roc", roc_cmd},
      {"predict", predict_cmd},               {"validate", validate_cmd},
  };
  return h;
}

void write_summary(const Context& ctx, const std::string& started, double elapsed, int status) {
  json config = json::object();
  for (const auto& e : ctx.raw.entries()) config[e.section][e.key] = e.value;
  json j = {
      {"tool", "wsndet"},
      {"version", WSNDET_VERSION},
      {"git_describe", WSNDET_GIT_DESCRIBE},
      {"command", ctx.command},
      {"master_seed", ctx.cfg.mc.master_seed},
      {"config", config},
      {"started_utc", started},
      {"finished_utc", utc_now()},
      {"elapsed_seconds", elapsed},
      {"exit_status", status},
      {"outputs", ctx.outputs},
      {"results", ctx.results},
  };
  std::filesystem::create_directories(ctx.cfg.out_dir);
  std::string name = ctx.command;
  std::replace(name.begin(), name.end(), '-', '_');
  std::ofstream f(ctx.path(name + "_summary.json"));
  f << j.dump(2) << '\n';
  if (!f) throw std::runtime_error("could not write summary");
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : handlers()) n.push_back(k);
    return n;
  }();
  return names;
}

int run(const std::string& subcommand, const std::optional<std::filesystem::path>& config_path,
        const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err) {
  const auto it = handlers().find(subcommand);
  if (it == handlers().end()) {
    err << "error: unknown subcommand '" << subcommand << "'\n";
    return kParseError;
  }
  try {
    RawConfig raw;
    if (config_path) {
      if (!std::filesystem::exists(*config_path)) {
        throw ParseError("config file not found: " + config_path->string());
      }
      raw.load_file(*config_path);
    }
    for (const auto& o : overrides) raw.apply_override(o);
    const ExperimentConfig cfg(raw);

    Context ctx{subcommand, raw, cfg, out, json::object(), {}};
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    const int status = it->second(ctx);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    write_summary(ctx, started, dt.count(), status);
    return status;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const ValidationError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace wsndet::cli
