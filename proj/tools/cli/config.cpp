#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <limits>

namespace wsndet::cli {

const std::vector<KeySpec>& schema() {
  static const std::vector<KeySpec> keys = {
      {"scene", "sensors_per_side", "7", "sensors per side of the square grid (K = n^2)"},
      {"scene", "placement", "boundary", "boundary | cell: grid includes the region edges or not"},
      {"scene", "eta", "0.2", "attenuation distance of the amplitude attenuation function"},
      {"scene", "alpha", "4", "attenuation decay exponent"},
      {"scene", "tau", "0", "common quantizer threshold"},
      {"scene", "pe", "0", "channel bit error probability; a list runs each value"},
      {"noise", "family", "gaussian", "gaussian | laplace | gengauss | cauchy"},
      {"noise", "variance", "1", "noise power, also the reference for SNR in dB"},
      {"noise", "scale", "auto", "family scale; auto derives it from variance (not for cauchy)"},
      {"noise", "shape", "2", "gengauss exponent in (0, 2]"},
      {"grid", "nc", "50", "search positions per axis (Nc^2 cell centres)"},
      {"grid", "snr_db", "-10:1:20", "amplitude grid, +-theta per SNR value plus 0"},
      {"mc", "seed", "1", "master seed"},
      {"mc", "threads", "0", "worker threads; 0 uses every core. Does not change results"},
      {"mc", "trials_h0", "50000", "H0 trials for calibration"},
      {"mc", "trials_h1", "20000", "H1 trials per detection estimate"},
      {"mc", "glr_trials_h0", "10000", "H0 trials for the GLR rule"},
      {"mc", "glr_trials_h1", "5000", "H1 trials per estimate for the GLR rule"},
      {"mc", "pf", "0.01", "false-alarm targets"},
      {"mc", "target_draw", "uniform", "uniform | fixed: H1 target position"},
      {"mc", "target_x", "0.5", "fixed target x"},
      {"mc", "target_y", "0.5", "fixed target y"},
      {"experiment", "rules", "grao,glr", "glr | grao | grao-opt | clairvoyant-rao"},
      {"experiment", "taus", "-2:0.25:2", "thresholds for sweep-tau"},
      {"experiment", "snr_db", "0", "SNR values (dB) for the experiment"},
      {"experiment", "polarities", "1,-1", "sign of theta under H1 for sweep-tau"},
      {"experiment", "lattice", "10", "heatmap target lattice per axis"},
      {"experiment", "roc_points", "101", "ROC operating points"},
      {"quantizer", "lo", "auto", "search interval; auto is -5 scale"},
      {"quantizer", "hi", "auto", "search interval; auto is +5 scale"},
      {"quantizer", "tolerance", "1e-8", "golden-section tolerance on tau"},
      {"quantizer", "scan_points", "10000", "coarse scan points"},
      {"quantizer", "curve_points", "401", "points of the objective curve CSV"},
      {"output", "dir", "out", "output directory"},
  };
  return keys;
}

RawConfig::RawConfig() {
  for (const auto& k : schema()) entries_.push_back({k.section, k.key, k.default_value});
}

RawConfig::Entry* RawConfig::find(const std::string& section, const std::string& key) {
  for (auto& e : entries_) {
    if (e.section == section && e.key == key) return &e;
  }
  return nullptr;
}

void RawConfig::set(const std::string& section, const std::string& key, const std::string& value) {
  Entry* e = find(section, key);
  if (e == nullptr) throw ValidationError("unknown config key: " + section + "." + key);
  e->value = value;
}

const std::string& RawConfig::get(const std::string& section, const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) return e.value;
  }
  throw std::logic_error("key not in schema: " + section + "." + key);
}

void RawConfig::load_file(const std::filesystem::path& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ValidationError("key outside a section: " + section);
    for (const auto& [key, value] : body) set(section, key, value.data());
  }
}

void RawConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ParseError("override must look like section.key=value: " + assignment);
  }
  set(assignment.substr(0, dot), assignment.substr(dot + 1, eq - dot - 1), assignment.substr(eq + 1));
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

std::int64_t parse_integer(const std::string& text) {
  const std::string t = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ValidationError("not an integer: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ValidationError("not a nonnegative integer: '" + text + "'");
  }
  return v;
}

std::size_t positive_count(const std::string& text, const char* what) {
  const auto v = parse_integer(text);
  if (v < 1) throw ValidationError(std::string(what) + " must be at least 1");
  return static_cast<std::size_t>(v);
}

struct Reader {
  const RawConfig& raw;
  std::string section;

  const std::string& str(const char* key) const { return raw.get(section, key); }

  template <class F>
  auto wrap(const char* key, F&& f) const {
    try {
      return f();
    } catch (const std::exception& e) {
      throw ValidationError(section + "." + key + ": " + e.what());
    }
  }

  double number(const char* key) const { return wrap(key, [&] { return parse_number(str(key)); }); }
  std::vector<double> list(const char* key) const {
    return wrap(key, [&] { return parse_number_list(str(key)); });
  }
  std::int64_t integer(const char* key) const {
    return wrap(key, [&] { return parse_integer(str(key)); });
  }
};

NoiseModel make_noise(const RawConfig& raw) {
  const Reader r{raw, "noise"};
  return r.wrap("family", [&] {
    const NoiseFamily family = parse_noise_family(trim(r.str("family")));
    const double shape = r.number("shape");
    const std::string scale = trim(r.str("scale"));
    if (scale == "auto") {
      const double variance = r.number("variance");
      if (!(variance > 0.0)) throw ValidationError("noise.variance must be positive");
      const NoiseModel unit = NoiseModel::unit_variance(family, shape);
      return NoiseModel(family, unit.scale() * std::sqrt(variance), shape);
    }
    return NoiseModel(family, parse_number(scale), shape);
  });
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw ValidationError("not a finite number: '" + text + "'");
  }
  return v;
}

std::vector<double> parse_number_list(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double lo = parse_number(parts[0]);
    const double step = parse_number(parts[1]);
    const double hi = parse_number(parts[2]);
    if (!(step > 0.0) || hi < lo) throw ValidationError("bad range '" + text + "'");
    const auto n = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
    if (n > 1000000) throw ValidationError("range too long '" + text + "'");
    std::vector<double> out;
    for (std::int64_t i = 0; i <= n; ++i) {
      const double v = lo + static_cast<double>(i) * step;
      out.push_back(std::fabs(v) < 1e-12 * step ? 0.0 : v);
    }
    return out;
  }
  if (parts.size() != 1) throw ValidationError("bad range '" + text + "'");
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_number(p));
  return out;
}

ExperimentConfig::ExperimentConfig(const RawConfig& raw) : noise(make_noise(raw)) {
  const Reader scene_r{raw, "scene"};
  sensors_per_side = static_cast<int>(scene_r.integer("sensors_per_side"));
  if (sensors_per_side < 2) throw ValidationError("scene.sensors_per_side must be at least 2");
  const std::string place = trim(scene_r.str("placement"));
  if (place == "boundary") {
    placement = SensorPlacement::Boundary;
  } else if (place == "cell") {
    placement = SensorPlacement::CellCentered;
  } else {
    throw ValidationError("scene.placement must be boundary or cell");
  }
  eta = scene_r.number("eta");
  alpha = scene_r.number("alpha");
  tau = scene_r.number("tau");
  pes = scene_r.list("pe");

  const Reader noise_r{raw, "noise"};
  noise_power = noise_r.number("variance");
  if (!(noise_power > 0.0)) throw ValidationError("noise.variance must be positive");

  const Reader grid_r{raw, "grid"};
  nc = static_cast<int>(grid_r.integer("nc"));
  if (nc < 1) throw ValidationError("grid.nc must be at least 1");
  grid_snr_db = grid_r.list("snr_db");

  const Reader mc_r{raw, "mc"};
  mc.master_seed = mc_r.wrap("seed", [&] { return parse_unsigned(mc_r.str("seed")); });
  mc.threads = static_cast<unsigned>(mc_r.wrap("threads", [&] { return parse_unsigned(mc_r.str("threads")); }));
  mc.default_budget = {positive_count(mc_r.str("trials_h0"), "mc.trials_h0"),
                       positive_count(mc_r.str("trials_h1"), "mc.trials_h1")};
  mc.glr_budget = {positive_count(mc_r.str("glr_trials_h0"), "mc.glr_trials_h0"),
                   positive_count(mc_r.str("glr_trials_h1"), "mc.glr_trials_h1")};
  mc.pf_targets = mc_r.list("pf");
  for (double pf : mc.pf_targets) {
    if (!(pf > 0.0 && pf < 1.0)) throw ValidationError("mc.pf values must lie in (0, 1)");
  }
  mc.target_draw = mc_r.wrap("target_draw", [&] { return parse_target_draw(trim(mc_r.str("target_draw"))); });
  mc.fixed_position = {mc_r.number("target_x"), mc_r.number("target_y")};
  if (!region().contains(mc.fixed_position)) throw ValidationError("mc.target_x/y outside the region");
  mc.noise_power = noise_power;

  const Reader ex{raw, "experiment"};
  for (const auto& key : split(ex.str("rules"), ',')) {
    rules.push_back(ex.wrap("rules", [&] { return parse_rule(key); }));
  }
  taus = ex.list("taus");
  snr_db = ex.list("snr_db");
  for (double p : ex.list("polarities")) {
    if (p != 1.0 && p != -1.0) throw ValidationError("experiment.polarities must be 1 or -1");
    polarities.push_back(static_cast<int>(p));
  }
  lattice = static_cast<int>(ex.integer("lattice"));
  if (lattice < 1) throw ValidationError("experiment.lattice must be at least 1");
  roc_points = static_cast<int>(ex.integer("roc_points"));
  if (roc_points < 2) throw ValidationError("experiment.roc_points must be at least 2");

  const Reader q{raw, "quantizer"};
  search = ThresholdSearch::around_zero(noise);
  if (trim(q.str("lo")) != "auto") search.lo = q.number("lo");
  if (trim(q.str("hi")) != "auto") search.hi = q.number("hi");
  search.tolerance = q.number("tolerance");
  search.scan_points = static_cast<int>(q.integer("scan_points"));
  curve_points = static_cast<int>(q.integer("curve_points"));
  if (curve_points < 2) throw ValidationError("quantizer.curve_points must be at least 2");

  out_dir = trim(raw.get("output", "dir"));
  if (out_dir.empty()) throw ValidationError("output.dir is empty");

  // Let the core constructors check the remaining ranges now, not mid-run.
  try {
    for (double pe : pes) scene(pe);
    grid().validate(region());
    for (double pf : mc.pf_targets) {
      for (Rule rule : rules) check_calibration_budget(pf, mc.budget(rule).h0);
    }
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

Scene ExperimentConfig::scene(double pe) const {
  return Scene::homogeneous(preset_grid_wsn(sensors_per_side, region(), placement), noise, tau, pe,
                            eta, alpha, region());
}

GridSpec ExperimentConfig::grid() const {
  return default_grids(region(), nc, grid_snr_db, noise_power);
}

}  // namespace wsndet::cli
