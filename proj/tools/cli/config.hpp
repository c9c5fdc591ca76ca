#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsndet/montecarlo.hpp"
#include "wsndet/quantizer.hpp"

namespace wsndet::cli {

/// Malformed config file or override syntax (exit 2).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Well-formed input with bad keys or values (exit 3).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct KeySpec {
  const char* section;
  const char* key;
  const char* default_value;
  const char* help;
};

/// Every accepted key, in echo order.
const std::vector<KeySpec>& schema();

/// Raw key/value pairs after defaults, file and overrides, in schema order.
class RawConfig {
 public:
  RawConfig();

  void load_file(const std::filesystem::path& path);
  /// "section.key=value".
  void apply_override(const std::string& assignment);
  void set(const std::string& section, const std::string& key, const std::string& value);

  const std::string& get(const std::string& section, const std::string& key) const;

  struct Entry {
    std::string section;
    std::string key;
    std::string value;
  };
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  Entry* find(const std::string& section, const std::string& key);
  std::vector<Entry> entries_;
};

/// Typed view of a RawConfig. Constructing it validates every value.
struct ExperimentConfig {
  // scene
  int sensors_per_side;
  SensorPlacement placement;
  double eta;
  double alpha;
  double tau;
  std::vector<double> pes;
  // noise
  NoiseModel noise;
  double noise_power;
  // grid
  int nc;
  std::vector<double> grid_snr_db;
  // mc
  McConfig mc;
  // experiment
  std::vector<Rule> rules;
  std::vector<double> taus;
  std::vector<double> snr_db;
  std::vector<int> polarities;
  int lattice;
  int roc_points;
  // quantizer
  ThresholdSearch search;
  int curve_points;
  // output
  std::filesystem::path out_dir;

  explicit ExperimentConfig(const RawConfig& raw);

  Region region() const { return Region::unit_square(); }
  Scene scene(double pe) const;
  GridSpec grid() const;
  Point fixed_target() const { return mc.fixed_position; }
};

/// "a,b,c" or "lo:step:hi" (inclusive, tolerant to rounding).
std::vector<double> parse_number_list(const std::string& text);
double parse_number(const std::string& text);

}  // namespace wsndet::cli
