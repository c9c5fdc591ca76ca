#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace fs = std::filesystem;
using namespace wsndet::cli;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wsndet_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::string& cmd, std::vector<std::string> overrides,
               std::optional<fs::path> config = std::nullopt) {
  std::ostringstream out, err;
  const int code = run(cmd, config, overrides, out, err);
  return {code, out.str(), err.str()};
}

// Small and fast Monte Carlo settings.
std::vector<std::string> quick(const fs::path& dir) {
  return {"grid.nc=6",          "grid.snr_db=-10:5:20", "mc.trials_h0=2000", "mc.trials_h1=300",
          "mc.glr_trials_h0=2000", "mc.glr_trials_h1=200", "mc.pf=0.05", "output.dir=" + dir.string()};
}

}  // namespace

TEST(CliConfig, NumberLists) {
  EXPECT_EQ(parse_number_list("1, 2.5,-3"), (std::vector<double>{1, 2.5, -3}));
  const auto r = parse_number_list("-2:0.25:2");
  ASSERT_EQ(r.size(), 17u);
  EXPECT_EQ(r[8], 0.0);
  EXPECT_EQ(r.back(), 2.0);
  EXPECT_EQ(parse_number_list("-10:1:20").size(), 31u);
  EXPECT_THROW(parse_number_list("1:0:2"), ValidationError);
  EXPECT_THROW(parse_number_list("1,x"), ValidationError);
  EXPECT_THROW(parse_number("nan"), ValidationError);
}

TEST(CliConfig, DefaultsResolve) {
  const RawConfig raw;
  const ExperimentConfig cfg(raw);
  EXPECT_EQ(cfg.scene(0.0).size(), 49u);
  EXPECT_EQ(cfg.grid().thetas.size(), 63u);
  EXPECT_EQ(cfg.grid().positions.size(), 2500u);
  EXPECT_NEAR(cfg.noise.variance(), 1.0, 1e-12);
  EXPECT_EQ(raw.entries().size(), schema().size());
}

TEST(CliConfig, RejectsUnknownKeysAndBadValues) {
  RawConfig raw;
  EXPECT_THROW(raw.apply_override("scene.nope=1"), ValidationError);
  EXPECT_THROW(raw.apply_override("no_dot_here"), ParseError);
  raw.apply_override("mc.pf=0.001");  // 0.001 * 50000 >= 100 but GLR has 10000
  EXPECT_THROW(ExperimentConfig{raw}, ValidationError);
}

TEST(CliRun, ExitCodes) {
  const auto dir = scratch("codes");
  EXPECT_EQ(invoke("no-such-command", {}).code, kParseError);
  EXPECT_EQ(invoke("predict", {"bogus"}).code, kParseError);
  EXPECT_EQ(invoke("predict", {"scene.pe=0.6", "output.dir=" + dir.string()}).code, kValidationError);
  EXPECT_EQ(invoke("predict", {"noise.family=cauchy", "output.dir=" + dir.string()}).code,
            kValidationError);
  EXPECT_EQ(invoke("predict", {}, dir / "missing.cfg").code, kParseError);

  fs::create_directories(dir);
  std::ofstream(dir / "bad.cfg") << "[scene\nsensors_per_side = 7\n";
  EXPECT_EQ(invoke("predict", {}, dir / "bad.cfg").code, kParseError);
  std::ofstream(dir / "unknown.cfg") << "[scene]\nsensorz = 7\n";
  EXPECT_EQ(invoke("predict", {}, dir / "unknown.cfg").code, kValidationError);
}

TEST(CliRun, DesignQuantizer) {
  const auto dir = scratch("quantizer");
  const auto o = invoke("design-quantizer", {"noise.family=gaussian", "scene.pe=0.1",
                                             "output.dir=" + dir.string()});
  ASSERT_EQ(o.code, kOk) << o.err;
  EXPECT_NE(o.out.find("tau_star="), std::string::npos);
  const std::string curve = slurp(dir / "quantizer_curve.csv");
  EXPECT_NE(curve.find("# noise.family=gaussian\r\n"), std::string::npos);
  EXPECT_NE(curve.find("pe,tau,objective\r\n"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "design_quantizer_summary.json"));
}

TEST(CliRun, ValidatePasses) {
  const auto dir = scratch("validate");
  const auto o = invoke("validate", {"output.dir=" + dir.string()});
  EXPECT_EQ(o.code, kOk) << o.out;
  EXPECT_EQ(o.out.find("FAIL"), std::string::npos);
}

TEST(CliRun, ConfigFileAndPredict) {
  const auto dir = scratch("predict");
  fs::create_directories(dir);
  std::ofstream(dir / "p.cfg") << "; comment\n[experiment]\nsnr_db = 5\n[mc]\npf = 0.01\n";
  const auto o = invoke("predict", {"output.dir=" + dir.string()}, dir / "p.cfg");
  ASSERT_EQ(o.code, kOk) << o.err;
  EXPECT_NE(o.out.find("lambda="), std::string::npos);
  const std::string csv = slurp(dir / "predict.csv");
  EXPECT_NE(csv.find("# experiment.snr_db=5\r\n"), std::string::npos);
  EXPECT_NE(csv.find("# mc.seed=1\r\n"), std::string::npos);
}

TEST(CliRun, SweepsReproduceByteForByte) {
  const auto a = scratch("repro_a");
  const auto b = scratch("repro_b");
  auto args_a = quick(a);
  auto args_b = quick(b);
  args_a.push_back("mc.threads=1");
  args_b.push_back("mc.threads=1");
  for (const char* cmd : {"sweep-snr", "calibrate", "roc"}) {
    ASSERT_EQ(invoke(cmd, args_a).code, kOk) << cmd;
    ASSERT_EQ(invoke(cmd, args_b).code, kOk) << cmd;
  }
  for (const char* file : {"sweep_snr.csv", "calibration.csv", "roc.csv"}) {
    std::string ta = slurp(a / file);
    std::string tb = slurp(b / file);
    // The output directory is part of the echoed config.
    const auto strip = [](std::string s, const std::string& what) {
      for (auto p = s.find(what); p != std::string::npos; p = s.find(what)) s.erase(p, what.size());
      return s;
    };
    EXPECT_EQ(strip(ta, a.string()), strip(tb, b.string())) << file;
  }
}

TEST(CliRun, SweepShapes) {
  const auto dir = scratch("shapes");
  auto args = quick(dir);
  args.push_back("scene.pe=0,0.1");
  args.push_back("experiment.taus=-1:1:1");
  args.push_back("experiment.snr_db=0");
  args.push_back("experiment.lattice=2");
  ASSERT_EQ(invoke("sweep-tau", args).code, kOk);
  ASSERT_EQ(invoke("heatmap", args).code, kOk);
  const std::string tau = slurp(dir / "sweep_tau.csv");
  EXPECT_NE(tau.find("rule,pe,tau,snr_db,polarity"), std::string::npos);
  // 2 pe x 2 rules x 3 taus x 1 snr x 2 polarities x 1 pf
  std::size_t rows = 0;
  for (char c : tau) rows += c == '\n';
  EXPECT_EQ(rows, schema().size() + 1 + 1 + 24);
  const std::string heat = slurp(dir / "heatmap.csv");
  EXPECT_NE(heat.find("rule,pe,snr_db,x,y,pd"), std::string::npos);
}
