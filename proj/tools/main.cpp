#include <CLI11.hpp>

#include <iostream>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using wsndet::cli::kParseError;

  CLI::App app{"Distributed target detection over binary symmetric channels"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  std::string seed, threads, out;
  std::string family, pe, shape;

  for (const auto& name : wsndet::cli::subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config, "INI config file")->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "override, section.key=value (repeatable)");
    sub->add_option("--seed", seed, "master seed (mc.seed)");
    sub->add_option("--threads", threads, "worker threads (mc.threads)");
    sub->add_option("--out", out, "output directory (output.dir)");
    if (name == "design-quantizer") {
      sub->add_option("--family", family, "noise family (noise.family)");
      sub->add_option("--pe", pe, "bit error probability (scene.pe)");
      sub->add_option("--shape", shape, "gengauss exponent (noise.shape)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParseError;
  }

  // Flags are shorthands for overrides and apply after the --set list.
  const std::pair<const char*, const std::string*> shorthands[] = {
      {"mc.seed", &seed},         {"mc.threads", &threads}, {"output.dir", &out},
      {"noise.family", &family},  {"scene.pe", &pe},        {"noise.shape", &shape},
  };
  for (const auto& [key, value] : shorthands) {
    if (!value->empty()) overrides.push_back(std::string(key) + "=" + *value);
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  std::optional<std::filesystem::path> path;
  if (!config.empty()) path = config;
  return wsndet::cli::run(subcommand, path, overrides, std::cout, std::cerr);
}
