#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pulsefront/cli.hpp"
#include "pulsefront/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pulsed nonlocal dispersal with free boundaries"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  for (const auto& name : pulsefront::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "flat key = value config file");
    sub->add_option("--preset", preset_name, "built-in scenario, used when no config is given");
    sub->add_option("--out", out_dir, "output directory");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  pulsefront::ScenarioConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw pulsefront::ConfigError("cannot read config " + config_path);
      std::stringstream text;
      text << in.rdbuf();
      config = pulsefront::parse_config(text.str());
    } else if (!preset_name.empty()) {
      config = pulsefront::preset(preset_name);
    } else {
      throw pulsefront::ConfigError("need --config or --preset");
    }
  } catch (const std::exception& e) {
    std::cerr << "pulsefront " << subcommand << ": " << e.what() << '\n';
    return 2;
  }
  return pulsefront::run(subcommand, config, pulsefront::resolve_out_dir(out_dir, config), std::cout, std::cerr);
}
