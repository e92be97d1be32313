#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "rkit/errors.hpp"
#include "rkit/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"resolvent-kit: finite-basis resolvent, S-matrix scans, resonances, bound states and DOS"};
  app.set_version_flag("--version", rkit::version());

  std::string command;
  std::string config_path;
  app.add_option("command", command, "smatrix | resonances (resonant-scan) | bound-states | dos | resolvent | selftest");
  app.add_option("-c,--config", config_path, "key = value configuration file");

  // Every config key doubles as a --key override.
  std::map<std::string, std::string> overrides;
  for (const auto& key : rkit::config_keys()) {
    if (key == "command") continue;
    const std::string flag = key == "gnuplot_script" ? "--gnuplot-script" : "--" + key;
    app.add_option(flag, overrides[key], "override '" + key + "'");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  rkit::Settings file;
  rkit::Settings cli;
  try {
    if (!config_path.empty()) file = rkit::load_config_file(config_path);
    if (!command.empty()) cli.emplace_back("command", command);
    bool threads_given = false;
    for (const auto& key : rkit::config_keys()) {
      if (key == "command") continue;
      const std::string flag = key == "gnuplot_script" ? "--gnuplot-script" : "--" + key;
      if (app.count(flag) > 0) {
        cli.emplace_back(key, overrides[key]);
        threads_given = threads_given || key == "threads";
      }
    }
    if (!threads_given) {
      bool in_file = false;
      for (const auto& kv : file) in_file = in_file || kv.first == "threads";
      if (!in_file) {
        if (const char* env = std::getenv("RESOLVENT_KIT_THREADS")) cli.emplace_back("threads", env);
      }
    }
    const rkit::RunConfig config = rkit::make_config(file, cli);
    return rkit::run(config, std::cout, std::cerr);
  } catch (const rkit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
}
