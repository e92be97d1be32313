#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rkit/analysis.hpp"

namespace rkit {

using Settings = std::vector<std::pair<std::string, std::string>>;

struct RunConfig {
  std::string command = "smatrix";
  SystemSpec system;
  std::string potential_text = "0";
  double e_min = 0.1;
  double e_max = 8.0;
  long steps = 400;
  int threads = 0;
  std::string csv;
  std::string json;
  std::string gnuplot_script;
  ResonanceOptions resonance;
  DosOptions dos;
  Index n = 0;
  Index m = 0;
  double eta = 0.0;
  double range = 40.0;
};

// Names accepted in config files and as --key overrides.
const std::vector<std::string>& config_keys();

// Flat "key = value" lines; '#' starts a comment. Throws ConfigError with the line number.
Settings parse_config_text(const std::string& text, const std::string& source = "config");
Settings load_config_file(const std::string& path);

// Defaults, then file settings, then command-line settings.
RunConfig make_config(const Settings& file, const Settings& cli);
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);
void validate(const RunConfig& config);

// Effective settings in a fixed order, for the JSON echo.
Settings echo(const RunConfig& config);

// 0 ok, 1 config error, 2 numerical error. Messages go to err; the CSV goes to
// out when no csv path is set.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

std::string version();

}  // namespace rkit
