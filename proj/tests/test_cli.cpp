#include <doctest.h>

#include <cmath>
#include <random>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rkit/potential.hpp"
#include "rkit/run.hpp"
#include "rkit/table_io.hpp"

using namespace rkit;

namespace {

int column_of(const std::string& text) {
  try {
    parse_potential(text);
  } catch (const PotentialSyntaxError& e) {
    return e.column();
  }
  return 0;
}

RunConfig config(const Settings& cli) { return make_config({}, cli); }

}  // namespace

TEST_CASE("potential evaluation") {
  CHECK(std::abs(parse_potential("7.5*r^2*exp(-r)")(1.0) - 7.5 * std::exp(-1.0)) <= 1e-15);
  const double wells = 5.0 - 8.0 * std::exp(-2.45);
  CHECK(std::abs(parse_potential("5*exp(-(r-3.5)^2/4) - 8*exp(-r^2/5)")(3.5) - wells) <= 1e-14);
  CHECK(parse_potential("-r^2")(3.0) == -9.0);
  CHECK(parse_potential("2^3^2")(1.0) == 512.0);
  CHECK(parse_potential("1 - 2 - 3")(1.0) == -4.0);
  CHECK(parse_potential("8 / 2 / 2")(1.0) == 2.0);
  CHECK(parse_potential("1.5e-1*r")(2.0) == doctest::Approx(0.3));
  CHECK(parse_potential("0").is_zero());
  CHECK(PotentialExpr().is_zero());
  CHECK_FALSE(parse_potential("r").is_zero());
}

TEST_CASE("potential syntax errors") {
  CHECK(column_of("exp(") == 5);
  CHECK_THROWS_AS(parse_potential(""), PotentialSyntaxError);
  CHECK_THROWS_AS(parse_potential("   "), PotentialSyntaxError);
  CHECK_THROWS_AS(parse_potential("(r + 1"), PotentialSyntaxError);
  CHECK_THROWS_AS(parse_potential("r + 1)"), PotentialSyntaxError);
  CHECK(column_of("2*sin(r)") == 3);
  CHECK(column_of("r*x") == 3);
  try {
    parse_potential("1 +\n  * r");
    FAIL("expected a syntax error");
  } catch (const PotentialSyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
    CHECK(std::string(e.what()).find("line 2, column 3") != std::string::npos);
  }
}

TEST_CASE("parse-print-parse") {
  const char* samples[] = {"7.5*r^2*exp(-r)", "5*exp(-(r-3.5)^2/4) - 8*exp(-r^2/5)", "-r^-2", "0.1 + r/3",
                           "exp(exp(-r))*(1-r)^3", "--r"};
  for (const char* text : samples) {
    const PotentialExpr a = parse_potential(text);
    const PotentialExpr b = parse_potential(a.to_string());
    CHECK(a == b);
    CHECK(b.to_string() == a.to_string());
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 200; ++i) {
    const double c = u(rng) / 7.0;
    std::ostringstream os;
    os.precision(17);
    os << c << "*r";
    const PotentialExpr a = parse_potential(os.str());
    CHECK(a == parse_potential(a.to_string()));
    CHECK(a(1.0) == parse_potential(a.to_string())(1.0));
  }
  CHECK_FALSE(parse_potential("r+1") == parse_potential("1+r"));
}

TEST_CASE("short-range check") {
  CHECK_NOTHROW(check_short_range(parse_potential("7.5*r^2*exp(-r)")));
  CHECK_THROWS_AS(check_short_range(parse_potential("1/r")), ConfigError);
  CHECK_THROWS_AS(check_short_range(parse_potential("1/(r-2)")), ConfigError);
}

TEST_CASE("config text") {
  const Settings s = parse_config_text("# comment\ncommand = resonances\nlambda=20 # trailing\n\nN = 100\n");
  REQUIRE(s.size() == 3);
  CHECK(s[1] == std::pair<std::string, std::string>{"lambda", "20"});
  try {
    parse_config_text("lambda = 1\nbogus = 2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) == "config:2: unknown key 'bogus'");
  }
  CHECK_THROWS_AS(parse_config_text("lambda 1\n"), ConfigError);
}

TEST_CASE("precedence: command line over file over defaults") {
  const RunConfig d = make_config({}, {});
  CHECK(d.system.basis.lambda == 1.0);
  const RunConfig f = make_config({{"lambda", "20"}, {"N", "100"}}, {});
  CHECK(f.system.basis.lambda == 20.0);
  const RunConfig c = make_config({{"lambda", "20"}, {"N", "100"}}, {{"lambda", "2"}});
  CHECK(c.system.basis.lambda == 2.0);
  CHECK(c.system.basis.N == 100);
  CHECK(config({{"command", "resonant-scan"}}).command == "resonances");
  CHECK_THROWS_AS(config({{"lambda", "abc"}}), ConfigError);
  CHECK_THROWS_AS(config({{"potential", "exp("}}), ConfigError);
}

TEST_CASE("exit codes") {
  std::ostringstream out, err;
  SUBCASE("empty energy range") {
    const RunConfig c = config({{"e_min", "5"}, {"e_max", "1"}});
    CHECK(run(c, out, err) == 1);
    CHECK(err.str().find("e_min") != std::string::npos);
  }
  SUBCASE("unknown command") {
    RunConfig c;
    c.command = "plot";
    CHECK(run(c, out, err) == 1);
  }
  SUBCASE("dos needs the oscillator basis") {
    CHECK(run(config({{"command", "dos"}}), out, err) == 1);
  }
  SUBCASE("long-range potential") {
    CHECK(run(config({{"potential", "1/r"}}), out, err) == 1);
  }
  SUBCASE("numerical failure") {
    const RunConfig c =
        config({{"command", "dos"}, {"family", "oscillator"}, {"lambda", "0.5"}, {"N", "30"}, {"potential", "7.5*r^2*exp(-r)"}});
    CHECK(run(c, out, err) == 2);
    CHECK(err.str().find("basis-scattering/oscillator_matrices") != std::string::npos);
  }
  SUBCASE("selftest") {
    CHECK(run(config({{"command", "selftest"}}), out, err) == 0);
    CHECK(out.str().find("FAIL") == std::string::npos);
  }
}

TEST_CASE("resonant scan outputs") {
  const RunConfig c = config({{"command", "resonant-scan"},
                              {"potential", "7.5*r^2*exp(-r)"},
                              {"N", "60"},
                              {"e_min", "0.5"},
                              {"e_max", "8"},
                              {"steps", "301"}});
  std::ostringstream out, err;
  REQUIRE(run(c, out, err) == 0);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("E (hartree),Re S,Im S,|1-S|", 0) == 0);

  std::istringstream again(out.str());
  const ScanTable t = read_csv(again);
  CHECK(t.rows() == 301);
}

TEST_CASE("JSON summary") {
  const std::string path = "rkit_test_summary.json";
  const RunConfig c = config({{"command", "resonances"},
                              {"potential", "7.5*r^2*exp(-r)"},
                              {"N", "60"},
                              {"e_min", "0.5"},
                              {"e_max", "8"},
                              {"steps", "301"},
                              {"json", path}});
  std::ostringstream out, err;
  REQUIRE(run(c, out, err) == 0);
  std::ifstream in(path);
  const nlohmann::json j = nlohmann::json::parse(in);
  for (const char* key : {"config", "results", "diagnostics", "version"}) CHECK(j.contains(key));
  CHECK(j["version"] == version());
  bool found = false;
  for (const auto& p : j["results"]["resonances"]) found = found || std::abs(p["im_s_peak"].get<double>() - 3.425) <= 0.01;
  CHECK(found);
  std::remove(path.c_str());
}

TEST_CASE("CSV values round-trip exactly") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScanTable t;
  std::vector<double> v;
  for (int i = 0; i < 500; ++i) {
    t.energies.push_back(i * 0.1 + u(rng) * 1e-3);
    v.push_back(std::ldexp(u(rng), static_cast<int>(u(rng) * 300)));
  }
  v[3] = std::numeric_limits<double>::infinity();
  v[4] = std::numeric_limits<double>::denorm_min();
  v[5] = -0.0;
  t.add_column("|G|", "1/hartree", v);
  std::stringstream s;
  write_csv(t, s);
  const ScanTable back = read_csv(s);
  CHECK(back.energies == t.energies);
  REQUIRE(back.columns.size() == 1);
  CHECK(back.columns[0].name == "|G|");
  CHECK(back.columns[0].unit == "1/hartree");
  CHECK(back.columns[0].values == v);
  CHECK(std::signbit(back.columns[0].values[5]));
  CHECK(format_double(0.1) == "0.10000000000000001");
}
