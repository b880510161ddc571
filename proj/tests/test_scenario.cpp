#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "quadtorque/constants.hpp"
#include "quadtorque/decimal.hpp"
#include "quadtorque/scenario.hpp"

using namespace quadtorque;
namespace fs = std::filesystem;

namespace {

std::string preset() { return std::string(preset_text("paper_fig2_fig4")); }

std::string replaced(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  return text;
}

int line_containing(const std::string& text, const std::string& needle) {
  std::istringstream in(text);
  std::string line;
  for (int n = 1; std::getline(in, line); ++n)
    if (line.find(needle) != std::string::npos) return n;
  return 0;
}

ConfigError config_error(const std::string& text) {
  try {
    (void)load_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("configuration was accepted");
  return ConfigError("", 0, "");
}

SweepConfig small_config() {
  std::string text = replaced(preset(), "points: 112", "points: 6");
  return load_config(text);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("decimal scaling") {
  CHECK(decimal::parse("280", -9) == 280e-9);
  CHECK(decimal::parse("2.8e-7") == 280e-9);
  CHECK(decimal::parse("0.28", -6) == 280e-9);
  CHECK(decimal::parse("-1.5e3", 2) == -1.5e5);
  CHECK(decimal::scale(6e-31, 30) == 0.6);
  CHECK(decimal::scale(-2.1e-24, 21) == -0.0021);
  CHECK(decimal::scale(2.85e-7, 9) == 285.0);
  CHECK(decimal::format(0.6) == "0.6");
  CHECK(decimal::format(-0.0) == "0");
  CHECK(decimal::format(0.0) == "0");
  CHECK(decimal::format(1e-300) == "1e-300");
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -7.5e-12}) CHECK(std::stod(decimal::format(v)) == v);
  CHECK_THROWS_AS(decimal::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(decimal::parse("1.0x"), std::invalid_argument);
  CHECK_THROWS_AS(decimal::parse(""), std::invalid_argument);
}

TEST_CASE("preset contents") {
  const SweepConfig cfg = load_config(preset());
  CHECK(cfg.fiber.radius == 280e-9);
  CHECK(cfg.fiber.n_core == 1.4615);
  CHECK(cfg.fiber.n_clad == 1.0);
  CHECK(cfg.transition.wavelength == 516.5e-9);
  CHECK(cfg.transition.oscillator_strength == 8.06e-7);
  CHECK(cfg.transition.decay_rate == constants::gamma0_rb_4d52);
  CHECK(cfg.transition.M == HalfInt(2));
  CHECK(cfg.transition.F == HalfInt(2));
  CHECK(cfg.transition.Fp == HalfInt(4));
  CHECK(cfg.transition.J == half(1));
  CHECK(cfg.transition.Jp == half(5));
  CHECK(cfg.transition.I == half(3));
  CHECK(cfg.sublevels == std::vector<HalfInt>{0, 1, 2, 3, 4});
  REQUIRE(cfg.drives.size() == 4);
  const char* names[] = {"HE11", "TE01", "TM01", "HE21"};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(cfg.drives[i].mode.name() == names[i]);
    CHECK(cfg.drives[i].power == 1e-9);
    CHECK(cfg.drives[i].detuning == 0.0);
    CHECK(cfg.drives[i].f == 1);
    CHECK(cfg.drives[i].p == 1);
  }
  CHECK(cfg.r_range.r_min > cfg.fiber.radius);
  CHECK(cfg.r_range.points >= 2);
  CHECK(cfg.output == "paper_fig2_fig4.csv");
  CHECK_THROWS_AS(preset_text("nope"), std::out_of_range);
}

TEST_CASE("shipped config file equals the built-in preset") {
  const fs::path file = fs::path(QUADTORQUE_SOURCE_DIR) / "configs" / "paper_fig2_fig4.yaml";
  CHECK(read_file(file) == preset());
  CHECK(load_config_file(file) == load_config(preset()));
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.yaml"), std::runtime_error);
}

TEST_CASE("configuration errors name the key and line") {
  SUBCASE("atom inside the fiber") {
    const std::string text = replaced(preset(), "r_min: 285 nm", "r_min: 250 nm");
    const ConfigError e = config_error(text);
    CHECK(e.key() == "sweep.r_min");
    CHECK(e.line() == line_containing(text, "r_min"));
    CHECK(std::string(e.what()).find("inside fiber") != std::string::npos);
  }
  SUBCASE("unknown key") {
    const std::string text = replaced(preset(), "  n_clad: 1\n", "  n_clad: 1\n  n_jacket: 1.2\n");
    const ConfigError e = config_error(text);
    CHECK(e.key() == "fiber.n_jacket");
    CHECK(e.line() == line_containing(text, "n_jacket"));
  }
  SUBCASE("missing unit") {
    const std::string text = replaced(preset(), "radius: 280 nm", "radius: 280");
    const ConfigError e = config_error(text);
    CHECK(e.key() == "fiber.radius");
    CHECK(e.line() == line_containing(text, "radius"));
    CHECK(std::string(e.what()).find("unit") != std::string::npos);
  }
  SUBCASE("unsupported unit") {
    const ConfigError e = config_error(replaced(preset(), "power: 1 nW, detuning: 0 MHz}\n  - {mode: TE01",
                                                "power: 1 dBm, detuning: 0 MHz}\n  - {mode: TE01"));
    CHECK(e.key() == "drives[0].power");
  }
  SUBCASE("selection rule") {
    const std::string text = replaced(preset(), "F_upper: 4", "F_upper: 5");
    const ConfigError e = config_error(text);
    CHECK(e.key() == "M_upper");
    CHECK(e.line() == line_containing(text, "M_upper"));
  }
  SUBCASE("sublevel out of reach") {
    CHECK(config_error(replaced(preset(), "[0, 1, 2, 3, 4]", "[0, 5]")).key() == "M_upper");
  }
  SUBCASE("bad sign") {
    CHECK(config_error(replaced(preset(), "{mode: HE11, f: +1", "{mode: HE11, f: 2")).key() == "drives[0].f");
  }
  SUBCASE("bad mode name") {
    CHECK(config_error(replaced(preset(), "mode: HE21", "mode: XY21")).key() == "drives[3].mode");
  }
  SUBCASE("missing section") {
    const ConfigError e = config_error(replaced(preset(), "sweep:", "sweeps:"));
    CHECK(e.key() == "sweeps");
  }
  SUBCASE("too few points") {
    CHECK(config_error(replaced(preset(), "points: 112", "points: 1")).key() == "sweep.points");
  }
  SUBCASE("malformed document") {
    CHECK(config_error("fiber: [unclosed").key() == "<document>");
  }
  SUBCASE("non-positive oscillator strength") {
    CHECK(config_error(replaced(preset(), "oscillator_strength: 8.06e-7", "oscillator_strength: 0")).key() ==
          "M_upper");
  }
}

TEST_CASE("units are interpreted consistently") {
  std::string meters = preset();
  meters = replaced(meters, "radius: 280 nm", "radius: 2.8e-7 m");
  meters = replaced(meters, "wavelength: 516.5 nm", "wavelength: 0.5165 um");
  meters = replaced(meters, "r_min: 285 nm", "r_min: 2.85e-7 m");
  meters = replaced(meters, "r_max: 840 nm", "r_max: 0.00000084 m");
  meters = replaced(meters, "power: 1 nW, detuning: 0 MHz}\n  - {mode: TE01",
                    "power: 1000 pW, detuning: 0 rad/s}\n  - {mode: TE01");
  meters = replaced(meters, "decay_rate: 1.119e7 s^-1", "decay_rate: 11190000 1/s");
  const SweepConfig a = load_config(preset()), b = load_config(meters);
  CHECK(a == b);
  CHECK(format_csv(run_sweep(a)) == format_csv(run_sweep(b)));

  const SweepConfig mhz = load_config(replaced(preset(), "detuning: 0 MHz}\n  - {mode: TE01", "detuning: 2.5 MHz}\n  - {mode: TE01"));
  CHECK(mhz.drives[0].detuning == doctest::Approx(2 * constants::pi * 2.5e6).epsilon(1e-15));
  const SweepConfig khz = load_config(replaced(preset(), "decay_rate: 1.119e7 s^-1", "decay_rate: 1781 kHz"));
  CHECK(khz.transition.decay_rate == doctest::Approx(2 * constants::pi * 1.781e6).epsilon(1e-15));
}

TEST_CASE("serialization round trip") {
  const SweepConfig cfg = load_config(preset());
  const std::string once = serialize_config(cfg);
  const SweepConfig back = load_config(once);
  CHECK(back == cfg);
  CHECK(serialize_config(back) == once);

  std::string with_profile = preset() +
                             "decay_profile:\n"
                             "  - {M_upper: 4, r: 300 nm, rate: 1.5e7 s^-1}\n"
                             "  - {M_upper: 4, r: 500 nm, rate: 1.2e7 s^-1}\n"
                             "  - {r: 400 nm, rate: 1.3e7 s^-1}\n";
  const SweepConfig p = load_config(with_profile);
  CHECK(load_config(serialize_config(p)) == p);
}

TEST_CASE("radial grid") {
  const RadialRange range{285e-9, 840e-9, 112};
  const auto g = range.grid();
  REQUIRE(g.size() == 112);
  CHECK(g.front() == 285e-9);
  CHECK(g.back() == 840e-9);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == decimal::parse(std::to_string(285 + 5 * i), -9));
  const auto two = RadialRange{3e-7, 4e-7, 2}.grid();
  CHECK(two == std::vector<double>{3e-7, 4e-7});
}

TEST_CASE("tabulated decay rate") {
  SweepConfig cfg = load_config(preset());
  CHECK(cfg.decay_rate(3, 400e-9) == cfg.transition.decay_rate);
  cfg.decay_profile = {{HalfInt(4), 300e-9, 1.5e7}, {HalfInt(4), 500e-9, 1.1e7}, {std::nullopt, 400e-9, 1.3e7}};
  CHECK(cfg.decay_rate(4, 250e-9) == 1.5e7);
  CHECK(cfg.decay_rate(4, 900e-9) == 1.1e7);
  CHECK(cfg.decay_rate(4, 350e-9) == doctest::Approx(1.4e7).epsilon(1e-12));
  CHECK(cfg.decay_rate(2, 123e-9) == 1.3e7);
}

TEST_CASE("preset sweep") {
  const SweepConfig cfg = load_config(preset());
  const SweepTable table = run_sweep(cfg);
  const std::size_t n = static_cast<std::size_t>(cfg.r_range.points);
  REQUIRE(table.rows.size() == 4 * 5 * n);

  const char* names[] = {"HE11", "TE01", "TM01", "HE21"};
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const SweepRow& row = table.rows[i];
    CHECK(row.mode == names[i / (5 * n)]);
    CHECK(row.Mp == HalfInt(static_cast<int>((i / n) % 5)));
    CHECK(row.M == HalfInt(2));
    if (i % n) CHECK(row.r > table.rows[i - 1].r);
    CHECK(row.weak_field);
    if (row.mode == "TE01" && row.Mp == HalfInt(2)) CHECK(row.abs_omega == 0.0);
    if (row.mode == "HE21" && row.Mp == HalfInt(4)) {
      CHECK(row.torque == 0.0);
      CHECK(row.abs_omega > 0.0);
    }
    if (row.mode == "HE11" && row.Mp == HalfInt(3)) CHECK(row.torque == 0.0);
    if ((row.mode == "TE01" || row.mode == "TM01") && row.Mp == HalfInt(2)) CHECK(row.torque == 0.0);
  }
  CHECK(table.rows.front().r == cfg.r_range.r_min);
  CHECK(table.rows[n - 1].r == cfg.r_range.r_max);
}

TEST_CASE("unguided mode is reported with the normalized frequency") {
  const SweepConfig cfg = load_config(replaced(preset(), "mode: HE21", "mode: EH11"));
  CHECK_THROWS_WITH_AS(run_sweep(cfg), doctest::Contains("EH11"), std::out_of_range);
  CHECK_THROWS_WITH_AS(run_sweep(cfg), doctest::Contains("V = "), std::out_of_range);
}

TEST_CASE("csv output") {
  CHECK(format_csv(SweepTable{}) == std::string(kCsvHeader) + "\n");

  SweepRow row;
  row.mode = "TM01";
  row.M = 2;
  row.Mp = 4;
  row.r = 300e-9;
  row.abs_omega = 12345.5;
  row.torque = 6e-31;
  row.force_phi = -2e-24;
  CHECK(format_csv(SweepTable{{row}}) == std::string(kCsvHeader) + "\nTM01,1,1,2,4,300,12345.5,0.6,-0.002\n");

  const fs::path dir = fs::temp_directory_path() / "quadtorque_csv_test";
  fs::create_directories(dir);
  const SweepConfig cfg = small_config();
  emit_csv(run_sweep(cfg), dir / "a.csv");
  emit_csv(run_sweep(cfg), dir / "b.csv");
  const std::string a = read_file(dir / "a.csv");
  CHECK(a == read_file(dir / "b.csv"));
  CHECK(a.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(std::count(a.begin(), a.end(), '\n') == 1 + 4 * 5 * 6);
  emit_csv(SweepTable{}, dir / "empty.csv");
  CHECK(read_file(dir / "empty.csv") == std::string(kCsvHeader) + "\n");
  CHECK_THROWS_AS(emit_csv(SweepTable{}, dir / "missing" / "x.csv"), std::runtime_error);
  fs::remove_all(dir);
}
