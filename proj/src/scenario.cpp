#include "quadtorque/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "quadtorque/constants.hpp"
#include "quadtorque/coupling.hpp"
#include "quadtorque/decimal.hpp"
#include "quadtorque/dynamics.hpp"

namespace quadtorque {

namespace {

constexpr std::string_view kNanofiberPreset = R"(# 87Rb 5S1/2 F=2, M=2 -> 4D5/2 F'=4 quadrupole transition driven by the
# guided modes of a vacuum-clad silica nanofiber, 1 nW on resonance.
fiber:
  radius: 280 nm
  n_core: 1.4615
  n_clad: 1
transition:
  lower: 5S1/2
  upper: 4D5/2
  L: 0
  J: 1/2
  L_upper: 2
  J_upper: 5/2
  I: 3/2
  F: 2
  F_upper: 4
  M: 2
  wavelength: 516.5 nm
  oscillator_strength: 8.06e-7
  decay_rate: 1.119e7 s^-1
M_upper: [0, 1, 2, 3, 4]
drives:
  - {mode: HE11, f: +1, p: +1, power: 1 nW, detuning: 0 MHz}
  - {mode: TE01, f: +1, power: 1 nW, detuning: 0 MHz}
  - {mode: TM01, f: +1, power: 1 nW, detuning: 0 MHz}
  - {mode: HE21, f: +1, p: +1, power: 1 nW, detuning: 0 MHz}
sweep:
  r_min: 285 nm
  r_max: 840 nm
  points: 112
output: paper_fig2_fig4.csv
)";

int line_of(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  return mark.is_null() ? 0 : mark.line + 1;
}

struct Unit {
  int shift;          // power of ten to SI
  double factor;      // extra exact-in-meaning factor (2 pi for cyclic rates)
};

using UnitTable = std::map<std::string, Unit, std::less<>>;

const UnitTable kLengthUnits = {{"m", {0, 1.0}}, {"um", {-6, 1.0}}, {"nm", {-9, 1.0}}};
const UnitTable kPowerUnits = {{"W", {0, 1.0}}, {"mW", {-3, 1.0}}, {"uW", {-6, 1.0}}, {"nW", {-9, 1.0}}, {"pW", {-12, 1.0}}};
const UnitTable kRateUnits = {{"s^-1", {0, 1.0}}, {"1/s", {0, 1.0}}, {"kHz", {3, 2.0 * constants::pi}}, {"MHz", {6, 2.0 * constants::pi}}};
const UnitTable kDetuningUnits = {{"rad/s", {0, 1.0}}, {"s^-1", {0, 1.0}}, {"Hz", {0, 2.0 * constants::pi}},
                                  {"kHz", {3, 2.0 * constants::pi}}, {"MHz", {6, 2.0 * constants::pi}}};

class Reader {
 public:
  Reader(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {}

  void expect_map(std::initializer_list<std::string_view> allowed) const {
    if (!node_.IsMap()) throw ConfigError(path_, line_of(node_), "expected a mapping");
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ConfigError(join(key), line_of(kv.first), "unknown key");
      }
    }
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

  YAML::Node child(const std::string& key) const {
    const YAML::Node n = node_[key];
    if (!n) throw ConfigError(join(key), line_of(node_), "missing required key");
    return n;
  }
  Reader section(const std::string& key) const { return Reader(child(key), join(key)); }

  std::string scalar(const std::string& key) const {
    const YAML::Node n = child(key);
    if (!n.IsScalar()) throw ConfigError(join(key), line_of(n), "expected a scalar");
    return n.Scalar();
  }

  double number(const std::string& key) const {
    const std::string text = scalar(key);
    try {
      return decimal::parse(text);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(join(key), line_of(child(key)), e.what());
    }
  }

  int integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v) || std::fabs(v) > 1e9) throw ConfigError(join(key), line_of(child(key)), "expected an integer");
    return static_cast<int>(v);
  }

  HalfInt quantum(const std::string& key) const { return to_halfint(child(key), join(key)); }

  double quantity(const std::string& key, const UnitTable& units) const {
    const YAML::Node n = child(key);
    if (!n.IsScalar()) throw ConfigError(join(key), line_of(n), "expected a value with a unit");
    std::istringstream in(n.Scalar());
    std::string value, unit, extra;
    in >> value >> unit >> extra;
    if (unit.empty()) throw ConfigError(join(key), line_of(n), "missing unit");
    if (!extra.empty()) throw ConfigError(join(key), line_of(n), "unexpected text after unit");
    const auto it = units.find(unit);
    if (it == units.end()) throw ConfigError(join(key), line_of(n), "unsupported unit '" + unit + "'");
    try {
      return decimal::parse(value, it->second.shift) * it->second.factor;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(join(key), line_of(n), e.what());
    }
  }

  static HalfInt to_halfint(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) throw ConfigError(path, line_of(n), "expected an angular momentum");
    try {
      return HalfInt::parse(n.Scalar());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path, line_of(n), e.what());
    }
  }

  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const YAML::Node& node() const { return node_; }

 private:
  YAML::Node node_;
  std::string path_;
};

int sign_value(const Reader& r, const std::string& key) {
  const int v = r.integer(key);
  if (v != 1 && v != -1) throw ConfigError(r.join(key), line_of(r.child(key)), "must be +1 or -1");
  return v;
}

std::string with_unit(double value, std::string_view unit) { return decimal::format(value) + " " + std::string(unit); }

}  // namespace

ConfigError::ConfigError(std::string key, int line, const std::string& message)
    : std::runtime_error(key + (line > 0 ? " (line " + std::to_string(line) + ")" : std::string()) + ": " + message),
      key_(std::move(key)),
      line_(line) {}

std::vector<double> RadialRange::grid() const {
  std::vector<double> r(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double v = (i == points - 1) ? r_max : r_min + (r_max - r_min) * i / (points - 1);
    // Round to 15 significant digits so that evenly spaced decimal grids stay decimal.
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    r[static_cast<std::size_t>(i)] = std::strtod(buf, nullptr);
  }
  return r;
}

TransitionSpec SweepConfig::transition_for(HalfInt Mp) const {
  TransitionParams p = transition;
  p.Mp = Mp;
  return TransitionSpec(std::move(p));
}

double SweepConfig::decay_rate(HalfInt Mp, double r) const {
  std::vector<std::pair<double, double>> table;
  for (const auto& pt : decay_profile) {
    if (!pt.Mp || *pt.Mp == Mp) table.emplace_back(pt.r, pt.rate);
  }
  if (table.empty()) return transition.decay_rate;
  std::sort(table.begin(), table.end());
  if (r <= table.front().first) return table.front().second;
  if (r >= table.back().first) return table.back().second;
  const auto hi = std::upper_bound(table.begin(), table.end(), std::pair{r, -1.0},
                                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const auto lo = hi - 1;
  const double t = (r - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

bool operator==(const SweepConfig& a, const SweepConfig& b) {
  const auto& ta = a.transition;
  const auto& tb = b.transition;
  const bool transition_equal = ta.lower_label == tb.lower_label && ta.upper_label == tb.upper_label &&
                                ta.F == tb.F && ta.M == tb.M && ta.Fp == tb.Fp && ta.J == tb.J && ta.Jp == tb.Jp &&
                                ta.I == tb.I && ta.L == tb.L && ta.Lp == tb.Lp && ta.wavelength == tb.wavelength &&
                                ta.oscillator_strength == tb.oscillator_strength && ta.decay_rate == tb.decay_rate;
  return transition_equal && a.fiber.radius == b.fiber.radius && a.fiber.n_core == b.fiber.n_core &&
         a.fiber.n_clad == b.fiber.n_clad && a.sublevels == b.sublevels && a.drives == b.drives &&
         a.r_range == b.r_range && a.decay_profile == b.decay_profile && a.output == b.output;
}

SweepConfig load_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("<document>", e.mark.is_null() ? 0 : e.mark.line + 1, e.msg);
  }
  const Reader top(root, "");
  top.expect_map({"fiber", "transition", "M_upper", "drives", "sweep", "decay_profile", "output"});

  SweepConfig cfg;
  const Reader fiber = top.section("fiber");
  fiber.expect_map({"radius", "n_core", "n_clad"});
  cfg.fiber.radius = fiber.quantity("radius", kLengthUnits);
  cfg.fiber.n_core = fiber.number("n_core");
  cfg.fiber.n_clad = fiber.number("n_clad");
  try {
    cfg.fiber.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("fiber", line_of(fiber.node()), e.what());
  }

  const Reader tr = top.section("transition");
  tr.expect_map({"lower", "upper", "L", "J", "L_upper", "J_upper", "I", "F", "F_upper", "M", "wavelength",
                 "oscillator_strength", "decay_rate"});
  auto& t = cfg.transition;
  t.lower_label = tr.scalar("lower");
  t.upper_label = tr.scalar("upper");
  t.L = tr.quantum("L");
  t.J = tr.quantum("J");
  t.Lp = tr.quantum("L_upper");
  t.Jp = tr.quantum("J_upper");
  t.I = tr.quantum("I");
  t.F = tr.quantum("F");
  t.Fp = tr.quantum("F_upper");
  t.M = tr.quantum("M");
  t.wavelength = tr.quantity("wavelength", kLengthUnits);
  t.oscillator_strength = tr.number("oscillator_strength");
  t.decay_rate = tr.quantity("decay_rate", kRateUnits);

  const YAML::Node sub = top.child("M_upper");
  if (sub.IsScalar()) {
    cfg.sublevels.push_back(Reader::to_halfint(sub, "M_upper"));
  } else if (sub.IsSequence() && sub.size() > 0) {
    for (const auto& n : sub) cfg.sublevels.push_back(Reader::to_halfint(n, "M_upper"));
  } else {
    throw ConfigError("M_upper", line_of(sub), "expected a sublevel or a non-empty list of sublevels");
  }
  std::sort(cfg.sublevels.begin(), cfg.sublevels.end());
  cfg.sublevels.erase(std::unique(cfg.sublevels.begin(), cfg.sublevels.end()), cfg.sublevels.end());
  for (HalfInt mp : cfg.sublevels) {
    try {
      (void)cfg.transition_for(mp);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("M_upper", line_of(sub), "M' = " + mp.to_string() + ": " + e.what());
    }
  }

  const YAML::Node drives = top.child("drives");
  if (!drives.IsSequence() || drives.size() == 0) throw ConfigError("drives", line_of(drives), "expected a non-empty list");
  for (std::size_t i = 0; i < drives.size(); ++i) {
    const Reader d(drives[i], "drives[" + std::to_string(i) + "]");
    d.expect_map({"mode", "f", "p", "power", "detuning"});
    DriveSpec ds;
    try {
      ds.mode = ModeId::parse(d.scalar("mode"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(d.join("mode"), line_of(d.child("mode")), e.what());
    }
    ds.f = sign_value(d, "f");
    ds.p = d.has("p") ? sign_value(d, "p") : 1;
    if (ds.mode.l == 0) ds.p = 1;
    ds.power = d.quantity("power", kPowerUnits);
    if (!(ds.power > 0.0)) throw ConfigError(d.join("power"), line_of(d.child("power")), "power must be positive");
    ds.detuning = d.has("detuning") ? d.quantity("detuning", kDetuningUnits) : 0.0;
    cfg.drives.push_back(ds);
  }

  const Reader sw = top.section("sweep");
  sw.expect_map({"r_min", "r_max", "points"});
  cfg.r_range.r_min = sw.quantity("r_min", kLengthUnits);
  cfg.r_range.r_max = sw.quantity("r_max", kLengthUnits);
  cfg.r_range.points = sw.integer("points");
  if (!(cfg.r_range.r_min > cfg.fiber.radius)) {
    throw ConfigError("sweep.r_min", line_of(sw.child("r_min")), "atom inside fiber: r_min must exceed the fiber radius");
  }
  if (!(cfg.r_range.r_max > cfg.r_range.r_min)) {
    throw ConfigError("sweep.r_max", line_of(sw.child("r_max")), "r_max must exceed r_min");
  }
  if (cfg.r_range.points < 2) throw ConfigError("sweep.points", line_of(sw.child("points")), "need at least 2 points");

  if (top.has("decay_profile")) {
    const YAML::Node dp = top.child("decay_profile");
    if (!dp.IsSequence()) throw ConfigError("decay_profile", line_of(dp), "expected a list");
    for (std::size_t i = 0; i < dp.size(); ++i) {
      const Reader e(dp[i], "decay_profile[" + std::to_string(i) + "]");
      e.expect_map({"M_upper", "r", "rate"});
      DecayPoint pt;
      if (e.has("M_upper")) pt.Mp = e.quantum("M_upper");
      pt.r = e.quantity("r", kLengthUnits);
      pt.rate = e.quantity("rate", kRateUnits);
      if (!(pt.rate > 0.0)) throw ConfigError(e.join("rate"), line_of(e.child("rate")), "decay rate must be positive");
      cfg.decay_profile.push_back(pt);
    }
  }

  if (top.has("output")) cfg.output = top.scalar("output");
  return cfg;
}

SweepConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

std::string serialize_config(const SweepConfig& cfg) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "fiber" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "radius" << YAML::Value << with_unit(cfg.fiber.radius, "m");
  out << YAML::Key << "n_core" << YAML::Value << decimal::format(cfg.fiber.n_core);
  out << YAML::Key << "n_clad" << YAML::Value << decimal::format(cfg.fiber.n_clad);
  out << YAML::EndMap;

  const auto& t = cfg.transition;
  out << YAML::Key << "transition" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "lower" << YAML::Value << t.lower_label;
  out << YAML::Key << "upper" << YAML::Value << t.upper_label;
  out << YAML::Key << "L" << YAML::Value << t.L.to_string();
  out << YAML::Key << "J" << YAML::Value << t.J.to_string();
  out << YAML::Key << "L_upper" << YAML::Value << t.Lp.to_string();
  out << YAML::Key << "J_upper" << YAML::Value << t.Jp.to_string();
  out << YAML::Key << "I" << YAML::Value << t.I.to_string();
  out << YAML::Key << "F" << YAML::Value << t.F.to_string();
  out << YAML::Key << "F_upper" << YAML::Value << t.Fp.to_string();
  out << YAML::Key << "M" << YAML::Value << t.M.to_string();
  out << YAML::Key << "wavelength" << YAML::Value << with_unit(t.wavelength, "m");
  out << YAML::Key << "oscillator_strength" << YAML::Value << decimal::format(t.oscillator_strength);
  out << YAML::Key << "decay_rate" << YAML::Value << with_unit(t.decay_rate, "s^-1");
  out << YAML::EndMap;

  out << YAML::Key << "M_upper" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (HalfInt mp : cfg.sublevels) out << mp.to_string();
  out << YAML::EndSeq;

  out << YAML::Key << "drives" << YAML::Value << YAML::BeginSeq;
  for (const auto& d : cfg.drives) {
    out << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "mode" << YAML::Value << d.mode.name();
    out << YAML::Key << "f" << YAML::Value << d.f;
    out << YAML::Key << "p" << YAML::Value << d.p;
    out << YAML::Key << "power" << YAML::Value << with_unit(d.power, "W");
    out << YAML::Key << "detuning" << YAML::Value << with_unit(d.detuning, "rad/s");
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "r_min" << YAML::Value << with_unit(cfg.r_range.r_min, "m");
  out << YAML::Key << "r_max" << YAML::Value << with_unit(cfg.r_range.r_max, "m");
  out << YAML::Key << "points" << YAML::Value << cfg.r_range.points;
  out << YAML::EndMap;

  if (!cfg.decay_profile.empty()) {
    out << YAML::Key << "decay_profile" << YAML::Value << YAML::BeginSeq;
    for (const auto& pt : cfg.decay_profile) {
      out << YAML::Flow << YAML::BeginMap;
      if (pt.Mp) out << YAML::Key << "M_upper" << YAML::Value << pt.Mp->to_string();
      out << YAML::Key << "r" << YAML::Value << with_unit(pt.r, "m");
      out << YAML::Key << "rate" << YAML::Value << with_unit(pt.rate, "s^-1");
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  if (!cfg.output.empty()) out << YAML::Key << "output" << YAML::Value << cfg.output;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string_view preset_text(std::string_view name) {
  if (name == "paper_fig2_fig4") return kNanofiberPreset;
  throw std::out_of_range("unknown preset '" + std::string(name) + "'");
}

SweepTable run_sweep(const SweepConfig& cfg) {
  const auto modes = solve_modes(cfg.fiber, cfg.transition.wavelength);
  const auto radii = cfg.r_range.grid();
  SweepTable table;
  table.rows.reserve(cfg.drives.size() * cfg.sublevels.size() * radii.size());
  for (const auto& ds : cfg.drives) {
    const DriveConfig drive(find_mode(modes, ds.mode), ds.f, ds.p, ds.power, ds.detuning);
    for (HalfInt mp : cfg.sublevels) {
      const TransitionSpec spec = cfg.transition_for(mp);
      for (double r : radii) {
        const TorqueResult res = torque_weak_field(spec, drive, {r, 0.0, 0.0}, cfg.decay_rate(mp, r));
        SweepRow row;
        row.mode = ds.mode.name();
        row.f = drive.f();
        row.p = drive.p();
        row.M = spec.M();
        row.Mp = mp;
        row.r = r;
        row.abs_omega = std::abs(res.omega);
        row.torque = res.torque;
        row.force_phi = res.force_phi;
        row.weak_field = res.weak_field;
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

std::string format_csv(const SweepTable& table) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& row : table.rows) {
    out += row.mode;
    out += ',' + std::to_string(row.f);
    out += ',' + std::to_string(row.p);
    out += ',' + row.M.to_string();
    out += ',' + row.Mp.to_string();
    out += ',' + decimal::format(decimal::scale(row.r, 9));
    out += ',' + decimal::format(row.abs_omega);
    out += ',' + decimal::format(decimal::scale(row.torque, 30));
    out += ',' + decimal::format(decimal::scale(row.force_phi, 21));
    out += '\n';
  }
  return out;
}

void emit_csv(const SweepTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << format_csv(table);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace quadtorque
