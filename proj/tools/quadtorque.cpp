// quadtorque: guided modes, quadrupole Rabi frequencies and axial torques for
// an atom next to an optical nanofiber.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "quadtorque/constants.hpp"
#include "quadtorque/decimal.hpp"
#include "quadtorque/dynamics.hpp"
#include "quadtorque/scenario.hpp"

namespace {

using namespace quadtorque;

struct Overrides {
  std::string config_path;
  std::string preset;
  std::optional<std::string> mode;
  std::optional<int> f;
  std::optional<int> p;
  std::optional<std::string> power_nw;
  std::optional<std::string> detuning_mhz;
  std::optional<std::string> m;
  std::optional<std::string> mprime;
  std::optional<std::string> r_nm;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "YAML configuration file");
  cmd->add_option("--preset", o.preset, "built-in configuration (paper_fig2_fig4)");
  cmd->add_option("--mode", o.mode, "drive only this mode, e.g. HE21");
  cmd->add_option("--f", o.f, "propagation direction +1/-1")->check(CLI::IsMember({-1, 1}));
  cmd->add_option("--p", o.p, "polarization circulation +1/-1")->check(CLI::IsMember({-1, 1}));
  cmd->add_option("--power-nw", o.power_nw, "guided power in nW");
  cmd->add_option("--detuning-mhz", o.detuning_mhz, "detuning Delta/2pi in MHz");
  cmd->add_option("--m", o.m, "lower sublevel M");
  cmd->add_option("--mprime", o.mprime, "upper sublevels: 3, 0..4 or 0,2,4");
  cmd->add_option("--r-nm", o.r_nm, "atom radial position in nm (single-point commands)");
  cmd->add_option("--out", o.out, "output CSV path, '-' for stdout");
}

std::vector<HalfInt> parse_sublevels(const std::string& text) {
  std::vector<HalfInt> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const HalfInt lo = HalfInt::parse(text.substr(0, dots));
    const HalfInt hi = HalfInt::parse(text.substr(dots + 2));
    for (HalfInt m = lo; m <= hi; m = m + HalfInt(1)) out.push_back(m);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(HalfInt::parse(item));
  }
  if (out.empty()) throw std::invalid_argument("empty sublevel list '" + text + "'");
  return out;
}

SweepConfig resolve(const Overrides& o) {
  SweepConfig cfg;
  if (!o.config_path.empty()) {
    cfg = load_config_file(o.config_path);
  } else {
    cfg = load_config(preset_text(o.preset.empty() ? "paper_fig2_fig4" : o.preset));
  }
  if (o.mode) {
    DriveSpec d = cfg.drives.front();
    d.mode = ModeId::parse(*o.mode);
    d.p = 1;
    cfg.drives = {d};
  }
  for (auto& d : cfg.drives) {
    if (o.f) d.f = *o.f;
    if (o.p && d.mode.l != 0) d.p = *o.p;
    if (o.power_nw) d.power = decimal::parse(*o.power_nw, -9);
    if (o.detuning_mhz) d.detuning = decimal::parse(*o.detuning_mhz, 6) * 2.0 * constants::pi;
  }
  if (o.m) cfg.transition.M = HalfInt::parse(*o.m);
  if (o.mprime) cfg.sublevels = parse_sublevels(*o.mprime);
  for (HalfInt mp : cfg.sublevels) (void)cfg.transition_for(mp);
  if (o.out) cfg.output = *o.out;
  return cfg;
}

double single_radius(const Overrides& o, const SweepConfig& cfg) {
  const double r = o.r_nm ? decimal::parse(*o.r_nm, -9) : cfg.r_range.r_min;
  if (!(r > cfg.fiber.radius)) throw std::invalid_argument("atom position must be outside the fiber");
  return r;
}

int run_modes(const Overrides& o) {
  const SweepConfig cfg = resolve(o);
  const double lambda = cfg.transition.wavelength;
  const auto modes = solve_modes(cfg.fiber, lambda);
  const double k = 2.0 * constants::pi / lambda;
  std::cout << "# V = " << decimal::format(vnumber(cfg.fiber, lambda)) << "\n";
  std::cout << "mode,beta_rad_m,n_eff\n";
  for (const auto& m : modes) {
    std::cout << m.id().name() << ',' << decimal::format(m.beta()) << ',' << decimal::format(m.beta() / k) << '\n';
  }
  return 0;
}

void write_output(const std::optional<std::string>& out, const std::string& text) {
  if (!out || *out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(*out, std::ios::binary | std::ios::trunc);
  if (!(file << text)) throw std::runtime_error("cannot write " + *out);
}

int run_point(const Overrides& o, bool with_torque) {
  const SweepConfig cfg = resolve(o);
  const double r = single_radius(o, cfg);
  const auto modes = solve_modes(cfg.fiber, cfg.transition.wavelength);
  std::ostringstream csv;
  csv << (with_torque ? "mode,f,p,M,Mprime,r_nm,abs_omega_rad_s,factor,Tz_zN_nm,Fphi_zN\n"
                      : "mode,f,p,M,Mprime,r_nm,abs_omega_rad_s,re_omega,im_omega\n");
  bool strong = false;
  for (const auto& ds : cfg.drives) {
    const DriveConfig drive(find_mode(modes, ds.mode), ds.f, ds.p, ds.power, ds.detuning);
    for (HalfInt mp : cfg.sublevels) {
      const TransitionSpec spec = cfg.transition_for(mp);
      csv << ds.mode.name() << ',' << drive.f() << ',' << drive.p() << ',' << spec.M().to_string() << ','
          << mp.to_string() << ',' << decimal::format(decimal::scale(r, 9)) << ',';
      if (with_torque) {
        const TorqueResult t = torque_weak_field(spec, drive, {r, 0.0, 0.0}, cfg.decay_rate(mp, r));
        strong = strong || !t.weak_field;
        csv << decimal::format(std::abs(t.omega)) << ',' << t.factor << ','
            << decimal::format(decimal::scale(t.torque, 30)) << ','
            << decimal::format(decimal::scale(t.force_phi, 21)) << '\n';
      } else {
        const RabiSample s = rabi_frequency(spec, drive, {r, 0.0, 0.0});
        csv << decimal::format(std::abs(s.omega)) << ',' << decimal::format(s.omega.real()) << ','
            << decimal::format(s.omega.imag()) << '\n';
      }
    }
  }
  if (strong) std::cerr << "warning: |Omega| >= 0.1 Gamma, weak-field torque is inaccurate\n";
  write_output(o.out, csv.str());
  return 0;
}

int run_sweep_cmd(const Overrides& o) {
  const SweepConfig cfg = resolve(o);
  const SweepTable table = run_sweep(cfg);
  for (const auto& row : table.rows) {
    if (!row.weak_field) {
      std::cerr << "warning: some rows have |Omega| >= 0.1 Gamma; weak-field torque is inaccurate there\n";
      break;
    }
  }
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << format_csv(table);
  } else {
    emit_csv(table, cfg.output);
    std::cerr << "wrote " << table.rows.size() << " rows to " << cfg.output << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrupole Rabi frequency and axial torque of nanofiber-guided light on an atom"};
  app.require_subcommand(1);

  Overrides modes_o, rabi_o, torque_o, sweep_o;
  auto* modes = app.add_subcommand("modes", "guided-mode census and propagation constants");
  add_common(modes, modes_o);
  auto* rabi = app.add_subcommand("rabi", "quadrupole Rabi frequency at one radius");
  add_common(rabi, rabi_o);
  auto* torque = app.add_subcommand("torque", "weak-field axial torque and azimuthal force at one radius");
  add_common(torque, torque_o);
  auto* sweep = app.add_subcommand("sweep", "radial sweep over drives and sublevels, CSV output");
  add_common(sweep, sweep_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (modes->parsed()) return run_modes(modes_o);
    if (rabi->parsed()) return run_point(rabi_o, false);
    if (torque->parsed()) return run_point(torque_o, true);
    if (sweep->parsed()) return run_sweep_cmd(sweep_o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
