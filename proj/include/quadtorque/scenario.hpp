#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "quadtorque/angular.hpp"
#include "quadtorque/fiber.hpp"

namespace quadtorque {

/// Configuration error with the offending key and its 1-based line
/// (0 when the line is unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& message);
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

struct DriveSpec {
  ModeId mode;
  int f = 1;
  int p = 1;
  double power = 0.0;     // W
  double detuning = 0.0;  // rad/s

  friend bool operator==(const DriveSpec&, const DriveSpec&) = default;
};

struct RadialRange {
  double r_min = 0.0;  // m
  double r_max = 0.0;  // m
  int points = 0;

  std::vector<double> grid() const;
  friend bool operator==(const RadialRange&, const RadialRange&) = default;
};

/// One point of a tabulated decay rate Gamma(r) for an upper sublevel.
/// A missing sublevel applies the point to every M'.
struct DecayPoint {
  std::optional<HalfInt> Mp;
  double r = 0.0;     // m
  double rate = 0.0;  // 1/s

  friend bool operator==(const DecayPoint&, const DecayPoint&) = default;
};

struct SweepConfig {
  FiberSpec fiber;
  TransitionParams transition;      // M' is taken from `sublevels`
  std::vector<HalfInt> sublevels;   // M', ascending
  std::vector<DriveSpec> drives;
  RadialRange r_range;
  std::vector<DecayPoint> decay_profile;
  std::string output;

  /// Transition for one upper sublevel; revalidates the selection rules.
  TransitionSpec transition_for(HalfInt Mp) const;
  /// Gamma at (M', r): the tabulated profile interpolated linearly in r and
  /// clamped at its ends, or the transition's decay rate when no point
  /// applies.
  double decay_rate(HalfInt Mp, double r) const;
};

bool operator==(const SweepConfig& a, const SweepConfig& b);

/// Parses the YAML configuration. Lengths take nm, um or m; powers pW, nW,
/// uW, mW or W; rates s^-1 or 1/s, or kHz/MHz meaning Gamma/2pi; detunings
/// rad/s or s^-1, or Hz/kHz/MHz meaning Delta/2pi. Throws ConfigError.
SweepConfig load_config(std::string_view text);
SweepConfig load_config_file(const std::filesystem::path& path);

/// YAML text in SI units that load_config() maps back to the same config.
std::string serialize_config(const SweepConfig& config);

/// Built-in presets by name; throws std::out_of_range for unknown names.
std::string_view preset_text(std::string_view name);

struct SweepRow {
  std::string mode;
  int f = 1;
  int p = 1;
  HalfInt M, Mp;
  double r = 0.0;          // m
  double abs_omega = 0.0;  // rad/s
  double torque = 0.0;     // N m
  double force_phi = 0.0;  // N
  bool weak_field = true;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

/// Weak-field |Omega|, T_z and F_phi for every drive x sublevel x radius,
/// rows ordered by drive, M', then r. Modes are solved at the transition
/// wavelength. Throws std::out_of_range naming a mode that is not guided.
SweepTable run_sweep(const SweepConfig& config);

inline constexpr std::string_view kCsvHeader = "mode,f,p,M,Mprime,r_nm,abs_omega_rad_s,Tz_zN_nm,Fphi_zN";

std::string format_csv(const SweepTable& table);
/// Throws std::runtime_error when the file cannot be written.
void emit_csv(const SweepTable& table, const std::filesystem::path& path);

}  // namespace quadtorque
