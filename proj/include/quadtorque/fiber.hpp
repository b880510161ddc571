#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace quadtorque {

using Complex = std::complex<double>;
using Vector3c = std::array<Complex, 3>;

/// Two-layer step-index waveguide: a core cylinder inside an infinite
/// cladding.
struct FiberSpec {
  double radius = 0.0;  // m
  double n_core = 0.0;
  double n_clad = 1.0;

  /// Throws std::invalid_argument unless radius > 0 and n_core > n_clad >= 1.
  void validate() const;
};

enum class ModeKind { HE, EH, TE, TM };

struct ModeId {
  ModeKind kind = ModeKind::HE;
  int l = 1;  // azimuthal order, 0 for TE/TM
  int m = 1;  // radial order

  /// "HE11", "TE01", ...
  std::string name() const;
  /// Inverse of name(). Throws std::invalid_argument.
  static ModeId parse(std::string_view text);

  friend bool operator==(const ModeId&, const ModeId&) = default;
};

/// Cylindrical components of the (f = +1, p = +1) mode profile at one radius,
/// with radial derivatives of the electric part.
struct ModeProfile {
  Complex e_r, e_phi, e_z;    // V/m
  Complex h_r, h_phi, h_z;    // A/m
  Complex de_r, de_phi, de_z; // V/m^2
};

/// A solved guided mode. Immutable; the field profile is scaled so that the
/// mode carries power() watts.
class ModeSolution {
 public:
  const ModeId& id() const { return id_; }
  const FiberSpec& fiber() const { return fiber_; }
  double wavelength() const { return wavelength_; }
  double omega() const { return omega_; }
  double beta() const { return beta_; }
  /// Transverse wavenumbers inside (h) and outside (q) the core.
  double h() const { return h_; }
  double q() const { return q_; }
  /// Amplitude scale applied to the unit-coefficient solution.
  double norm() const { return scale_; }
  double power() const { return power_; }

  ModeProfile profile(double r) const;

 private:
  friend std::vector<ModeSolution> solve_modes(const FiberSpec&, double);
  friend ModeSolution normalize_power(const ModeSolution&, double);

  ModeId id_;
  FiberSpec fiber_;
  double wavelength_ = 0.0;
  double omega_ = 0.0;
  double beta_ = 0.0;
  double h_ = 0.0;
  double q_ = 0.0;
  // E_z and H_z amplitudes inside (J_l) and outside (K_l) the core.
  Complex a_in_, b_in_, a_out_, b_out_;
  double scale_ = 1.0;
  double power_ = 0.0;
};

/// Normalized frequency (2 pi a / lambda) sqrt(n1^2 - n2^2).
double vnumber(const FiberSpec& fiber, double wavelength);

/// Every guided mode at the given vacuum wavelength, normalized to 1 W and
/// ordered by descending beta. Empty if nothing is guided.
std::vector<ModeSolution> solve_modes(const FiberSpec& fiber, double wavelength);

/// Finds one mode in a solve_modes() result; throws std::out_of_range with the
/// V-number when it is not guided.
const ModeSolution& find_mode(const std::vector<ModeSolution>& modes, const ModeId& id);

/// Residual of the characteristic equation at beta, in the dimensionless
/// product form the solver brackets.
double characteristic_residual(const FiberSpec& fiber, double wavelength, ModeKind kind, int l, double beta);

/// Free-function form of ModeSolution::profile.
ModeProfile mode_profile(const ModeSolution& sol, double r);

/// Axial Poynting flux (1/2) Re(E x H*) . z over the cross-section, by
/// adaptive quadrature split at the core boundary. f = -1 gives the
/// backward-propagating mirror image.
double axial_power(const ModeSolution& sol, int f = +1);

/// Rescales the mode to carry `power` watts. Throws std::domain_error for
/// power <= 0.
ModeSolution normalize_power(const ModeSolution& sol, double power);

/// A guided mode driven with propagation direction f, polarization
/// circulation p, power and detuning. p is forced to +1 for TE/TM.
class DriveConfig {
 public:
  DriveConfig(const ModeSolution& mode, int f, int p, double power, double detuning);

  const ModeSolution& mode() const { return mode_; }
  int f() const { return f_; }
  int p() const { return p_; }
  int l() const { return mode_.id().l; }
  double power() const { return power_; }
  double detuning() const { return detuning_; }

 private:
  ModeSolution mode_;
  int f_;
  int p_;
  double power_;
  double detuning_;
};

struct CylPosition {
  double r = 0.0;
  double phi = 0.0;
  double z = 0.0;
};

struct FieldSample {
  Vector3c cylindrical;  // (r, phi, z) components
  Vector3c cartesian;    // (x, y, z) components in the fiber frame
};

/// Complex field amplitude (e_r r + p e_phi phi + f e_z z) exp(i f beta z + i p l phi).
FieldSample field_amplitude(const DriveConfig& drive, const CylPosition& position);

}  // namespace quadtorque
