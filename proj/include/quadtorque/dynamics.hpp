#pragma once

#include <complex>
#include <vector>

#include "quadtorque/angular.hpp"
#include "quadtorque/coupling.hpp"
#include "quadtorque/fiber.hpp"

namespace quadtorque {

/// Two-level density matrix, closed: rho_gg = 1 - rho_ee.
struct AtomState {
  double rho_ee = 0.0;
  Complex rho_ge{};

  double rho_gg() const { return 1.0 - rho_ee; }
  Complex rho_eg() const { return std::conj(rho_ge); }
  static AtomState ground() { return {}; }
};

/// Algebraic fixed point of the optical Bloch equations.
AtomState steady_state(Complex omega, double detuning, double gamma);

/// d/dt of (rho_ee, rho_ge).
struct StateRate {
  double rho_ee;
  Complex rho_ge;
};
StateRate bloch_rate(const AtomState& state, Complex omega, double detuning, double gamma);

struct TrajectoryPoint {
  double t;
  AtomState state;
  double drho_ee;  // d rho_ee / dt at this state
};

/// Fixed-step RK4 integration from t = 0 to t_final (inclusive). Throws
/// std::invalid_argument when dt exceeds 0.01 / max(|Omega|, gamma, |detuning|)
/// and std::runtime_error when positivity is lost by more than 1e-9.
std::vector<TrajectoryPoint> evolve(const AtomState& initial, Complex omega, double detuning, double gamma,
                                    double t_final, double dt);

/// T_z = (i hbar / 2) (p l - M' + M) (rho_ge Omega - rho_eg Omega*), in N m.
double torque_axial(const AtomState& state, Complex omega, int p, int l, HalfInt M, HalfInt Mp);

struct TorqueResult {
  Complex omega;           // rad/s
  double torque = 0.0;     // T_z, N m
  double force_phi = 0.0;  // N
  double r = 0.0;          // m
  int factor = 0;          // p l - M' + M
  bool weak_field = true;  // |Omega| < 0.1 gamma
};

/// Steady-state torque in the weak-field limit:
/// T_z = hbar (p l - M' + M) |Omega|^2 gamma / (4 Delta^2 + gamma^2), F_phi = T_z / r.
/// Uses the transition's decay rate unless gamma is given. Throws
/// std::domain_error for gamma <= 0.
TorqueResult torque_weak_field(const TransitionSpec& spec, const DriveConfig& drive, const CylPosition& position);
TorqueResult torque_weak_field(const TransitionSpec& spec, const DriveConfig& drive, const CylPosition& position,
                               double gamma);

}  // namespace quadtorque
