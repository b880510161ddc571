#pragma once

#include <array>
#include <complex>

#include "quadtorque/angular.hpp"
#include "quadtorque/fiber.hpp"

namespace quadtorque {

/// V_q(r) for q = -2..2: the r-dependent part of sum_ij u_ij^(q) dE_j/dx_i.
struct GradientFactors {
  double r = 0.0;
  std::array<Complex, 5> values{};  // index q + 2

  Complex at(int q) const { return values.at(static_cast<std::size_t>(q + 2)); }
};

/// Throws std::domain_error unless r > fiber radius.
GradientFactors gradient_factors(const DriveConfig& drive, double r);

/// sum_ij u_ij^(q) dE_j/dx_i = V_q(r) exp(i f beta z + i (p l - q) phi).
/// Throws std::domain_error for |q| > 2 or a position inside the fiber.
Complex gradient_tensor(const DriveConfig& drive, const CylPosition& position, int q);

/// The same contraction taken directly from finite differences of the
/// Cartesian field (x and y, Richardson-extrapolated) and the analytic
/// z-derivative i f beta E.
Complex gradient_tensor_numeric(const DriveConfig& drive, const CylPosition& position, int q,
                                double step = 1e-12);

struct RabiSample {
  Complex omega;  // rad/s
  CylPosition position;
  int q = 0;  // M' - M
};

/// (e / 2 hbar) (-1)^(F'-M') (F' 2 F; -M' M'-M M) <F'||T2||F>, in
/// rad/s per (V/m^2).
Complex rabi_prefactor(const TransitionSpec& spec);

/// Quadrupole Rabi frequency with the fiber axis as quantization axis.
RabiSample rabi_frequency(const TransitionSpec& spec, const DriveConfig& drive, const CylPosition& position);

/// p l - (M' - M).
int torque_factor(const TransitionSpec& spec, const DriveConfig& drive);

/// |dOmega/dphi - i (p l - M' + M) Omega| / |Omega| with dOmega/dphi from
/// finite differences of the Cartesian-gradient route; 0 when Omega = 0.
double phase_gradient_check(const TransitionSpec& spec, const DriveConfig& drive, double r);

}  // namespace quadtorque
