#include "quadtorque/coupling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "quadtorque/constants.hpp"

namespace quadtorque {

using namespace std::complex_literals;

namespace {

void require_outside(const DriveConfig& drive, double r) {
  if (!(r > drive.mode().fiber().radius)) {
    throw std::domain_error("atom position r = " + std::to_string(r) + " m is not outside the fiber");
  }
}

void require_component(int q) {
  if (q < -2 || q > 2) throw std::domain_error("quadrupole component q must be in -2..2, got " + std::to_string(q));
}

Vector3c cartesian_field(const DriveConfig& drive, double x, double y, double z) {
  return field_amplitude(drive, {std::hypot(x, y), std::atan2(y, x), z}).cartesian;
}

}  // namespace

GradientFactors gradient_factors(const DriveConfig& drive, double r) {
  require_outside(drive, r);
  const ModeProfile m = drive.mode().profile(r);
  const double f = drive.f();
  const double p = drive.p();
  const double l = drive.l();
  const double beta = drive.mode().beta();

  GradientFactors g;
  g.r = r;
  g.values[2] = -(m.de_r + m.e_r / r + (1i * l / r) * m.e_phi - 2.0i * beta * m.e_z) / std::sqrt(6.0);
  for (int sign : {+1, -1}) {
    // sign = +1 gives q = +1, +2; sign = -1 gives q = -1, -2.
    const double s = sign;
    const Complex transverse = m.e_r - s * 1i * p * m.e_phi;
    g.values[2 + sign] = -s * 0.5 * f * (1i * beta * transverse + m.de_z + s * (p * l / r) * m.e_z);
    g.values[2 + 2 * sign] = 0.5 * (m.de_r - s * 1i * p * m.de_phi - ((1.0 - s * p * l) / r) * transverse);
  }
  return g;
}

Complex gradient_tensor(const DriveConfig& drive, const CylPosition& pos, int q) {
  require_component(q);
  const GradientFactors g = gradient_factors(drive, pos.r);
  const double phase = drive.f() * drive.mode().beta() * pos.z + (drive.p() * drive.l() - q) * pos.phi;
  return g.at(q) * std::exp(1i * phase);
}

Complex gradient_tensor_numeric(const DriveConfig& drive, const CylPosition& pos, int q, double step) {
  require_component(q);
  require_outside(drive, pos.r);
  const double x = pos.r * std::cos(pos.phi);
  const double y = pos.r * std::sin(pos.phi);

  // grad[i][j] = dE_j / dx_i
  std::array<Vector3c, 3> grad{};
  auto central = [&](int axis, double h) {
    const double dx = axis == 0 ? h : 0.0;
    const double dy = axis == 1 ? h : 0.0;
    const Vector3c plus = cartesian_field(drive, x + dx, y + dy, pos.z);
    const Vector3c minus = cartesian_field(drive, x - dx, y - dy, pos.z);
    Vector3c d;
    for (int j = 0; j < 3; ++j) d[j] = (plus[j] - minus[j]) / (2.0 * h);
    return d;
  };
  for (int axis = 0; axis < 2; ++axis) {
    const Vector3c coarse = central(axis, step);
    const Vector3c fine = central(axis, 0.5 * step);
    for (int j = 0; j < 3; ++j) grad[axis][j] = (4.0 * fine[j] - coarse[j]) / 3.0;
  }
  const Vector3c field = cartesian_field(drive, x, y, pos.z);
  for (int j = 0; j < 3; ++j) grad[2][j] = 1i * static_cast<double>(drive.f()) * drive.mode().beta() * field[j];

  const QuadTensorMatrix u = quad_tensor_matrix(q);
  Complex sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) sum += u.entries[i][j] * grad[i][j];
  }
  return sum;
}

Complex rabi_prefactor(const TransitionSpec& spec) {
  const int q = spec.delta_m();
  const double threej = wigner_3j(spec.Fp(), HalfInt(2), spec.F(), -spec.Mp(), HalfInt(q), spec.M());
  if (threej == 0.0) return 0.0;
  const double reduced = reduced_element_F(reduced_element_J(spec), spec.J(), spec.Jp(), spec.I(), spec.F(), spec.Fp());
  const HalfInt fm = spec.Fp() - spec.Mp();
  if (!fm.is_integer()) throw std::domain_error("F' - M' must be an integer");
  const double sign = (fm.as_int() % 2 == 0) ? 1.0 : -1.0;
  return constants::e / (2.0 * constants::hbar) * sign * threej * reduced;
}

RabiSample rabi_frequency(const TransitionSpec& spec, const DriveConfig& drive, const CylPosition& position) {
  RabiSample s;
  s.position = position;
  s.q = spec.delta_m();
  const Complex prefactor = rabi_prefactor(spec);
  s.omega = (prefactor == 0.0) ? Complex{} : prefactor * gradient_tensor(drive, position, s.q);
  return s;
}

int torque_factor(const TransitionSpec& spec, const DriveConfig& drive) {
  return drive.p() * drive.l() - spec.delta_m();
}

double phase_gradient_check(const TransitionSpec& spec, const DriveConfig& drive, double r) {
  const Complex prefactor = rabi_prefactor(spec);
  const int q = spec.delta_m();
  auto omega_at = [&](double phi) { return prefactor * gradient_tensor_numeric(drive, {r, phi, 0.0}, q); };
  const Complex omega = omega_at(0.0);
  if (std::abs(omega) == 0.0) return 0.0;
  const double h = 1e-3;
  const Complex coarse = (omega_at(h) - omega_at(-h)) / (2.0 * h);
  const Complex fine = (omega_at(0.5 * h) - omega_at(-0.5 * h)) / h;
  const Complex derivative = (4.0 * fine - coarse) / 3.0;
  const Complex expected = 1i * static_cast<double>(torque_factor(spec, drive)) * omega;
  return std::abs(derivative - expected) / std::abs(omega);
}

}  // namespace quadtorque
