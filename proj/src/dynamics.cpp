#include "quadtorque/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quadtorque/constants.hpp"

namespace quadtorque {

using namespace std::complex_literals;

AtomState steady_state(Complex omega, double detuning, double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("decay rate must be positive");
  const double s = std::norm(omega) / (gamma * gamma + 4.0 * detuning * detuning);
  AtomState st;
  st.rho_ee = s / (1.0 + 2.0 * s);
  const double inversion = 2.0 * st.rho_ee - 1.0;
  st.rho_ge = 1i * std::conj(omega) * inversion / (gamma + 2.0i * detuning);
  return st;
}

StateRate bloch_rate(const AtomState& st, Complex omega, double detuning, double gamma) {
  const Complex coherence = st.rho_ge * omega;
  StateRate rate;
  // (i/2)(rho_ge Omega - c.c.) = -Im(rho_ge Omega)
  rate.rho_ee = -coherence.imag() - gamma * st.rho_ee;
  rate.rho_ge = 0.5i * std::conj(omega) * (st.rho_ee - st.rho_gg()) - (1i * detuning + 0.5 * gamma) * st.rho_ge;
  return rate;
}

std::vector<TrajectoryPoint> evolve(const AtomState& initial, Complex omega, double detuning, double gamma,
                                    double t_final, double dt) {
  if (!(dt > 0.0) || !(t_final >= 0.0)) throw std::invalid_argument("evolve needs dt > 0 and t_final >= 0");
  const double fastest = std::max({std::abs(omega), gamma, std::abs(detuning)});
  if (fastest > 0.0 && dt > 0.01 / fastest * (1.0 + 1e-12)) {
    throw std::invalid_argument("time step does not resolve the fastest rate");
  }
  const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  const double h = steps > 0 ? t_final / steps : 0.0;

  auto shifted = [](const AtomState& s, const StateRate& k, double by) {
    return AtomState{s.rho_ee + by * k.rho_ee, s.rho_ge + by * k.rho_ge};
  };
  auto check = [](const AtomState& s, double t) {
    constexpr double tol = 1e-9;
    if (s.rho_ee < -tol || s.rho_ee > 1.0 + tol || std::norm(s.rho_ge) > s.rho_ee * s.rho_gg() + tol) {
      throw std::runtime_error("density matrix lost positivity at t = " + std::to_string(t) +
                               " s; reduce the time step");
    }
  };

  std::vector<TrajectoryPoint> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  AtomState s = initial;
  check(s, 0.0);
  out.push_back({0.0, s, bloch_rate(s, omega, detuning, gamma).rho_ee});
  for (long i = 1; i <= steps; ++i) {
    const StateRate k1 = bloch_rate(s, omega, detuning, gamma);
    const StateRate k2 = bloch_rate(shifted(s, k1, 0.5 * h), omega, detuning, gamma);
    const StateRate k3 = bloch_rate(shifted(s, k2, 0.5 * h), omega, detuning, gamma);
    const StateRate k4 = bloch_rate(shifted(s, k3, h), omega, detuning, gamma);
    s.rho_ee += h / 6.0 * (k1.rho_ee + 2.0 * k2.rho_ee + 2.0 * k3.rho_ee + k4.rho_ee);
    s.rho_ge += h / 6.0 * (k1.rho_ge + 2.0 * k2.rho_ge + 2.0 * k3.rho_ge + k4.rho_ge);
    const double t = h * static_cast<double>(i);
    check(s, t);
    out.push_back({t, s, bloch_rate(s, omega, detuning, gamma).rho_ee});
  }
  return out;
}

double torque_axial(const AtomState& state, Complex omega, int p, int l, HalfInt M, HalfInt Mp) {
  const HalfInt factor = HalfInt(p * l) - Mp + M;
  const Complex bracket = state.rho_ge * omega - state.rho_eg() * std::conj(omega);
  // bracket is 2i Im(rho_ge Omega); the product is real.
  return (0.5i * constants::hbar * factor.value() * bracket).real();
}

TorqueResult torque_weak_field(const TransitionSpec& spec, const DriveConfig& drive, const CylPosition& position) {
  return torque_weak_field(spec, drive, position, spec.decay_rate());
}

TorqueResult torque_weak_field(const TransitionSpec& spec, const DriveConfig& drive, const CylPosition& position,
                               double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("decay rate must be positive");
  const RabiSample rabi = rabi_frequency(spec, drive, position);
  const double delta = drive.detuning();
  TorqueResult res;
  res.omega = rabi.omega;
  res.r = position.r;
  res.factor = torque_factor(spec, drive);
  res.torque = constants::hbar * res.factor * std::norm(rabi.omega) * gamma / (4.0 * delta * delta + gamma * gamma);
  res.force_phi = res.torque / position.r;
  res.weak_field = std::abs(rabi.omega) < 0.1 * gamma;
  return res;
}

}  // namespace quadtorque
