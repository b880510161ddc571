#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fixtures.hpp"
#include "quadtorque/angular.hpp"
#include "quadtorque/constants.hpp"
#include "quadtorque/coupling.hpp"

using namespace quadtorque;

namespace {

constexpr double kA = 280e-9;

Vector3c cartesian_field(const DriveConfig& drive, double x, double y, double z) {
  return field_amplitude(drive, {std::hypot(x, y), std::atan2(y, x), z}).cartesian;
}

// d E_j / d x_i from central differences in x and y with one Richardson level,
// and i f beta E_j along z.
std::array<Vector3c, 3> gradient_oracle(const DriveConfig& drive, const CylPosition& pos) {
  const double x = pos.r * std::cos(pos.phi), y = pos.r * std::sin(pos.phi);
  auto central = [&](int axis, double h) {
    const double dx = axis == 0 ? h : 0.0, dy = axis == 1 ? h : 0.0;
    const Vector3c plus = cartesian_field(drive, x + dx, y + dy, pos.z);
    const Vector3c minus = cartesian_field(drive, x - dx, y - dy, pos.z);
    Vector3c d;
    for (int j = 0; j < 3; ++j) d[j] = (plus[j] - minus[j]) / (2 * h);
    return d;
  };
  std::array<Vector3c, 3> g;
  const double h = 2e-12;
  for (int axis = 0; axis < 2; ++axis) {
    const Vector3c coarse = central(axis, h), fine = central(axis, h / 2);
    for (int j = 0; j < 3; ++j) g[axis][j] = (4.0 * fine[j] - coarse[j]) / 3.0;
  }
  const Vector3c e = cartesian_field(drive, x, y, pos.z);
  const Complex ikz(0.0, drive.f() * drive.mode().beta());
  for (int j = 0; j < 3; ++j) g[2][j] = ikz * e[j];
  return g;
}

Complex contract(const std::array<Vector3c, 3>& grad, int q) {
  const auto u = quad_tensor_matrix(q).entries;
  Complex s = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += u[i][j] * grad[i][j];
  return s;
}

double scale_of(const GradientFactors& g) {
  double s = 0;
  for (const auto& v : g.values) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

TEST_CASE("domain checks") {
  const DriveConfig drive(fixtures::mode("HE11"), 1, 1, 1e-9, 0);
  CHECK_THROWS_AS(gradient_factors(drive, kA), std::domain_error);
  CHECK_THROWS_AS(gradient_factors(drive, 100e-9), std::domain_error);
  CHECK_THROWS_AS(gradient_tensor(drive, {300e-9, 0, 0}, 3), std::domain_error);
  CHECK_THROWS_AS(gradient_tensor(drive, {250e-9, 0, 0}, 0), std::domain_error);
  CHECK_NOTHROW(gradient_factors(drive, std::nextafter(kA, 1.0)));
}

TEST_CASE("TE01 has no q = 0 gradient") {
  const DriveConfig drive(fixtures::mode("TE01"), 1, 1, 1e-9, 0);
  for (double r = 1.01 * kA; r < 4 * kA; r += 0.1 * kA) CHECK(gradient_factors(drive, r).at(0) == Complex(0));
}

TEST_CASE("analytic gradient factors agree with the Cartesian finite-difference oracle") {
  for (const auto& m : fixtures::nanofiber_modes()) {
    for (int f : {1, -1}) {
      for (int p : {1, -1}) {
        const DriveConfig drive(m, f, p, 1e-9, 0);
        for (double r : {1.1 * kA, 1.5 * kA, 2.0 * kA}) {
          const GradientFactors g = gradient_factors(drive, r);
          const double scale = scale_of(g);
          for (double phi : {0.0, 0.9}) {
            const CylPosition pos{r, phi, 2e-7};
            const auto grad = gradient_oracle(drive, pos);
            for (int q = -2; q <= 2; ++q) {
              CAPTURE(m.id().name());
              CAPTURE(f);
              CAPTURE(p);
              CAPTURE(r);
              CAPTURE(phi);
              CAPTURE(q);
              const Complex analytic = gradient_tensor(drive, pos, q);
              CHECK(std::abs(analytic - contract(grad, q)) <= 1e-6 * scale);
              CHECK(std::abs(gradient_tensor_numeric(drive, pos, q) - analytic) <= 1e-6 * scale);
              if (std::abs(g.at(q)) > 1e-3 * scale)
                CHECK(std::abs(analytic - contract(grad, q)) <= 1e-6 * std::abs(analytic));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("gradient tensor factorizes into radial factor and phase") {
  for (const auto& m : fixtures::nanofiber_modes()) {
    const DriveConfig drive(m, 1, 1, 1e-9, 0);
    const double r = 1.3 * kA;
    const GradientFactors g = gradient_factors(drive, r);
    CHECK(g.r == r);
    for (int q = -2; q <= 2; ++q) {
      CHECK(gradient_tensor(drive, {r, 0, 0}, q) == g.at(q));
      const int n = drive.p() * drive.l() - q;
      const Complex quarter = gradient_tensor(drive, {r, constants::pi / 4, 0}, q);
      const Complex expected = g.at(q) * std::polar(1.0, n * constants::pi / 4);
      CHECK(std::abs(quarter - expected) <= 1e-9 * std::max(std::abs(g.at(q)), 1e-300));
      const CylPosition pos{r, 1.7, -4e-7};
      const Complex phase = std::polar(1.0, drive.f() * m.beta() * pos.z + n * pos.phi);
      CHECK(std::abs(gradient_tensor(drive, pos, q) - g.at(q) * phase) <= 1e-9 * scale_of(g));
    }
  }
}

TEST_CASE("reversing propagation flips only the q = +-1 factors") {
  for (const auto& m : fixtures::nanofiber_modes()) {
    const DriveConfig fwd(m, 1, 1, 1e-9, 0), bwd(m, -1, 1, 1e-9, 0);
    const GradientFactors a = gradient_factors(fwd, 1.4 * kA), b = gradient_factors(bwd, 1.4 * kA);
    CHECK(b.at(1) == -a.at(1));
    CHECK(b.at(-1) == -a.at(-1));
    CHECK(b.at(0) == a.at(0));
    CHECK(b.at(2) == a.at(2));
    CHECK(b.at(-2) == a.at(-2));
  }
}

TEST_CASE("TE01 drive gives an exactly vanishing Rabi frequency for M' = M") {
  const DriveConfig drive(fixtures::mode("TE01"), 1, 1, 1e-9, 0);
  const TransitionSpec spec = rb87_5s_4d52(2);
  for (double r = 1.001 * kA; r < 5 * kA; r += 0.037 * kA)
    for (double phi : {0.0, 1.0, 4.0}) CHECK(rabi_frequency(spec, drive, {r, phi, 1e-7}).omega == Complex(0));
}

TEST_CASE("Rabi frequency agrees with the full quadrupole matrix-element sum") {
  using constants::e;
  using constants::hbar;
  for (const auto& m : fixtures::nanofiber_modes()) {
    const DriveConfig drive(m, 1, 1, 1e-9, 0);
    for (int mp = 0; mp <= 4; ++mp) {
      const TransitionSpec spec = rb87_5s_4d52(mp);
      const int q = mp - 2;
      const double red_f = reduced_element_F(reduced_element_J(spec), spec.J(), spec.Jp(), spec.I(), spec.F(), spec.Fp());
      const double threej = wigner_3j(spec.Fp(), 2, spec.F(), -spec.Mp(), q, spec.M());
      const double sign = ((spec.Fp() - spec.Mp()).as_int() % 2 == 0) ? 1.0 : -1.0;
      const auto u = quad_tensor_matrix(q).entries;
      for (double r : {1.1 * kA, 1.6 * kA}) {
        const CylPosition pos{r, 0.4, 0};
        const auto grad = gradient_oracle(drive, pos);
        Complex sum = 0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) sum += 3.0 * e * u[i][j] * sign * threej * red_f * grad[i][j];
        const Complex brute = sum / (6.0 * hbar);
        const RabiSample s = rabi_frequency(spec, drive, pos);
        CAPTURE(m.id().name());
        CAPTURE(mp);
        CHECK(s.q == q);
        CHECK(s.position.r == r);
        const double scale = std::abs(e / (2 * hbar) * threej * red_f) * scale_of(gradient_factors(drive, r));
        CHECK(std::abs(s.omega - brute) <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("Rabi frequency magnitude depends only on r") {
  for (const auto& m : fixtures::nanofiber_modes()) {
    const DriveConfig drive(m, -1, -1, 1e-9, 0);
    for (int mp = 0; mp <= 4; ++mp) {
      const TransitionSpec spec = rb87_5s_4d52(mp);
      const double ref = std::abs(rabi_frequency(spec, drive, {1.2 * kA, 0, 0}).omega);
      for (auto [phi, z] : {std::pair{0.3, 1e-6}, {-2.0, 7.7e-7}, {5.5, -3e-5}})
        CHECK(std::abs(rabi_frequency(spec, drive, {1.2 * kA, phi, z}).omega) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("Rabi frequency decays monotonically away from the surface") {
  for (const auto& m : fixtures::nanofiber_modes()) {
    const DriveConfig drive(m, 1, 1, 1e-9, 0);
    for (int mp = 0; mp <= 4; ++mp) {
      const TransitionSpec spec = rb87_5s_4d52(mp);
      if (rabi_frequency(spec, drive, {1.5 * kA, 0, 0}).omega == Complex(0)) continue;
      double previous = std::abs(rabi_frequency(spec, drive, {1.05 * kA, 0, 0}).omega);
      for (double r = 1.07 * kA; r < 4 * kA; r += 0.02 * kA) {
        const double now = std::abs(rabi_frequency(spec, drive, {r, 0, 0}).omega);
        CAPTURE(m.id().name());
        CAPTURE(mp);
        CAPTURE(r);
        CHECK(now < previous);
        previous = now;
      }
    }
  }
}

TEST_CASE("sublevel changes beyond two are excluded") {
  for (int mp = -4; mp <= 4; ++mp) {
    const bool allowed = std::abs(mp - 2) <= 2;
    CHECK(quadrupole_allowed(2, 2, 4, mp) == allowed);
    if (!allowed) CHECK(wigner_3j(4, 2, 2, -mp, mp - 2, 2) == 0.0);
  }
}

TEST_CASE("torque factor and phase identity") {
  const DriveConfig he11(fixtures::mode("HE11"), 1, 1, 1e-9, 0);
  const DriveConfig he21(fixtures::mode("HE21"), 1, 1, 1e-9, 0);
  const DriveConfig tm01(fixtures::mode("TM01"), 1, 1, 1e-9, 0);
  const DriveConfig he21m(fixtures::mode("HE21"), 1, -1, 1e-9, 0);

  CHECK(torque_factor(rb87_5s_4d52(3), he11) == 0);
  CHECK(torque_factor(rb87_5s_4d52(2), he21) == 2);
  CHECK(torque_factor(rb87_5s_4d52(4), tm01) == -2);
  CHECK(torque_factor(rb87_5s_4d52(0), he21m) == 0);

  CHECK(phase_gradient_check(rb87_5s_4d52(3), he11, 1.3 * kA) < 1e-6);
  CHECK(phase_gradient_check(rb87_5s_4d52(2), he21, 1.3 * kA) < 1e-6);
  CHECK(phase_gradient_check(rb87_5s_4d52(4), tm01, 1.3 * kA) < 1e-6);
  CHECK(phase_gradient_check(rb87_5s_4d52(2), DriveConfig(fixtures::mode("TE01"), 1, 1, 1e-9, 0), 1.3 * kA) == 0.0);
}

TEST_CASE("Rabi prefactor") {
  const TransitionSpec spec = rb87_5s_4d52(4);
  const double red_f = 1.0185024158527079247e-19;
  const double expected = constants::e / (2 * constants::hbar) * (1.0 / 3.0) * red_f;
  CHECK(std::abs(rabi_prefactor(spec)) == doctest::Approx(expected).epsilon(1e-12));
}
