#include "quadtorque/fiber.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "quadtorque/bessel.hpp"
#include "quadtorque/constants.hpp"
#include "quadtorque/quadrature.hpp"

namespace quadtorque {

namespace {

using namespace std::complex_literals;

constexpr int kScanPoints = 2000;
constexpr int kMaxAzimuthalOrder = 64;

// Z = J_l(h r) inside or K_l(q r) outside, with the r-derivatives the field
// expressions need. Z/r and d(Z/r)/dr stay finite at r = 0 via recurrences.
struct RadialBasis {
  double z, dz, d2z, z_over_r, d_z_over_r;
};

double j_signed(int n, double x) {
  if (n >= 0) return bessel::j(n, x);
  return (n % 2 == 0 ? 1.0 : -1.0) * bessel::j(-n, x);
}

RadialBasis inside_basis(int l, double h, double r) {
  const double x = h * r;
  RadialBasis b{};
  b.z = bessel::j(l, x);
  b.dz = h * bessel::jp(l, x);
  b.d2z = h * h * 0.25 * (j_signed(l - 2, x) - 2.0 * b.z + j_signed(l + 2, x));
  if (l > 0) {
    b.z_over_r = h * (j_signed(l - 1, x) + bessel::j(l + 1, x)) / (2.0 * l);
    const double dj_lm1 = (l - 1 == 0) ? -bessel::j(1, x) : 0.5 * (j_signed(l - 2, x) - bessel::j(l, x));
    const double dj_lp1 = bessel::jp(l + 1, x);
    b.d_z_over_r = h * h * (dj_lm1 + dj_lp1) / (2.0 * l);
  }
  return b;
}

RadialBasis outside_basis(int l, double q, double r) {
  const double x = q * r;
  RadialBasis b{};
  b.z = bessel::k(l, x);
  b.dz = q * bessel::kp(l, x);
  b.d2z = q * q * 0.25 * (bessel::k(std::abs(l - 2), x) + 2.0 * b.z + bessel::k(l + 2, x));
  b.z_over_r = b.z / r;
  b.d_z_over_r = b.dz / r - b.z / (r * r);
  return b;
}

struct Wavenumbers {
  double u, w;  // h a, q a
};

Wavenumbers transverse(const FiberSpec& fiber, double k, double beta) {
  const double h = std::sqrt(fiber.n_core * fiber.n_core * k * k - beta * beta);
  const double q = std::sqrt(beta * beta - fiber.n_clad * fiber.n_clad * k * k);
  return {h * fiber.radius, q * fiber.radius};
}

// Pole-free product forms of the eigenvalue equations. Zeros coincide with the
// guided roots because J_l(ha) and K_l(qa) never vanish together with the
// multiplied-through numerator.
double residual(const FiberSpec& fiber, double k, ModeKind kind, int l, double beta) {
  const auto [u, w] = transverse(fiber, k, beta);
  const double n1sq = fiber.n_core * fiber.n_core;
  const double n2sq = fiber.n_clad * fiber.n_clad;
  switch (kind) {
    case ModeKind::TE:
      return bessel::j(1, u) * w * bessel::k(0, w) + u * bessel::j(0, u) * bessel::k(1, w);
    case ModeKind::TM:
      return n1sq * bessel::j(1, u) * w * bessel::k(0, w) + n2sq * u * bessel::j(0, u) * bessel::k(1, w);
    case ModeKind::HE:
    case ModeKind::EH: {
      const double kq = bessel::kp(l, w) / (w * bessel::k(l, w));
      const double s = 1.0 / (u * u) + 1.0 / (w * w);
      const double contrast = (n1sq - n2sq) / (2.0 * n1sq) * kq;
      const double coupling = l * beta / (fiber.n_core * k) * s;
      const double root = std::sqrt(contrast * contrast + coupling * coupling);
      const double branch = (kind == ModeKind::HE) ? -root : root;
      const double rhs = -(n1sq + n2sq) / (2.0 * n1sq) * kq + l / (u * u) + branch;
      return j_signed(l - 1, u) - u * bessel::j(l, u) * rhs;
    }
  }
  return 0.0;
}

std::vector<double> bracket_roots(const FiberSpec& fiber, double k, ModeKind kind, int l) {
  const double lo = fiber.n_clad * k;
  const double hi = fiber.n_core * k;
  const double step = (hi - lo) / (kScanPoints + 1);
  std::vector<double> roots;
  double b_prev = lo + step;
  double f_prev = residual(fiber, k, kind, l, b_prev);
  for (int i = 2; i <= kScanPoints; ++i) {
    const double b = lo + step * i;
    const double fb = residual(fiber, k, kind, l, b);
    if (f_prev == 0.0) {
      roots.push_back(b_prev);
    } else if ((f_prev < 0.0) != (fb < 0.0) && fb != 0.0) {
      double a = b_prev, c = b, fa = f_prev;
      while (c - a > 1e-15 * c) {
        const double mid = 0.5 * (a + c);
        if (mid <= a || mid >= c) break;
        const double fm = residual(fiber, k, kind, l, mid);
        if (fm == 0.0) {
          a = c = mid;
          break;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          c = mid;
        }
      }
      roots.push_back(0.5 * (a + c));
    }
    b_prev = b;
    f_prev = fb;
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}


}  // namespace

void FiberSpec::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("fiber radius must be positive");
  if (!(n_clad >= 1.0)) throw std::invalid_argument("cladding index must be >= 1");
  if (!(n_core > n_clad)) throw std::invalid_argument("core index must exceed cladding index");
}

std::string ModeId::name() const {
  const char* kinds[] = {"HE", "EH", "TE", "TM"};
  return std::string(kinds[static_cast<int>(kind)]) + std::to_string(l) + std::to_string(m);
}

ModeId ModeId::parse(std::string_view text) {
  auto fail = [&] { return std::invalid_argument("unknown mode '" + std::string(text) + "'"); };
  if (text.size() != 4) throw fail();
  std::string kind_text{text.substr(0, 2)};
  for (auto& ch : kind_text) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (!std::isdigit(static_cast<unsigned char>(text[2])) || !std::isdigit(static_cast<unsigned char>(text[3]))) throw fail();
  ModeId id;
  id.l = text[2] - '0';
  id.m = text[3] - '0';
  if (kind_text == "HE") id.kind = ModeKind::HE;
  else if (kind_text == "EH") id.kind = ModeKind::EH;
  else if (kind_text == "TE") id.kind = ModeKind::TE;
  else if (kind_text == "TM") id.kind = ModeKind::TM;
  else throw fail();
  const bool transverse_kind = id.kind == ModeKind::TE || id.kind == ModeKind::TM;
  if (id.m < 1 || (transverse_kind ? id.l != 0 : id.l < 1)) throw fail();
  return id;
}

ModeProfile ModeSolution::profile(double r) const {
  if (r < 0.0) throw std::domain_error("profile radius must be non-negative");
  const bool inside = r < fiber_.radius;
  const RadialBasis b = inside ? inside_basis(id_.l, h_, r) : outside_basis(id_.l, q_, r);
  const double g = inside ? h_ * h_ : -q_ * q_;
  const double n = inside ? fiber_.n_core : fiber_.n_clad;
  const Complex a = scale_ * (inside ? a_in_ : a_out_);
  const Complex bh = scale_ * (inside ? b_in_ : b_out_);
  const double wmu = omega_ * constants::mu0;
  const double weps = omega_ * constants::epsilon0 * n * n;
  const double l = id_.l;

  ModeProfile p;
  p.e_z = a * b.z;
  p.h_z = bh * b.z;
  p.e_r = (1i * beta_ / g) * a * b.dz - (l * wmu / g) * bh * b.z_over_r;
  p.e_phi = -(l * beta_ / g) * a * b.z_over_r - (1i * wmu / g) * bh * b.dz;
  p.h_r = (1i * beta_ / g) * bh * b.dz + (l * weps / g) * a * b.z_over_r;
  p.h_phi = -(l * beta_ / g) * bh * b.z_over_r + (1i * weps / g) * a * b.dz;
  p.de_z = a * b.dz;
  p.de_r = (1i * beta_ / g) * a * b.d2z - (l * wmu / g) * bh * b.d_z_over_r;
  p.de_phi = -(l * beta_ / g) * a * b.d_z_over_r - (1i * wmu / g) * bh * b.d2z;
  return p;
}

double vnumber(const FiberSpec& fiber, double wavelength) {
  return 2.0 * constants::pi * fiber.radius / wavelength *
         std::sqrt(fiber.n_core * fiber.n_core - fiber.n_clad * fiber.n_clad);
}

double characteristic_residual(const FiberSpec& fiber, double wavelength, ModeKind kind, int l, double beta) {
  return residual(fiber, 2.0 * constants::pi / wavelength, kind, l, beta);
}

std::vector<ModeSolution> solve_modes(const FiberSpec& fiber, double wavelength) {
  fiber.validate();
  if (!(wavelength > 0.0)) throw std::domain_error("wavelength must be positive");
  const double k = 2.0 * constants::pi / wavelength;
  const double omega = constants::c * k;

  std::vector<ModeSolution> modes;
  auto add = [&](ModeKind kind, int l, const std::vector<double>& roots) {
    for (std::size_t i = 0; i < roots.size(); ++i) {
      ModeSolution s;
      s.id_ = ModeId{kind, l, static_cast<int>(i) + 1};
      s.fiber_ = fiber;
      s.wavelength_ = wavelength;
      s.omega_ = omega;
      s.beta_ = roots[i];
      const auto [u, w] = transverse(fiber, k, roots[i]);
      s.h_ = u / fiber.radius;
      s.q_ = w / fiber.radius;
      const double jl = bessel::j(l, u);
      const double kl = bessel::k(l, w);
      if (kind == ModeKind::TE) {
        s.a_in_ = 0.0;
        s.b_in_ = 1.0;
      } else if (kind == ModeKind::TM) {
        s.a_in_ = -1i;
        s.b_in_ = 0.0;
      } else {
        // E_phi continuity fixes H_z relative to E_z. E_z is taken imaginary
        // so that e_r comes out real.
        const double jh = bessel::jp(l, u) / (u * jl);
        const double kq = bessel::kp(l, w) / (w * kl);
        const double sum = 1.0 / (u * u) + 1.0 / (w * w);
        s.a_in_ = -1i;
        s.b_in_ = 1i * (l * roots[i] * sum) * s.a_in_ / (omega * constants::mu0 * (jh + kq));
      }
      s.a_out_ = s.a_in_ * jl / kl;
      s.b_out_ = s.b_in_ * jl / kl;
      s.scale_ = 1.0;
      s.power_ = axial_power(s);
      modes.push_back(normalize_power(s, 1.0));
    }
  };

  add(ModeKind::TE, 0, bracket_roots(fiber, k, ModeKind::TE, 0));
  add(ModeKind::TM, 0, bracket_roots(fiber, k, ModeKind::TM, 0));
  for (int l = 1; l <= kMaxAzimuthalOrder; ++l) {
    const auto he = bracket_roots(fiber, k, ModeKind::HE, l);
    const auto eh = bracket_roots(fiber, k, ModeKind::EH, l);
    if (he.empty() && eh.empty()) break;
    add(ModeKind::HE, l, he);
    add(ModeKind::EH, l, eh);
  }
  std::stable_sort(modes.begin(), modes.end(),
                   [](const ModeSolution& a, const ModeSolution& b) { return a.beta() > b.beta(); });
  return modes;
}

const ModeSolution& find_mode(const std::vector<ModeSolution>& modes, const ModeId& id) {
  for (const auto& m : modes) {
    if (m.id() == id) return m;
  }
  std::string msg = "mode " + id.name() + " is not guided";
  if (!modes.empty()) {
    msg += " (V = " + std::to_string(vnumber(modes.front().fiber(), modes.front().wavelength())) + ")";
  }
  throw std::out_of_range(msg);
}

ModeProfile mode_profile(const ModeSolution& sol, double r) { return sol.profile(r); }

double axial_power(const ModeSolution& sol, int f) {
  auto density = [&](double r) {
    const ModeProfile p = sol.profile(r);
    return (p.e_r * std::conj(p.h_phi) - p.e_phi * std::conj(p.h_r)).real() * r;
  };
  const double a = sol.fiber().radius;
  const double inner = integrate_adaptive(density, 0.0, a, 1e-12).value;
  // K_l(q r)^2 falls like exp(-2 q r); 25/q past the surface is below 1e-21.
  const double outer = integrate_adaptive(density, a, a + 25.0 / sol.q(), 1e-12).value;
  return f * constants::pi * (inner + outer);
}

ModeSolution normalize_power(const ModeSolution& sol, double power) {
  if (!(power > 0.0)) throw std::domain_error("mode power must be positive");
  const double flux = axial_power(sol);
  if (!(flux > 0.0) || !std::isfinite(flux)) throw std::logic_error("mode " + sol.id().name() + " carries no power");
  ModeSolution out = sol;
  out.scale_ = sol.scale_ * std::sqrt(power / flux);
  out.power_ = power;
  return out;
}

DriveConfig::DriveConfig(const ModeSolution& mode, int f, int p, double power, double detuning)
    : mode_(normalize_power(mode, power)), f_(f), p_(p), power_(power), detuning_(detuning) {
  if (f != 1 && f != -1) throw std::invalid_argument("propagation direction f must be +1 or -1");
  if (p != 1 && p != -1) throw std::invalid_argument("polarization index p must be +1 or -1");
  if (mode.id().l == 0) p_ = 1;
}

FieldSample field_amplitude(const DriveConfig& drive, const CylPosition& pos) {
  const ModeProfile prof = drive.mode().profile(pos.r);
  const double f = drive.f();
  const double p = drive.p();
  const Complex phase = std::exp(1i * (f * drive.mode().beta() * pos.z + p * drive.l() * pos.phi));
  FieldSample s;
  s.cylindrical = {prof.e_r * phase, p * prof.e_phi * phase, f * prof.e_z * phase};
  const double c = std::cos(pos.phi), sn = std::sin(pos.phi);
  s.cartesian = {s.cylindrical[0] * c - s.cylindrical[1] * sn, s.cylindrical[0] * sn + s.cylindrical[1] * c,
                 s.cylindrical[2]};
  return s;
}

}  // namespace quadtorque
