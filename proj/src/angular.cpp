#include "quadtorque/angular.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "quadtorque/constants.hpp"

namespace quadtorque {

namespace {

constexpr int kFactorialTableSize = 80;

struct FactorialTable {
  std::array<long double, kFactorialTableSize> values{};
  FactorialTable() {
    values[0] = 1.0L;
    for (int n = 1; n < kFactorialTableSize; ++n) values[n] = values[n - 1] * n;
  }
};

long double factorial(int n) {
  static const FactorialTable table;
  if (n < 0 || n >= kFactorialTableSize) throw std::domain_error("factorial argument out of table range");
  return table.values[n];
}

// Arguments below are all given as twice the angular momentum.
bool triangle(int a, int b, int c) {
  return c >= std::abs(a - b) && c <= a + b && (a + b + c) % 2 == 0;
}

// Triangle coefficient (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!.
long double delta(int a, int b, int c) {
  return factorial((a + b - c) / 2) * factorial((a - b + c) / 2) * factorial((-a + b + c) / 2) /
         factorial((a + b + c) / 2 + 1);
}

bool valid_projection(int j, int m) { return j >= 0 && std::abs(m) <= j && (j + m) % 2 == 0; }

int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

}  // namespace

HalfInt HalfInt::parse(std::string_view text) {
  auto fail = [&] { return std::invalid_argument("not an angular momentum value: '" + std::string(text) + "'"); };
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) throw fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    int num = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + slash, num);
    if (ec != std::errc{} || p != text.data() + slash || text.substr(slash + 1) != "2") throw fail();
    return from_twice(num);
  }
  double value = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || p != text.data() + text.size()) throw fail();
  const double twice = 2.0 * value;
  if (twice != std::round(twice)) throw fail();
  return from_twice(static_cast<int>(std::lround(twice)));
}

std::string HalfInt::to_string() const {
  if (is_integer()) return std::to_string(as_int());
  return std::to_string(twice_) + "/2";
}

double wigner_3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
  const int a = j1.twice(), b = j2.twice(), c = j3.twice();
  const int ma = m1.twice(), mb = m2.twice(), mc = m3.twice();
  if (ma + mb + mc != 0) return 0.0;
  if (!valid_projection(a, ma) || !valid_projection(b, mb) || !valid_projection(c, mc)) return 0.0;
  if (!triangle(a, b, c)) return 0.0;

  const int kmin = std::max({0, (b - c - ma) / 2, (a - c + mb) / 2});
  const int kmax = std::min({(a + b - c) / 2, (a - ma) / 2, (b + mb) / 2});
  long double sum = 0.0L;
  for (int k = kmin; k <= kmax; ++k) {
    const long double denom = factorial(k) * factorial((c - b + ma) / 2 + k) * factorial((c - a - mb) / 2 + k) *
                              factorial((a + b - c) / 2 - k) * factorial((a - ma) / 2 - k) *
                              factorial((b + mb) / 2 - k);
    sum += parity_sign(k) / denom;
  }
  const long double norm = std::sqrt(delta(a, b, c) * factorial((a + ma) / 2) * factorial((a - ma) / 2) *
                                     factorial((b + mb) / 2) * factorial((b - mb) / 2) *
                                     factorial((c + mc) / 2) * factorial((c - mc) / 2));
  const int phase = parity_sign((a - b - mc) / 2);
  return static_cast<double>(phase * norm * sum);
}

double wigner_6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
  const int a = j1.twice(), b = j2.twice(), c = j3.twice();
  const int d = j4.twice(), e = j5.twice(), f = j6.twice();
  if (std::min({a, b, c, d, e, f}) < 0) return 0.0;
  if (!triangle(a, b, c) || !triangle(a, e, f) || !triangle(d, b, f) || !triangle(d, e, c)) return 0.0;

  const int s1 = (a + b + c) / 2, s2 = (a + e + f) / 2, s3 = (d + b + f) / 2, s4 = (d + e + c) / 2;
  const int t1 = (a + b + d + e) / 2, t2 = (b + c + e + f) / 2, t3 = (c + a + f + d) / 2;
  const int tmin = std::max({s1, s2, s3, s4});
  const int tmax = std::min({t1, t2, t3});
  long double sum = 0.0L;
  for (int t = tmin; t <= tmax; ++t) {
    const long double denom = factorial(t - s1) * factorial(t - s2) * factorial(t - s3) * factorial(t - s4) *
                              factorial(t1 - t) * factorial(t2 - t) * factorial(t3 - t);
    sum += parity_sign(t) * factorial(t + 1) / denom;
  }
  const long double norm = std::sqrt(delta(a, b, c) * delta(a, e, f) * delta(d, b, f) * delta(d, e, c));
  return static_cast<double>(norm * sum);
}

QuadTensorMatrix quad_tensor_matrix(int q) {
  using namespace std::complex_literals;
  const Complex I = 1i;
  QuadTensorMatrix m;
  m.q = q;
  auto& u = m.entries;
  switch (q) {
    case 2:
      u = {{{0.5, -0.5 * I, 0.0}, {-0.5 * I, -0.5, 0.0}, {0.0, 0.0, 0.0}}};
      break;
    case 1:
      u = {{{0.0, 0.0, -0.5}, {0.0, 0.0, 0.5 * I}, {-0.5, 0.5 * I, 0.0}}};
      break;
    case 0: {
      const double s = 1.0 / std::sqrt(6.0);
      u = {{{-s, 0.0, 0.0}, {0.0, -s, 0.0}, {0.0, 0.0, 2.0 * s}}};
      break;
    }
    case -1:
      u = {{{0.0, 0.0, 0.5}, {0.0, 0.0, 0.5 * I}, {0.5, 0.5 * I, 0.0}}};
      break;
    case -2:
      u = {{{0.5, 0.5 * I, 0.0}, {0.5 * I, -0.5, 0.0}, {0.0, 0.0, 0.0}}};
      break;
    default:
      throw std::domain_error("quadrupole tensor component q must be in -2..2, got " + std::to_string(q));
  }
  return m;
}

bool quadrupole_allowed(HalfInt F, HalfInt M, HalfInt Fp, HalfInt Mp) {
  const int f = F.twice(), fp = Fp.twice();
  if (std::abs(fp - f) > 4 || fp + f < 4) return false;
  return std::abs(Mp.twice() - M.twice()) <= 4;
}

TransitionSpec::TransitionSpec(TransitionParams params) : p_(std::move(params)) {
  auto reject = [](const std::string& why) { throw std::invalid_argument("transition rejected: " + why); };
  const auto& p = p_;
  for (auto [name, j] : {std::pair{"F", p.F}, {"F'", p.Fp}, {"J", p.J}, {"J'", p.Jp}, {"I", p.I}, {"L", p.L}, {"L'", p.Lp}}) {
    if (j.twice() < 0) reject(std::string(name) + " must be non-negative");
  }
  if (!p.L.is_integer() || !p.Lp.is_integer()) reject("L and L' must be integers");
  if (!valid_projection(p.F.twice(), p.M.twice())) reject("|M| <= F with F - M integer required");
  if (!valid_projection(p.Fp.twice(), p.Mp.twice())) reject("|M'| <= F' with F' - M' integer required");
  if (std::abs(p.Fp.twice() - p.F.twice()) > 4 || p.Fp.twice() + p.F.twice() < 4) reject("|F'-F| <= 2 <= F'+F violated");
  if (!(p.Fp - p.F).is_integer()) reject("F' - F must be an integer");
  if (std::abs(p.Mp.twice() - p.M.twice()) > 4) reject("|M'-M| <= 2 violated");
  if (std::abs(p.Jp.twice() - p.J.twice()) > 4 || p.Jp.twice() + p.J.twice() < 4) reject("|J'-J| <= 2 <= J'+J violated");
  if (!(p.Jp - p.J).is_integer()) reject("J' - J must be an integer");
  const int dl = std::abs(p.Lp.as_int() - p.L.as_int());
  if ((dl != 0 && dl != 2) || p.Lp.as_int() + p.L.as_int() < 2) reject("|L'-L| in {0,2} and L'+L >= 2 violated");
  if (!(p.wavelength > 0.0)) reject("wavelength must be positive");
  if (!(p.oscillator_strength > 0.0)) reject("oscillator strength must be positive");
  if (!(p.decay_rate > 0.0)) reject("decay rate must be positive");
}

double TransitionSpec::omega0() const { return 2.0 * constants::pi * constants::c / p_.wavelength; }

TransitionSpec TransitionSpec::with_sublevels(HalfInt M, HalfInt Mp) const {
  TransitionParams p = p_;
  p.M = M;
  p.Mp = Mp;
  return TransitionSpec(std::move(p));
}

double reduced_element_J(double oscillator_strength, double omega0, HalfInt J) {
  if (oscillator_strength < 0.0) throw std::domain_error("oscillator strength must be non-negative");
  if (!(omega0 > 0.0)) throw std::domain_error("transition frequency must be positive");
  using namespace constants;
  const double num = 20.0 * hbar * c * c * (J.twice() + 1) * oscillator_strength;
  return std::sqrt(num / (m_e * omega0 * omega0 * omega0));
}

double reduced_element_J(const TransitionSpec& spec) {
  return reduced_element_J(spec.oscillator_strength(), spec.omega0(), spec.J());
}

double reduced_element_F(double reduced_J, HalfInt J, HalfInt Jp, HalfInt I, HalfInt F, HalfInt Fp) {
  if (!triangle(J.twice(), I.twice(), F.twice()) || !triangle(Jp.twice(), I.twice(), Fp.twice())) return 0.0;
  const int phase_twice = Fp.twice() + J.twice() + 4 + I.twice();
  if (phase_twice % 2 != 0) return 0.0;
  const double sixj = wigner_6j(Jp, Fp, I, F, J, HalfInt(2));
  return reduced_J * parity_sign(phase_twice / 2) * std::sqrt((Fp.twice() + 1.0) * (F.twice() + 1.0)) * sixj;
}

TransitionSpec rb87_5s_4d52(int Mp) {
  TransitionParams p;
  p.lower_label = "5S1/2";
  p.upper_label = "4D5/2";
  p.F = 2;
  p.M = 2;
  p.Fp = 4;
  p.Mp = Mp;
  p.J = half(1);
  p.Jp = half(5);
  p.I = half(3);
  p.L = 0;
  p.Lp = 2;
  p.wavelength = 516.5e-9;
  p.oscillator_strength = 8.06e-7;
  p.decay_rate = constants::gamma0_rb_4d52;
  return TransitionSpec(std::move(p));
}

}  // namespace quadtorque
