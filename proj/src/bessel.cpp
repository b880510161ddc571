#include "quadtorque/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace quadtorque::bessel {

namespace {

constexpr double kSeriesLimit = 12.0;

void check_order(int n) {
  if (n < 0) throw std::domain_error("Bessel order must be non-negative, got " + std::to_string(n));
}

// Ascending series, summed in extended precision. For |x| <= 12 the largest
// term is ~4e3 so the cancellation loss stays below 1e-15 absolute.
double j_series(int n, double x) {
  const long double half_x = 0.5L * x;
  const long double q = -half_x * half_x;
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term *= half_x / i;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * (k + n));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) && std::fabs(term) < 1e-24L) break;
  }
  return static_cast<double>(sum);
}

// Miller's backward recurrence normalised by J0 + 2 sum J_2k = 1.
double j_miller(int n, double x) {
  const double ax = std::fabs(x);
  const int start = 2 * ((std::max(n, static_cast<int>(ax)) + 30 + static_cast<int>(std::sqrt(60.0 * std::max(n, static_cast<int>(ax))))) / 2);
  double next = 0.0, cur = 1e-300, result = 0.0, norm = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = (2.0 * k / ax) * cur - next;
    next = cur;
    cur = prev;
    if (std::fabs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      result *= 1e-250;
      norm *= 1e-250;
    }
    if (k - 1 == n) result = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
  }
  norm += cur;
  double value = result / norm;
  if (x < 0.0 && n % 2 == 1) value = -value;
  return value;
}

// K0 and K1 for 0 < x <= 2 from the logarithmic series.
void k01_series(double x, double& k0, double& k1) {
  constexpr double euler = std::numbers::egamma;
  const double half_x = 0.5 * x;
  const double log_term = std::log(half_x);
  const double q = half_x * half_x;

  // K0 = -(ln(x/2) + gamma) I0 + sum_k H_k (x^2/4)^k / (k!)^2
  double t = 1.0, i0 = 1.0, harmonic = 0.0, s0 = 0.0;
  // K1 = 1/x + ln(x/2) I1 - (x/4) sum_k [psi(k+1) + psi(k+2)] (x^2/4)^k / (k!(k+1)!)
  double u = 1.0, i1 = 1.0, s1 = (-2.0 * euler + 1.0);
  for (int k = 1; k < 60; ++k) {
    t *= q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    i0 += t;
    s0 += harmonic * t;
    u *= q / (static_cast<double>(k) * (k + 1));
    i1 += u;
    s1 += (-2.0 * euler + 2.0 * harmonic + 1.0 / (k + 1)) * u;
    if (t < 1e-18 * i0 && u < 1e-18 * i1) break;
  }
  k0 = -(log_term + euler) * i0 + s0;
  k1 = 1.0 / x + log_term * half_x * i1 - 0.5 * half_x * s1;
}

// K0 and K1 for x > 2 from Steed's evaluation of Temme's continued fraction.
void k01_continued_fraction(double x, double& k0, double& k1) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 10000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::fabs(dels / s) < 1e-17) break;
  }
  h = a1 * h;
  k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
  k1 = k0 * (x + 0.5 - h) / x;
}

void k01(double x, double& k0, double& k1) {
  if (x > 750.0) {
    k0 = k1 = 0.0;  // exp(-x) underflows
  } else if (x <= 2.0) {
    k01_series(x, k0, k1);
  } else {
    k01_continued_fraction(x, k0, k1);
  }
}

}  // namespace

double j(int n, double x) {
  check_order(n);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (std::fabs(x) <= kSeriesLimit) return j_series(n, x);
  return j_miller(n, x);
}

double jp(int n, double x) {
  check_order(n);
  if (n == 0) return -j(1, x);
  return 0.5 * (j(n - 1, x) - j(n + 1, x));
}

double k(int n, double x) {
  check_order(n);
  if (!(x > 0.0)) throw std::domain_error("K_n requires x > 0");
  double km = 0.0, kn = 0.0;
  k01(x, km, kn);
  if (n == 0) return km;
  for (int i = 1; i < n; ++i) {
    const double next = km + (2.0 * i / x) * kn;
    km = kn;
    kn = next;
  }
  return kn;
}

double kp(int n, double x) {
  check_order(n);
  if (n == 0) return -k(1, x);
  return -0.5 * (k(n - 1, x) + k(n + 1, x));
}

Suite suite(int n, double x) {
  if (!(x > 0.0)) throw std::domain_error("Bessel suite requires x > 0");
  return {j(n, x), jp(n, x), k(n, x), kp(n, x)};
}

}  // namespace quadtorque::bessel
