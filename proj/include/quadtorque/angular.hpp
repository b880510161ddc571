#pragma once

#include <array>
#include <complex>
#include <compare>
#include <string>
#include <string_view>

namespace quadtorque {

/// Angular momentum quantum number stored as twice its value, so that
/// half-integers are exact.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int integer) : twice_(2 * integer) {}  // NOLINT: implicit by intent

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }
  /// Parses "2", "-3/2", "2.5".
  static HalfInt parse(std::string_view text);

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  /// Requires is_integer().
  constexpr int as_int() const { return twice_ / 2; }

  std::string to_string() const;

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.twice_ + b.twice_); }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.twice_ - b.twice_); }
  friend constexpr bool operator==(HalfInt, HalfInt) = default;
  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;

 private:
  int twice_ = 0;
};

/// j/2 shorthand: half(3) is 3/2.
constexpr HalfInt half(int twice) { return HalfInt::from_twice(twice); }

double wigner_3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);
double wigner_6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6);

using Complex = std::complex<double>;
using Matrix3c = std::array<std::array<Complex, 3>, 3>;

/// Cartesian tensor structure u^(q) of the spherical component q of the
/// quadrupole operator. Symmetric and traceless.
struct QuadTensorMatrix {
  int q = 0;
  Matrix3c entries{};
};

/// Throws std::domain_error for |q| > 2.
QuadTensorMatrix quad_tensor_matrix(int q);

struct TransitionParams {
  std::string lower_label;
  std::string upper_label;
  HalfInt F, M, Fp, Mp;
  HalfInt J, Jp, I;
  HalfInt L, Lp;
  double wavelength = 0.0;          // m
  double oscillator_strength = 0.0; // J -> J', free space
  double decay_rate = 0.0;          // 1/s, total decay of the upper level
};

/// Electric quadrupole transition |n F M> -> |n' F' M'> of a one-electron
/// atom. Construction enforces the quadrupole selection rules and throws
/// std::invalid_argument naming the rule that failed.
class TransitionSpec {
 public:
  explicit TransitionSpec(TransitionParams params);

  const TransitionParams& params() const { return p_; }
  HalfInt F() const { return p_.F; }
  HalfInt M() const { return p_.M; }
  HalfInt Fp() const { return p_.Fp; }
  HalfInt Mp() const { return p_.Mp; }
  HalfInt J() const { return p_.J; }
  HalfInt Jp() const { return p_.Jp; }
  HalfInt I() const { return p_.I; }
  double wavelength() const { return p_.wavelength; }
  double oscillator_strength() const { return p_.oscillator_strength; }
  double decay_rate() const { return p_.decay_rate; }
  double omega0() const;
  /// q = M' - M.
  int delta_m() const { return (p_.Mp - p_.M).as_int(); }

  /// Same levels, different sublevels. Revalidates.
  TransitionSpec with_sublevels(HalfInt M, HalfInt Mp) const;

 private:
  TransitionParams p_;
};

/// Quadrupole selection rules on (F, M) -> (F', M') alone.
bool quadrupole_allowed(HalfInt F, HalfInt M, HalfInt Fp, HalfInt Mp);

/// |<n'J'||T^(2)||nJ>| in m^2 from the measured J -> J' oscillator strength.
/// Positive by convention.
double reduced_element_J(double oscillator_strength, double omega0, HalfInt J);
double reduced_element_J(const TransitionSpec& spec);

/// Hyperfine reduction <n'F'||T^(2)||nF> from the J-basis element.
/// Returns 0 when a coupling triangle fails.
double reduced_element_F(double reduced_J, HalfInt J, HalfInt Jp, HalfInt I, HalfInt F, HalfInt Fp);

/// The 87Rb 5S1/2 F=2, M=2 -> 4D5/2 F'=4 transition used for the nanofiber
/// torque scenario, with the given upper sublevel.
TransitionSpec rb87_5s_4d52(int Mp);

}  // namespace quadtorque
