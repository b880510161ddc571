#pragma once

#include <numbers>

// CODATA 2018 exact and recommended values, SI units.
namespace quadtorque::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double c = 2.99792458e8;               // m/s
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double e = 1.602176634e-19;            // C
inline constexpr double m_e = 9.1093837015e-31;         // kg
inline constexpr double epsilon0 = 8.8541878128e-12;    // F/m
inline constexpr double mu0 = 1.0 / (epsilon0 * c * c); // H/m

// Free-space decay rate of the Rb 4D5/2 level.
inline constexpr double gamma0_rb_4d52 = 1.119e7; // 1/s

}  // namespace quadtorque::constants
