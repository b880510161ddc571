#pragma once

#include <vector>

#include "quadtorque/fiber.hpp"

namespace fixtures {

inline quadtorque::FiberSpec nanofiber() { return {280e-9, 1.4615, 1.0}; }
inline constexpr double kWavelength = 516.5e-9;

inline const std::vector<quadtorque::ModeSolution>& nanofiber_modes() {
  static const auto modes = quadtorque::solve_modes(nanofiber(), kWavelength);
  return modes;
}

inline const quadtorque::ModeSolution& mode(const char* name) {
  return quadtorque::find_mode(nanofiber_modes(), quadtorque::ModeId::parse(name));
}

}  // namespace fixtures
