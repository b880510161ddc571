#pragma once

// Bessel functions of the first kind J_n and modified Bessel functions of the
// second kind K_n for non-negative integer order and real argument.

namespace quadtorque::bessel {

double j(int n, double x);
/// dJ_n/dx.
double jp(int n, double x);

/// Throws std::domain_error for x <= 0.
double k(int n, double x);
/// dK_n/dx. Throws std::domain_error for x <= 0.
double kp(int n, double x);

struct Suite {
  double J, Jp, K, Kp;
};

/// J_n, J_n', K_n, K_n' at one argument. Throws std::domain_error for x <= 0.
Suite suite(int n, double x);

}  // namespace quadtorque::bessel
