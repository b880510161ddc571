#pragma once

#include <string>
#include <string_view>

// Decimal-exact unit scaling: multiplying by a power of ten is done on the
// decimal representation, so "280 nm" and "2.8e-7 m" parse to the same double
// and 6e-31 N m prints as 0.6 zN nm.
namespace quadtorque::decimal {

/// Parses a plain decimal number and returns the double nearest to
/// value * 10^shift. Throws std::invalid_argument on malformed text.
double parse(std::string_view text, int shift = 0);

/// Shortest round-trip representation; negative zero prints as "0".
std::string format(double value);

/// The double nearest to (shortest decimal of value) * 10^shift.
double scale(double value, int shift);

}  // namespace quadtorque::decimal
