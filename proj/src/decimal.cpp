#include "quadtorque/decimal.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace quadtorque::decimal {

double parse(std::string_view text, int shift) {
  auto fail = [&] { return std::invalid_argument("malformed number '" + std::string(text) + "'"); };
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) throw fail();
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto epos = text.find_first_of("eE"); epos != std::string_view::npos) {
    mantissa = text.substr(0, epos);
    std::string_view exp_text = text.substr(epos + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto [p, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc{} || p != exp_text.data() + exp_text.size()) throw fail();
  }
  if (mantissa.empty() || mantissa.find_first_not_of("-0123456789.") != std::string_view::npos) throw fail();
  const std::string rebuilt = std::string(mantissa) + "e" + std::to_string(exponent + shift);
  double value = 0.0;
  auto [p, ec] = std::from_chars(rebuilt.data(), rebuilt.data() + rebuilt.size(), value);
  if (ec == std::errc::result_out_of_range) throw std::invalid_argument("number out of range '" + std::string(text) + "'");
  if (ec != std::errc{} || p != rebuilt.data() + rebuilt.size()) throw fail();
  return value;
}

std::string format(double value) {
  if (value == 0.0) return "0";
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), p);
}

double scale(double value, int shift) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::scientific);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return parse(std::string_view(buf.data(), static_cast<std::size_t>(p - buf.data())), shift);
}

}  // namespace quadtorque::decimal
