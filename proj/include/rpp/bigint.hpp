#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace rpp {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt big_pow(const BigInt& base, std::uint64_t e) {
  BigInt r = 1, b = base;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// JSON policy: plain number while |v| <= 2^53, exact decimal string beyond.
nlohmann::json big_to_json(const BigInt& v);
BigInt big_from_json(const nlohmann::json& j);

// Rationals travel as "num/den" strings (always exact).
std::string rat_to_string(const BigRat& v);
BigRat rat_from_string(const std::string& s);

double rat_to_double(const BigRat& v);

}  // namespace rpp
