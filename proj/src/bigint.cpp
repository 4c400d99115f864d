#include "rpp/bigint.hpp"

#include <nlohmann/json.hpp>

#include "rpp/errors.hpp"

namespace rpp {

namespace {
const BigInt kJsonIntMax = BigInt(1) << 53;
}

nlohmann::json big_to_json(const BigInt& v) {
  if (v >= -kJsonIntMax && v <= kJsonIntMax) return v.convert_to<std::int64_t>();
  return v.str();
}

BigInt big_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw ParseError("expected integer or decimal string");
}

std::string rat_to_string(const BigRat& v) {
  return numerator(v).str() + "/" + denominator(v).str();
}

BigRat rat_from_string(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return BigRat(BigInt(s));
  return BigRat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

double rat_to_double(const BigRat& v) { return v.convert_to<double>(); }

}  // namespace rpp
