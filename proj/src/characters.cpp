#include "rpp/characters.hpp"

#include <cmath>
#include <numbers>

namespace rpp {

DigitShape DigitShape::of(const GroupSpec& g, std::size_t n) {
  const auto& f = g.invariant_factors();
  DigitShape s;
  s.n = n;
  s.k = f.size();
  s.L = f.back();
  s.mods.resize(n * s.k);
  s.weights.resize(n * s.k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < s.k; ++j) {
      s.mods[i * s.k + j] = f[j];
      s.weights[i * s.k + j] = s.L / f[j];
    }
  return s;
}

void DigitShape::row_digits(const GroupSpec& g, const std::uint8_t* row,
                            std::uint8_t* digits) const {
  for (std::size_t i = 0; i < n; ++i) g.decode_digits(row[i], digits + i * k);
}

Character::Character(GroupPtr g, std::size_t n, std::vector<std::uint8_t> label)
    : g_(std::move(g)), shape_(DigitShape::of(*g_, n)), label_(std::move(label)) {
  if (label_.size() != shape_.dims())
    throw InvalidArgument("character label has wrong number of digits");
  for (std::size_t d = 0; d < label_.size(); ++d)
    if (label_[d] >= shape_.mods[d])
      throw InvalidArgument("character label digit out of range");
}

bool Character::is_trivial() const {
  for (auto v : label_)
    if (v != 0) return false;
  return true;
}

std::uint32_t Character::exponent_of_digits(const std::uint8_t* digits) const {
  std::uint64_t e = 0;
  for (std::size_t d = 0; d < label_.size(); ++d)
    e += std::uint64_t(shape_.weights[d]) * label_[d] % shape_.L * digits[d];
  return std::uint32_t(e % shape_.L);
}

std::complex<double> Character::eval(const TupleElement& x) const {
  if (x.size() != shape_.n || !x.group().same_as(*g_))
    throw InvalidArgument("character/element shape mismatch");
  std::vector<std::uint8_t> digits(shape_.dims());
  shape_.row_digits(*g_, x.coords().data(), digits.data());
  const double ang = 2.0 * std::numbers::pi * exponent_of_digits(digits.data()) / shape_.L;
  return {std::cos(ang), std::sin(ang)};
}

bool Character::next() {
  for (std::size_t d = 0; d < label_.size(); ++d) {
    if (std::uint32_t(label_[d]) + 1 < shape_.mods[d]) {
      ++label_[d];
      return true;
    }
    label_[d] = 0;
  }
  return false;
}

std::vector<std::complex<double>> unit_roots(std::uint32_t L) {
  std::vector<std::complex<double>> w(L);
  for (std::uint32_t e = 0; e < L; ++e) {
    const double ang = 2.0 * std::numbers::pi * e / L;
    w[e] = {std::cos(ang), std::sin(ang)};
  }
  return w;
}

}  // namespace rpp
