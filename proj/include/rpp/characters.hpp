#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rpp/tuple.hpp"

namespace rpp {

// Digit view of G^n for abelian G with invariant factors d_1 | .. | d_k:
// n*k digit dimensions, dimension (i,j) of modulus d_j. Characters pair a
// label digit a with an element digit x through exp(2*pi*I * a*x / d_j),
// i.e. exponent (L/d_j)*a*x in Z_L with L = d_k the exponent of G.
struct DigitShape {
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint32_t L = 1;
  std::vector<std::uint32_t> mods;     // size n*k
  std::vector<std::uint32_t> weights;  // L/d_j per dimension

  static DigitShape of(const GroupSpec& g, std::size_t n);
  std::size_t dims() const { return mods.size(); }

  // expand a coordinate row (n element indices) into n*k digits
  void row_digits(const GroupSpec& g, const std::uint8_t* row, std::uint8_t* digits) const;
};

class Character {
public:
  // label: n*k digits, label[i*k+j] < d_j
  Character(GroupPtr g, std::size_t n, std::vector<std::uint8_t> label);

  const std::vector<std::uint8_t>& label() const { return label_; }
  bool is_trivial() const;
  const DigitShape& shape() const { return shape_; }

  // exponent in Z_L of chi(x) for a digit-expanded row
  std::uint32_t exponent_of_digits(const std::uint8_t* digits) const;
  std::complex<double> eval(const TupleElement& x) const;

  // mixed-radix increment over the label digits; false once wrapped to trivial
  bool next();

private:
  GroupPtr g_;
  DigitShape shape_;
  std::vector<std::uint8_t> label_;
};

// exp(2*pi*I*e/L) table for e in [0,L)
std::vector<std::complex<double>> unit_roots(std::uint32_t L);

}  // namespace rpp
