#pragma once

#include "rpp/bigint.hpp"
#include "rpp/group.hpp"

#include <nlohmann/json_fwd.hpp>

namespace rpp {

// Binary entropy, H(0) = H(1) = 0 by continuity.
double binary_entropy(double p);

struct FeasibilityReport {
  std::size_t n = 0;
  double k_bound = 0;
  std::size_t r = 0;
  BigRat slack_epsilon;
  double rhs_value = 0;  // n*(1 - H(r/n)/log2|G| - eps)
  bool feasible = false;

  nlohmann::json to_json() const;
};

// Counting-argument feasibility: a solution exists whenever
// k + r <= n*(1 - H(r/n)/log2|G| - eps).
FeasibilityReport feasibility_check(std::size_t n, double k_bound, std::size_t r,
                                    const BigRat& slack_epsilon, const GroupSpec& g);

}  // namespace rpp
