#include "rpp/feasibility.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace rpp {

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

FeasibilityReport feasibility_check(std::size_t n, double k_bound, std::size_t r,
                                    const BigRat& slack_epsilon, const GroupSpec& g) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (r > n) throw InvalidArgument("r must satisfy 0 <= r <= n");
  if (slack_epsilon <= 0 || slack_epsilon >= 1)
    throw InvalidArgument("slack epsilon must lie in (0,1)");
  FeasibilityReport rep;
  rep.n = n;
  rep.k_bound = k_bound;
  rep.r = r;
  rep.slack_epsilon = slack_epsilon;
  const double eps = rat_to_double(slack_epsilon);
  const double h = binary_entropy(double(r) / double(n));
  rep.rhs_value = double(n) * (1.0 - h / std::log2(double(g.order())) - eps);
  rep.feasible = k_bound + double(r) <= rep.rhs_value;
  return rep;
}

nlohmann::json FeasibilityReport::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["k_bound"] = k_bound;
  j["r"] = r;
  j["slack_epsilon"] = rat_to_string(slack_epsilon);
  j["rhs_value"] = rhs_value;
  j["feasible"] = feasible;
  return j;
}

}  // namespace rpp
