#pragma once

#include <optional>

#include "rpp/bias.hpp"
#include "rpp/rng.hpp"

namespace rpp {

// Cayley graph C(G^n, S) for a symmetric multiset S; degree = |S| with
// repetitions, vertex count N = |G|^n.
class CayleyGraph {
public:
  explicit CayleyGraph(TupleMultiset s);

  const TupleMultiset& steps() const { return s_; }
  const GroupSpec& group() const { return s_.group(); }
  const GroupPtr& group_ptr() const { return s_.group_ptr(); }
  std::size_t n() const { return s_.width(); }
  std::uint64_t degree() const { return s_.total(); }
  BigInt vertex_count() const { return big_pow(BigInt(group().order()), n()); }

private:
  TupleMultiset s_;
};

struct SpectrumReport {
  double lambda = 0;                  // normalized to [0,1]
  std::string method;                 // "character" | "numeric"
  std::optional<double> alpha_target;
  double lambda_sqrt_degree = 0;      // lambda * sqrt(|S|)
  bool low_flag = false;              // < 0.1 flags for inspection

  bool is_expander(double alpha) const { return lambda <= alpha; }
  nlohmann::json to_json() const;
};

// lambda as the maximal nontrivial character sum: identical to
// measure_bias(S) (abelian kind only).
SpectrumReport lambda_by_characters(const CayleyGraph& g);

// Dense symmetric eigensolve of A(G)/D; N <= 4096.
SpectrumReport lambda_numeric(const CayleyGraph& g);

struct WalkTrace {
  std::uint64_t seed = 0;
  std::vector<TupleElement> vertices;  // t+1 entries
  std::vector<TupleElement> steps;     // t entries

  std::size_t length() const { return steps.size(); }
  void validate() const;  // v_{i+1} = v_i * s_{i+1}
  nlohmann::json to_json() const;
  static WalkTrace from_json(GroupPtr g, const nlohmann::json& j);
};

WalkTrace random_walk(const CayleyGraph& g, std::size_t t, std::uint64_t seed);

struct ConfinementReport {
  std::size_t t = 0;
  std::uint64_t trials = 0;
  double estimate = 0;
  double wilson_lo = 0, wilson_hi = 0;  // 99% interval
  std::optional<double> exact;          // Markov-chain value, N <= 64
  double beta = 0;
  double alpha = 0;
  double bound = 0;  // (beta+alpha)^t
  nlohmann::json to_json() const;
};

// B given explicitly as a sorted TupleSet. alpha defaults to the character
// lambda (abelian) or the numeric lambda (N <= 4096).
ConfinementReport confinement_probability(const CayleyGraph& g, const TupleSet& b,
                                          std::size_t t, std::uint64_t trials,
                                          std::uint64_t seed,
                                          std::optional<double> alpha = std::nullopt);

// eta = |S ∩ H|/|S| counted with repetitions, exact.
BigRat subgroup_fraction(const BiasedSpace& s, const Subgroup& h);
BigRat subgroup_fraction(const TupleMultiset& s, const Subgroup& h);

// ceil(2n / (d log_{|G|} n - 2)); requires d log_{|G|} n > 2.
std::uint64_t walk_parameter_t(std::uint64_t n, const BigRat& d_exponent,
                               const GroupSpec& g);

}  // namespace rpp
