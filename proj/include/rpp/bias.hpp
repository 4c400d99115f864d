#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "rpp/bigint.hpp"
#include "rpp/characters.hpp"
#include "rpp/subgroup.hpp"

namespace rpp {

// Multiset of same-shape tuples, repetitions kept as multiplicities. Rows are
// held sorted after finalize(); lexicographic row order is the canonical scan
// order.
class TupleMultiset {
public:
  TupleMultiset(GroupPtr g, std::size_t n) : g_(std::move(g)), n_(n) {}

  const GroupPtr& group_ptr() const { return g_; }
  const GroupSpec& group() const { return *g_; }
  std::size_t width() const { return n_; }
  std::size_t distinct() const { return mult_.size(); }
  std::uint64_t total() const { return total_; }  // with repetitions

  std::span<const std::uint8_t> row(std::size_t i) const {
    return {flat_.data() + i * n_, n_};
  }
  std::uint64_t multiplicity(std::size_t i) const { return mult_[i]; }
  TupleElement element(std::size_t i) const;

  void add_row(std::span<const std::uint8_t> r, std::uint64_t count = 1);
  void finalize();  // sort rows, merge duplicates
  bool finalized() const { return finalized_; }

  // a multiset involution phi with phi(s) = s^{-1} exists, i.e. the
  // multiset equals its inverse image
  bool is_symmetric() const;

  static TupleMultiset from_json(GroupPtr g, const nlohmann::json& rows);
  nlohmann::json to_json(std::uint64_t max_elements = 1u << 20) const;

private:
  GroupPtr g_;
  std::size_t n_;
  std::vector<std::uint8_t> flat_;
  std::vector<std::uint64_t> mult_;
  std::uint64_t total_ = 0;
  bool finalized_ = true;
};

enum class Construction { prime_field, rounding, quotient_lift, explicit_tag };
std::string construction_name(Construction c);
Construction construction_from_name(const std::string& s);

struct BiasedSpace {
  TupleMultiset space;
  BigRat target_epsilon;
  Construction construction = Construction::explicit_tag;
  bool symmetric = false;
  std::optional<double> measured_bias;
  bool verified = false;
  nlohmann::json meta = nlohmann::json::object();

  nlohmann::json to_json(std::uint64_t max_elements = 1u << 20) const;
  static BiasedSpace from_json(GroupPtr g, const nlohmann::json& j);
};

inline constexpr std::uint64_t kSweepCapBins = std::uint64_t(1) << 24;

// max over nontrivial characters of |avg_S chi| (exact sweep semantics).
// Dispatches to the reference Kahan sweep for small instances and to the
// histogram+DFT evaluation above 4096 bins; both compute the same quantity.
double measure_bias(const TupleMultiset& s);
double measure_bias_sweep(const TupleMultiset& s);  // reference path
double measure_bias_dft(const TupleMultiset& s);

// AMN-style per-character distribution convention: max over nontrivial a of
// the l-infinity deviation of <a,x> from uniform over Z_L. A space that is
// eps-biased in this sense is (L*eps)-biased in the character sense.
double measure_bias_linf(const TupleMultiset& s);

// S = {(y*x^i mod q)_i : x,y in Z_q}, size q^2, bias <= (n-1)/q by counting
// polynomial roots.
BiasedSpace construct_prime_field(std::uint32_t q, std::size_t n);

// Rounded geometric progression over Z_q, q the smallest prime >= 4*n*m^2/eps:
// rows floor((y*x^i mod q)*m/q). Bias is empirically gated, never asserted.
BiasedSpace construct_rounding(std::uint32_t m, std::size_t n, const BigRat& eps,
                               bool verify = true);

// Power-residue rows s_x(i) = dlog_g(x+i) mod m over Z_q, q = 1 (mod m);
// Weil-bounded by roughly (n-1)/sqrt(q). Used by construct_for_group when m
// is prime and the exact progression does not reach eps.
BiasedSpace construct_power_residue(std::uint32_t m, std::size_t n, std::uint32_t q);

// Digitwise reduction G0^n -> G^n of Lemma-4.2 shape. Accepts s0 framed
// either over Z_{d_k}^{n*k} (flat, one digit per coordinate) or over
// G0 = Z_{d_k}^k with ambient n.
BiasedSpace quotient_lift(const BiasedSpace& s0, GroupPtr g);

// Disjoint union S ⊎ S^{-1}; size doubles, output carries the involution.
BiasedSpace symmetrize(const BiasedSpace& s);

struct ConstructOptions {
  bool verify = true;                            // measure + gate when sweepable
  std::uint64_t verify_cap_bins = kSweepCapBins;
};

// Dispatch: full group when it fits the size budget, exact prime-field
// progression when (nk-1)/d_k <= eps, power-residue for prime d_k, rounding
// for composite d_k; then lift and symmetrize. Output size <= 2*Qeff^2 with
// Qeff = smallest prime >= max((nk-1)/eps, d_k).
BiasedSpace construct_for_group(GroupPtr g, std::size_t n, const BigRat& eps,
                                const ConstructOptions& opts = {});

// Qeff as used by the size bound.
std::uint64_t effective_q_bound(const GroupSpec& g, std::size_t n, const BigRat& eps);

bool is_prime_u64(std::uint64_t v);
std::uint64_t next_prime_geq(std::uint64_t v);

}  // namespace rpp
