#pragma once

#include <vector>

#include "rpp/bigint.hpp"
#include "rpp/perm.hpp"

namespace rpp {

// One level of the stabilizer chain: the group generated by `gens` fixes all
// earlier base points; `orbit` is the orbit of `base_point` under it, with
// explicit witness permutations (base_point^witness[i] = orbit[i]).
struct BsgsLevel {
  Point base_point = 0;
  std::vector<Permutation> gens;
  std::vector<std::int32_t> orbit_pos;  // point -> orbit index, -1 outside
  std::vector<Point> orbit;
  std::vector<Permutation> witness;
  std::vector<Permutation> witness_inv;
};

// Base and strong generating set, built by the deterministic Schreier-Sims
// procedure. Immutable once constructed; queries are safe concurrently.
class PermGroup {
public:
  std::size_t degree() const { return omega_; }
  const std::vector<BsgsLevel>& levels() const { return levels_; }
  std::vector<Point> base() const;

  BigInt order() const;
  bool member(const Permutation& s) const;

  // Strip s through levels [from..end); returns the residue and sets
  // *stop_level to the first level that could not strip (levels count if
  // fully stripped).
  Permutation sift(const Permutation& s, std::size_t from, std::size_t* stop_level) const;

  // Union of level generator lists (level 0 already contains every strong
  // generator).
  const std::vector<Permutation>& strong_generators() const;

  // The chain suffix: the pointwise stabilizer of the first `from` base
  // points, as its own group.
  PermGroup suffix_group(std::size_t from) const;

private:
  friend PermGroup schreier_sims(std::size_t, const std::vector<Permutation>&,
                                 const std::vector<Point>&);
  std::size_t omega_ = 0;
  std::vector<BsgsLevel> levels_;
};

// base_hint points get a level each, in order, before any automatically
// chosen base point; trivial-orbit levels are kept so chain positions align
// with the hint.
PermGroup schreier_sims(std::size_t omega, const std::vector<Permutation>& gens,
                        const std::vector<Point>& base_hint = {});

// Generators-in, group-out stabilizer of a point set (rebuilds the chain with
// delta as the base prefix).
PermGroup pointwise_stabilizer(const PermGroup& pg, const std::vector<Point>& delta);

inline BigInt bsgs_order(const PermGroup& pg) { return pg.order(); }

}  // namespace rpp
