#pragma once

#include <span>

#include "rpp/bsgs.hpp"
#include "rpp/subgroup.hpp"

namespace rpp {

// G^n acts on Omega = G x [n]; points are laid out coordinate-major
// (point = i*|G| + a), which makes the pointwise stabilizer of G x [i] a
// base-prefix of the chain below.
inline std::size_t omega_size(const GroupSpec& g, std::size_t n) {
  return std::size_t(g.order()) * n;
}
inline Point omega_point(const GroupSpec& g, std::size_t coord, std::uint32_t elem) {
  return Point(coord * g.order() + elem);
}

// The injective homomorphism: t maps (a,i) to (a * t_i, i).
Permutation embed_tuple(const TupleElement& t);
std::vector<Permutation> embed_generators(const Subgroup& h);

// The coordinate-major base: (identity, 0), (identity, 1), ...
std::vector<Point> embedded_base_hint(const GroupSpec& g, std::size_t n);

// BSGS of the embedded subgroup with the coordinate-major base; cached on
// the subgroup (built once).
const PermGroup& embedded_bsgs(const Subgroup& h);

// |{x in H : x_j = y_j for j < i}| where i = prefix.size(). Zero when the
// prefix is not attainable, |pointwise stabilizer of G x [i]| otherwise.
BigInt coset_prefix_count(const Subgroup& h, std::span<const std::uint8_t> prefix);

// Membership of y in the projection of H to its first i coordinates, done
// literally on the projected embedding.
bool projection_member(const Subgroup& h, std::span<const std::uint8_t> prefix);

// Projection of H onto coordinates [start, start+len): project generators.
Subgroup project_subgroup(const Subgroup& h, std::size_t start, std::size_t len);

// Membership of a tuple in H via the embedded BSGS (no enumeration cap).
bool bsgs_contains(const Subgroup& h, const TupleElement& x);

}  // namespace rpp
