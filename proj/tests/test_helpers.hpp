#pragma once

#include <array>
#include <vector>

#include "rpp/group.hpp"
#include "rpp/rng.hpp"
#include "rpp/subgroup.hpp"

namespace rpp::testutil {

// S3 as a table group, built by composing permutations of three letters
// (right action: apply a, then b). Element order: lex by image array.
inline std::vector<std::array<int, 3>> s3_elements() {
  return {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
}

inline std::array<int, 3> s3_compose(const std::array<int, 3>& a,
                                     const std::array<int, 3>& b) {
  return {b[a[0]], b[a[1]], b[a[2]]};
}

inline GroupPtr s3_group() {
  const auto els = s3_elements();
  std::vector<std::vector<std::uint32_t>> table(6, std::vector<std::uint32_t>(6));
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      const auto c = s3_compose(els[i], els[j]);
      for (std::size_t k = 0; k < 6; ++k)
        if (els[k] == c) table[i][j] = std::uint32_t(k);
    }
  return GroupSpec::from_table(table);
}

inline TupleElement random_tuple(const GroupPtr& g, std::size_t n, Rng& rng) {
  std::vector<std::uint8_t> c(n);
  for (auto& v : c) v = std::uint8_t(rng.below(g->order()));
  return TupleElement(g, std::move(c));
}

inline Subgroup random_subgroup(const GroupPtr& g, std::size_t n, std::size_t ngens,
                                Rng& rng) {
  std::vector<TupleElement> gens;
  for (std::size_t i = 0; i < ngens; ++i) gens.push_back(random_tuple(g, n, rng));
  return Subgroup(g, n, std::move(gens));
}

}  // namespace rpp::testutil
