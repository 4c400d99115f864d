#pragma once

#include "rpp/embed.hpp"

#include <nlohmann/json.hpp>

namespace rpp {

struct CoverParams {
  BigRat c = BigRat(1);      // the paper-style constant, informational
  std::size_t ell = 0;       // number of partition blocks
  std::size_t block_size = 0;  // max block cardinality
  std::size_t a_size = 0;    // |A|
  BigInt m_bound;            // n^{10c} analogue

  // ell = ceil(10 c log2 n), block = ceil(n/ell), a = ceil(c log2 n)
  static CoverParams paper(std::size_t n, const BigRat& c);
  // singleton blocks, a = min(r, n): the smallest K_A that still covers B(r)
  static CoverParams desk(std::size_t n, std::size_t r);

  // coverage requires a_size >= min(r, ell): a weight-<=r support meets at
  // most that many blocks
  void validate(std::size_t n, std::size_t r) const;

  nlohmann::json to_json() const;
  static CoverParams from_json(const nlohmann::json& j);
};

struct CoverMember {
  std::vector<std::uint32_t> block_ids;  // A, ascending
  Subgroup subgroup;                     // H_A = H * K_A
};

struct CoverFamily {
  CoverParams params;
  Subgroup base;                                        // H
  std::size_t r = 0;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [start,end)
  std::vector<CoverMember> members;
};

// Lemma-3.5 shape: K_A the full coordinate subgroup on the union of the
// blocks indexed by A; members enumerate all |A| = a_size subsets. r = 0
// degenerates to the single member {H}.
CoverFamily build_cover(const Subgroup& h, std::size_t r, const CoverParams& params);

}  // namespace rpp
