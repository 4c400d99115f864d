#pragma once

#include <variant>

#include "rpp/bias.hpp"
#include "rpp/cover.hpp"

namespace rpp {

enum class SolveMode { abelian_hitting, general_greedy, auto_mode };
std::string solve_mode_name(SolveMode m);
SolveMode solve_mode_from_name(const std::string& s);

struct RppInstance {
  Subgroup h;
  std::size_t r = 0;  // output contract: hamming(x, H) > r
  SolveMode mode = SolveMode::auto_mode;

  nlohmann::json to_json() const;
  static RppInstance from_json(const nlohmann::json& j);
};

struct HittingCertificate {
  std::vector<std::pair<std::vector<std::uint32_t>, bool>> verdicts;  // (A, member)
  std::uint64_t scanned = 0;  // scan-order position of the hit (1-based)
  std::string alpha;          // rational
  std::uint64_t space_size = 0;
};

struct GreedyCertificate {
  std::vector<BigRat> phi_trace;  // n+1 values, non-increasing, last < 1
};

struct BlockCertificate {
  struct Block {
    std::size_t start = 0, len = 0;
    std::size_t r_target = 0;   // per-block r_block from the formula
    std::size_t r_achieved = 0; // per-block distance lower bound achieved
    TupleElement x;
    nlohmann::json sub;  // the block's half-dim solution
  };
  std::size_t r_block = 0;
  std::vector<Block> blocks;
};

struct RppSolution {
  TupleElement x;
  SolveMode mode_used = SolveMode::auto_mode;
  std::size_t claimed_r = 0;  // certified hamming(x,H) > claimed_r
  nlohmann::json params;
  std::variant<HittingCertificate, GreedyCertificate, BlockCertificate> certificate;
  std::optional<std::size_t> verified_distance;

  nlohmann::json to_json() const;
  static RppSolution from_json(GroupPtr g, const nlohmann::json& j);
};

// First s in lex scan order of S outside every cover member; certificate
// records the per-member verdicts of the hit. NoHit when S is exhausted.
TupleElement hit_with_space(const CoverFamily& cover, const BiasedSpace& s,
                            HittingCertificate* cert = nullptr);

// Conditional-probabilities walk with the exact estimator
// phi(y) = sum_A |{H_A}_y| / |G|^{n-|y|}; ties resolved to the smallest
// element index. EstimatorStuck when phi_0 >= 1.
TupleElement greedy_conditional(const CoverFamily& cover,
                                GreedyCertificate* cert = nullptr);

struct SolveOptions {
  BigRat c = BigRat(1, 4);
  std::optional<CoverParams> cover_params;  // default: CoverParams::desk
  std::optional<BigRat> alpha_override;     // hitting-space bias target
  bool enforce_r_bound = false;             // r <= ceil(c log2 n) precondition
};

RppSolution solve_half_dim(const RppInstance& inst, const SolveOptions& opts = {});
RppSolution solve_general_k(const RppInstance& inst, const SolveOptions& opts = {});

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> passed;
  std::string first_violation;  // empty when ok
  std::optional<std::size_t> exact_distance;
  nlohmann::json to_json() const;
};

VerifyReport verify_solution(const RppInstance& inst, const RppSolution& sol,
                             std::size_t cap = kDefaultEnumCap);

}  // namespace rpp
