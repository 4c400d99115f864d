#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rpp/bigint.hpp"
#include "rpp/tuple.hpp"

namespace rpp {

class PermGroup;  // perm-engine; attached lazily via embedded_bsgs()

inline constexpr std::size_t kDefaultEnumCap = std::size_t(1) << 20;

struct DimensionReport {
  BigInt order;   // exact |H|
  double delta;   // log_{|G|} |H|
};

// A subgroup of G^n given by generators. Enumeration and BSGS data attach
// lazily and the object is immutable afterwards.
class Subgroup {
public:
  Subgroup(GroupPtr g, std::size_t n, std::vector<TupleElement> generators);
  static Subgroup from_json(GroupPtr g, const nlohmann::json& j);
  nlohmann::json to_json() const;

  const GroupPtr& group_ptr() const { return g_; }
  const GroupSpec& group() const { return *g_; }
  std::size_t ambient_n() const { return n_; }
  const std::vector<TupleElement>& generators() const { return gens_; }

  // Full closure of the generators; CapExceeded once the closure grows past
  // cap. The result is cached (first successful call wins).
  const TupleSet& enumerate(std::size_t cap = kDefaultEnumCap) const;
  bool enumerated() const { return elems_ != nullptr; }

  // Exact order; uses the enumeration cache when present, otherwise the
  // embedded BSGS (no cap).
  BigInt order() const;
  DimensionReport dimension() const;

  // min_{h in H} hamming(x, h), by scanning the enumeration.
  std::size_t distance_to(const TupleElement& x, std::size_t cap = kDefaultEnumCap) const;
  bool contains_enum(const TupleElement& x, std::size_t cap = kDefaultEnumCap) const;

  // perm-engine cache slot; see embedded_bsgs() in embed.hpp
  mutable std::shared_ptr<const PermGroup> bsgs_cache;

private:
  GroupPtr g_;
  std::size_t n_;
  std::vector<TupleElement> gens_;
  mutable std::shared_ptr<const TupleSet> elems_;
};

}  // namespace rpp
