#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rpp/errors.hpp"

namespace rpp {

enum class GroupKind { abelian, table };

// A fixed finite group of order <= 256. Elements are dense indices
// 0..order-1; for the abelian kind the index is the little-endian
// mixed-radix encoding over the invariant factors d_1 | d_2 | ... | d_k.
// Multiplication and inverse tables are materialized for both kinds, so
// element arithmetic never branches on the kind.
class GroupSpec {
public:
  static constexpr std::uint32_t kMaxOrder = 256;

  static std::shared_ptr<const GroupSpec> abelian(std::vector<std::uint32_t> invariant_factors);
  static std::shared_ptr<const GroupSpec> from_table(
      const std::vector<std::vector<std::uint32_t>>& table,
      const std::vector<std::uint32_t>* inverse = nullptr);
  static std::shared_ptr<const GroupSpec> from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  GroupKind kind() const { return kind_; }
  std::uint32_t order() const { return order_; }
  std::uint32_t identity() const { return identity_; }
  bool is_abelian_kind() const { return kind_ == GroupKind::abelian; }
  bool commutes() const { return commutes_; }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return mul_[std::size_t(a) * order_ + b];
  }
  std::uint32_t inv(std::uint32_t a) const { return inv_[a]; }

  // Abelian-kind structure (throws InvalidArgument on table kind).
  const std::vector<std::uint32_t>& invariant_factors() const;
  std::size_t num_digits() const;                    // k
  std::uint32_t exponent() const;                    // d_k
  void decode_digits(std::uint32_t index, std::uint8_t* digits) const;
  std::uint32_t encode_digits(const std::uint8_t* digits) const;

  // A small generating set of the group itself (unit digits for abelian,
  // greedily chosen for table groups).
  const std::vector<std::uint32_t>& generating_set() const { return gens_; }

  bool same_as(const GroupSpec& other) const;

private:
  GroupSpec() = default;
  void build_tables_abelian();
  void validate_table() const;
  void finish_common();

  GroupKind kind_ = GroupKind::abelian;
  std::uint32_t order_ = 1;
  std::uint32_t identity_ = 0;
  bool commutes_ = true;
  std::vector<std::uint32_t> factors_;   // abelian kind
  std::vector<std::uint32_t> places_;    // mixed-radix places, abelian kind
  std::vector<std::uint8_t> mul_;        // order x order
  std::vector<std::uint8_t> inv_;        // order
  std::vector<std::uint32_t> gens_;
};

using GroupPtr = std::shared_ptr<const GroupSpec>;

}  // namespace rpp
