#include "rpp/subgroup.hpp"

#include <cmath>
#include <cstring>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "rpp/bsgs.hpp"
#include "rpp/embed.hpp"
#include "rpp/kernels.hpp"

namespace rpp {

Subgroup::Subgroup(GroupPtr g, std::size_t n, std::vector<TupleElement> generators)
    : g_(std::move(g)), n_(n), gens_(std::move(generators)) {
  if (n_ < 1) throw InvalidArgument("ambient n must be >= 1");
  for (const auto& t : gens_) {
    if (t.size() != n_ || !t.group().same_as(*g_))
      throw InvalidArgument("subgroup generators must share group and n");
  }
}

namespace {

// mixed-radix packing of a coordinate row; desk scales fit 128 bits
unsigned __int128 pack_row(const std::uint8_t* r, std::size_t n, std::uint32_t order) {
  unsigned __int128 key = 0;
  for (std::size_t i = n; i-- > 0;) key = key * order + r[i];
  return key;
}

struct KeyHash {
  std::size_t operator()(unsigned __int128 k) const {
    return std::size_t(k ^ (k >> 64)) * 0x9e3779b97f4a7c15ull;
  }
};

}  // namespace

const TupleSet& Subgroup::enumerate(std::size_t cap) const {
  if (elems_) return *elems_;
  const std::uint32_t order = g_->order();
  if (n_ * std::log2(double(order)) > 127.0)
    throw TooLarge("closure keys exceed 128 bits; shrink n or |G|");

  auto out = std::make_shared<TupleSet>(g_, n_);
  std::vector<std::uint8_t> storage;
  std::unordered_set<unsigned __int128, KeyHash> seen;

  const TupleElement id = TupleElement::identity(g_, n_);
  storage.insert(storage.end(), id.coords().begin(), id.coords().end());
  seen.insert(pack_row(id.coords().data(), n_, order));

  std::vector<std::uint8_t> prod(n_);
  std::size_t head = 0;
  while (head * n_ < storage.size()) {
    // storage grows while we walk it; index arithmetic instead of iterators
    for (const auto& gen : gens_) {
      mul_rows(*g_, storage.data() + head * n_, gen.coords().data(), prod.data(), n_);
      const auto key = pack_row(prod.data(), n_, order);
      if (seen.insert(key).second) {
        if (seen.size() > cap)
          throw CapExceeded("subgroup closure exceeds cap " + std::to_string(cap));
        storage.insert(storage.end(), prod.begin(), prod.end());
      }
    }
    ++head;
  }
  for (std::size_t i = 0; i * n_ < storage.size(); ++i)
    out->push_row({storage.data() + i * n_, n_});
  out->sort_unique();
  elems_ = out;
  return *elems_;
}

BigInt Subgroup::order() const {
  if (elems_) return BigInt(elems_->size());
  if (bsgs_cache) return bsgs_order(*bsgs_cache);
  return bsgs_order(embedded_bsgs(*this));
}

DimensionReport Subgroup::dimension() const {
  const BigInt ord = order();
  const double lg = std::log2(ord.convert_to<double>());
  const double base = std::log2(double(g_->order()));
  return {ord, lg / base};
}

std::size_t Subgroup::distance_to(const TupleElement& x, std::size_t cap) const {
  const TupleSet& elems = enumerate(cap);
  std::size_t best = n_ + 1;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const auto r = elems.row(i);
    const std::size_t d = kernels::count_diff_u8(x.coords().data(), r.data(), n_);
    if (d < best) {
      best = d;
      if (best == 0) break;
    }
  }
  return best;
}

bool Subgroup::contains_enum(const TupleElement& x, std::size_t cap) const {
  return enumerate(cap).contains(x);
}

Subgroup Subgroup::from_json(GroupPtr g, const nlohmann::json& j) {
  const std::size_t n = j.at("n").get<std::size_t>();
  std::vector<TupleElement> gens;
  for (const auto& a : j.at("generators")) gens.push_back(TupleElement::from_json(g, a));
  return Subgroup(std::move(g), n, std::move(gens));
}

nlohmann::json Subgroup::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : gens_) arr.push_back(t.to_json());
  j["generators"] = arr;
  return j;
}

}  // namespace rpp
