#include "rpp/group.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

namespace rpp {

std::shared_ptr<const GroupSpec> GroupSpec::abelian(std::vector<std::uint32_t> invariant_factors) {
  if (invariant_factors.empty())
    throw InvalidArgument("abelian group needs at least one invariant factor");
  std::uint64_t order = 1;
  bool nontrivial = false;
  for (std::size_t j = 0; j < invariant_factors.size(); ++j) {
    const auto d = invariant_factors[j];
    if (d < 1) throw InvalidArgument("invariant factor must be >= 1");
    if (j > 0 && invariant_factors[j] % invariant_factors[j - 1] != 0)
      throw InvalidArgument("invariant factors must form a divisibility chain");
    nontrivial |= d >= 2;
    order *= d;
    if (order > kMaxOrder) throw InvalidArgument("group order exceeds 256");
  }
  if (!nontrivial) throw InvalidArgument("group must have order >= 2");

  auto g = std::shared_ptr<GroupSpec>(new GroupSpec());
  g->kind_ = GroupKind::abelian;
  g->order_ = std::uint32_t(order);
  g->identity_ = 0;
  g->commutes_ = true;
  g->factors_ = std::move(invariant_factors);
  g->places_.resize(g->factors_.size());
  std::uint32_t place = 1;
  for (std::size_t j = 0; j < g->factors_.size(); ++j) {
    g->places_[j] = place;
    place *= g->factors_[j];
  }
  g->build_tables_abelian();
  for (std::size_t j = 0; j < g->factors_.size(); ++j)
    if (g->factors_[j] > 1) g->gens_.push_back(g->places_[j]);
  g->finish_common();
  return g;
}

void GroupSpec::build_tables_abelian() {
  const std::size_t k = factors_.size();
  mul_.resize(std::size_t(order_) * order_);
  inv_.resize(order_);
  std::vector<std::uint8_t> da(k), db(k), dr(k);
  for (std::uint32_t a = 0; a < order_; ++a) {
    decode_digits(a, da.data());
    for (std::size_t j = 0; j < k; ++j)
      dr[j] = std::uint8_t(da[j] == 0 ? 0 : factors_[j] - da[j]);
    inv_[a] = std::uint8_t(encode_digits(dr.data()));
    for (std::uint32_t b = 0; b < order_; ++b) {
      decode_digits(b, db.data());
      for (std::size_t j = 0; j < k; ++j) {
        std::uint32_t s = std::uint32_t(da[j]) + db[j];
        if (s >= factors_[j]) s -= factors_[j];
        dr[j] = std::uint8_t(s);
      }
      mul_[std::size_t(a) * order_ + b] = std::uint8_t(encode_digits(dr.data()));
    }
  }
}

std::shared_ptr<const GroupSpec> GroupSpec::from_table(
    const std::vector<std::vector<std::uint32_t>>& table,
    const std::vector<std::uint32_t>* inverse) {
  const std::size_t n = table.size();
  if (n < 2 || n > kMaxOrder) throw InvalidArgument("table order must be in [2,256]");
  auto g = std::shared_ptr<GroupSpec>(new GroupSpec());
  g->kind_ = GroupKind::table;
  g->order_ = std::uint32_t(n);
  g->mul_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    if (table[a].size() != n) throw InvalidArgument("multiplication table must be square");
    for (std::size_t b = 0; b < n; ++b) {
      if (table[a][b] >= n) throw InvalidArgument("table entry out of range");
      g->mul_[a * n + b] = std::uint8_t(table[a][b]);
    }
  }
  g->validate_table();
  if (inverse) {
    if (inverse->size() != n) throw InvalidArgument("inverse table size mismatch");
    for (std::size_t a = 0; a < n; ++a)
      if ((*inverse)[a] != g->inv_[a])
        throw InvalidArgument("inverse table inconsistent with multiplication table");
  }
  // greedy generating set
  std::vector<bool> in_closure(n, false);
  in_closure[g->identity_] = true;
  std::size_t covered = 1;
  for (std::uint32_t cand = 0; cand < n && covered < n; ++cand) {
    if (in_closure[cand]) continue;
    g->gens_.push_back(cand);
    std::vector<std::uint32_t> frontier;
    for (std::uint32_t e = 0; e < n; ++e)
      if (in_closure[e]) frontier.push_back(e);
    while (!frontier.empty()) {
      std::vector<std::uint32_t> next;
      for (auto e : frontier)
        for (auto s : g->gens_) {
          const auto t = g->mul(e, s);
          if (!in_closure[t]) {
            in_closure[t] = true;
            ++covered;
            next.push_back(t);
          }
        }
      frontier = std::move(next);
    }
  }
  g->finish_common();
  return g;
}

void GroupSpec::validate_table() const {
  const std::uint32_t n = order_;
  // identity: unique e with e*x = x*e = x for all x
  std::int64_t id = -1;
  for (std::uint32_t e = 0; e < n; ++e) {
    bool ok = true;
    for (std::uint32_t x = 0; x < n && ok; ++x)
      ok = mul(e, x) == x && mul(x, e) == x;
    if (ok) {
      if (id >= 0) throw InvalidArgument("table has two identities");
      id = e;
    }
  }
  if (id < 0) throw InvalidArgument("table has no identity element");
  auto* self = const_cast<GroupSpec*>(this);
  self->identity_ = std::uint32_t(id);
  // associativity, exhaustive
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c)))
          throw InvalidArgument("table is not associative");
  // inverses
  self->inv_.assign(n, 0);
  for (std::uint32_t a = 0; a < n; ++a) {
    std::int64_t ia = -1;
    for (std::uint32_t b = 0; b < n; ++b)
      if (mul(a, b) == identity_ && mul(b, a) == identity_) ia = b;
    if (ia < 0) throw InvalidArgument("table element lacks an inverse");
    self->inv_[a] = std::uint8_t(ia);
  }
  bool comm = true;
  for (std::uint32_t a = 0; a < n && comm; ++a)
    for (std::uint32_t b = 0; b < n && comm; ++b)
      comm = mul(a, b) == mul(b, a);
  self->commutes_ = comm;
}

void GroupSpec::finish_common() {
  if (gens_.empty()) gens_.push_back(identity_);
}

const std::vector<std::uint32_t>& GroupSpec::invariant_factors() const {
  if (kind_ != GroupKind::abelian)
    throw InvalidArgument("invariant factors are defined for the abelian kind only");
  return factors_;
}

std::size_t GroupSpec::num_digits() const { return invariant_factors().size(); }

std::uint32_t GroupSpec::exponent() const { return invariant_factors().back(); }

void GroupSpec::decode_digits(std::uint32_t index, std::uint8_t* digits) const {
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    digits[j] = std::uint8_t(index % factors_[j]);
    index /= factors_[j];
  }
}

std::uint32_t GroupSpec::encode_digits(const std::uint8_t* digits) const {
  std::uint32_t v = 0;
  for (std::size_t j = 0; j < factors_.size(); ++j) v += digits[j] * places_[j];
  return v;
}

bool GroupSpec::same_as(const GroupSpec& other) const {
  return kind_ == other.kind_ && order_ == other.order_ && mul_ == other.mul_;
}

std::shared_ptr<const GroupSpec> GroupSpec::from_json(const nlohmann::json& j) {
  if (j.contains("abelian"))
    return abelian(j.at("abelian").get<std::vector<std::uint32_t>>());
  if (j.contains("table")) {
    const auto table = j.at("table").get<std::vector<std::vector<std::uint32_t>>>();
    if (j.contains("inverse")) {
      const auto inverse = j.at("inverse").get<std::vector<std::uint32_t>>();
      return from_table(table, &inverse);
    }
    return from_table(table);
  }
  throw ParseError("group spec must have an \"abelian\" or \"table\" key");
}

nlohmann::json GroupSpec::to_json() const {
  nlohmann::json j;
  if (kind_ == GroupKind::abelian) {
    j["abelian"] = factors_;
  } else {
    std::vector<std::vector<std::uint32_t>> table(order_, std::vector<std::uint32_t>(order_));
    for (std::uint32_t a = 0; a < order_; ++a)
      for (std::uint32_t b = 0; b < order_; ++b) table[a][b] = mul(a, b);
    j["table"] = table;
    j["inverse"] = std::vector<std::uint32_t>(inv_.begin(), inv_.end());
  }
  return j;
}

}  // namespace rpp
