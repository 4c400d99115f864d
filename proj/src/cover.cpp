#include "rpp/cover.hpp"

#include <cmath>

namespace rpp {

CoverParams CoverParams::paper(std::size_t n, const BigRat& c) {
  if (n < 2) throw InvalidArgument("paper cover params need n >= 2");
  const double cd = rat_to_double(c);
  const double lg = std::log2(double(n));
  CoverParams p;
  p.c = c;
  p.ell = std::max<std::size_t>(1, std::size_t(std::ceil(10.0 * cd * lg)));
  if (p.ell > n) p.ell = n;
  p.block_size = (n + p.ell - 1) / p.ell;
  p.a_size = std::max<std::size_t>(1, std::size_t(std::ceil(cd * lg)));
  if (p.a_size > p.ell) p.a_size = p.ell;
  // n^{10c}
  p.m_bound = BigInt(std::uint64_t(std::llround(std::pow(double(n), 10.0 * cd))));
  return p;
}

CoverParams CoverParams::desk(std::size_t n, std::size_t r) {
  CoverParams p;
  p.c = BigRat(std::int64_t(std::max<std::size_t>(r, 1)));
  p.ell = n;
  p.block_size = 1;
  p.a_size = std::min(r, n);
  p.m_bound = 0;  // filled from the actual member count by callers
  return p;
}

void CoverParams::validate(std::size_t n, std::size_t r) const {
  if (r == 0) return;  // degenerate cover, no K_A
  if (ell == 0 || ell > n) throw RegimeViolation("block count out of range");
  if (std::size_t(ell) * block_size < n)
    throw RegimeViolation("blocks do not cover [n]");
  if (a_size == 0 || a_size > ell) throw RegimeViolation("a_size out of range");
  if (a_size < std::min(r, ell))
    throw RegimeViolation(
        "coverage requires a_size >= min(r, ell); a weight-r support can meet "
        "r distinct blocks");
}

nlohmann::json CoverParams::to_json() const {
  nlohmann::json j;
  j["c"] = rat_to_string(c);
  j["ell"] = ell;
  j["block_size"] = block_size;
  j["a_size"] = a_size;
  j["m_bound"] = big_to_json(m_bound);
  return j;
}

CoverParams CoverParams::from_json(const nlohmann::json& j) {
  CoverParams p;
  p.c = rat_from_string(j.at("c").get<std::string>());
  p.ell = j.at("ell").get<std::size_t>();
  p.block_size = j.at("block_size").get<std::size_t>();
  p.a_size = j.at("a_size").get<std::size_t>();
  p.m_bound = big_from_json(j.at("m_bound"));
  return p;
}

namespace {

// ascending combinations of [ell] choose a
bool next_combination(std::vector<std::uint32_t>& a, std::size_t ell) {
  const std::size_t k = a.size();
  std::size_t i = k;
  while (i-- > 0) {
    if (a[i] + 1 <= ell - (k - i)) {
      ++a[i];
      for (std::size_t j = i + 1; j < k; ++j) a[j] = a[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

CoverFamily build_cover(const Subgroup& h, std::size_t r, const CoverParams& params) {
  const std::size_t n = h.ambient_n();
  const auto& g = h.group();

  // delta(H) <= n/2, checked in exact integers: |H|^2 <= |G|^n
  const BigInt horder = h.order();
  if (horder * horder > big_pow(BigInt(g.order()), n))
    throw RegimeViolation("delta(H) > n/2");

  CoverFamily fam{params, h, r, {}, {}};

  if (r == 0) {
    fam.members.push_back(CoverMember{{}, h});
    return fam;
  }
  params.validate(n, r);

  // balanced consecutive ranges
  const std::size_t ell = params.ell;
  const std::size_t lo = n / ell, extra = n % ell;
  std::size_t at = 0;
  for (std::size_t b = 0; b < ell; ++b) {
    const std::size_t len = lo + (b < extra ? 1 : 0);
    fam.blocks.emplace_back(at, at + len);
    at += len;
  }

  const auto ggens = g.generating_set();
  std::vector<std::uint32_t> a(params.a_size);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::uint32_t(i);
  std::size_t count = 0;
  while (true) {
    std::vector<TupleElement> gens = h.generators();
    for (auto bi : a) {
      const auto [s, e] = fam.blocks[bi];
      for (std::size_t coord = s; coord < e; ++coord)
        for (auto gg : ggens) {
          std::vector<std::uint8_t> row(n, std::uint8_t(g.identity()));
          row[coord] = std::uint8_t(gg);
          gens.emplace_back(h.group_ptr(), std::move(row));
        }
    }
    fam.members.push_back(CoverMember{a, Subgroup(h.group_ptr(), n, std::move(gens))});
    if (++count > 4096) throw TooLarge("cover member count exceeds 4096");
    if (!next_combination(a, ell)) break;
  }
  return fam;
}

}  // namespace rpp
