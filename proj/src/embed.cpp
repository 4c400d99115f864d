#include "rpp/embed.hpp"

namespace rpp {

Permutation embed_tuple(const TupleElement& t) {
  const auto& g = t.group();
  const std::uint32_t go = g.order();
  std::vector<Point> img(omega_size(g, t.size()));
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::uint32_t a = 0; a < go; ++a)
      img[i * go + a] = Point(i * go + g.mul(a, t[i]));
  return Permutation(std::move(img));
}

std::vector<Permutation> embed_generators(const Subgroup& h) {
  std::vector<Permutation> out;
  out.reserve(h.generators().size());
  for (const auto& t : h.generators()) out.push_back(embed_tuple(t));
  return out;
}

std::vector<Point> embedded_base_hint(const GroupSpec& g, std::size_t n) {
  std::vector<Point> hint(n);
  for (std::size_t i = 0; i < n; ++i) hint[i] = omega_point(g, i, g.identity());
  return hint;
}

const PermGroup& embedded_bsgs(const Subgroup& h) {
  if (!h.bsgs_cache) {
    auto pg = std::make_shared<PermGroup>(
        schreier_sims(omega_size(h.group(), h.ambient_n()), embed_generators(h),
                      embedded_base_hint(h.group(), h.ambient_n())));
    h.bsgs_cache = std::move(pg);
  }
  return *h.bsgs_cache;
}

namespace {

// Walks the chain for the constraint "base_j^x = (y_j, j) for j < i"; returns
// the level count satisfied (== prefix length iff attainable). Fixing one
// point of G x {j} fixes the whole block for embedded groups, so the
// constraint binds exactly the coordinate-major base points.
bool prefix_attainable(const PermGroup& pg, const GroupSpec& g,
                       std::span<const std::uint8_t> prefix) {
  Permutation acc = Permutation::identity(pg.degree());
  for (std::size_t j = 0; j < prefix.size(); ++j) {
    const auto& lv = pg.levels()[j];
    const Point want = acc.apply(omega_point(g, j, prefix[j]));
    const auto pos = lv.orbit_pos[want];
    if (pos < 0) return false;
    acc = compose(acc, lv.witness_inv[std::size_t(pos)]);
  }
  return true;
}

}  // namespace

BigInt coset_prefix_count(const Subgroup& h, std::span<const std::uint8_t> prefix) {
  const std::size_t i = prefix.size();
  if (i > h.ambient_n()) throw InvalidArgument("prefix longer than ambient n");
  const PermGroup& pg = embedded_bsgs(h);
  // the coordinate-major hint guarantees one level per coordinate
  if (pg.levels().size() != h.ambient_n())
    throw InvalidArgument("embedded chain is not coordinate-aligned");
  if (!prefix_attainable(pg, h.group(), prefix)) return 0;
  BigInt k = 1;
  for (std::size_t j = i; j < pg.levels().size(); ++j)
    k *= BigInt(pg.levels()[j].orbit.size());
  return k;
}

bool projection_member(const Subgroup& h, std::span<const std::uint8_t> prefix) {
  const std::size_t i = prefix.size();
  if (i == 0) return true;
  if (i > h.ambient_n()) throw InvalidArgument("prefix longer than ambient n");
  const Subgroup proj = project_subgroup(h, 0, i);
  const PermGroup& pg = embedded_bsgs(proj);
  const TupleElement y(h.group_ptr(),
                       std::vector<std::uint8_t>(prefix.begin(), prefix.end()));
  return pg.member(embed_tuple(y));
}

Subgroup project_subgroup(const Subgroup& h, std::size_t start, std::size_t len) {
  if (start + len > h.ambient_n() || len == 0)
    throw InvalidArgument("bad projection window");
  std::vector<TupleElement> gens;
  gens.reserve(h.generators().size());
  for (const auto& t : h.generators()) {
    auto c = t.coords();
    gens.emplace_back(h.group_ptr(),
                      std::vector<std::uint8_t>(c.begin() + std::ptrdiff_t(start),
                                                c.begin() + std::ptrdiff_t(start + len)));
  }
  return Subgroup(h.group_ptr(), len, std::move(gens));
}

bool bsgs_contains(const Subgroup& h, const TupleElement& x) {
  if (x.size() != h.ambient_n() || !x.group().same_as(h.group()))
    throw InvalidArgument("element shape mismatch");
  return embedded_bsgs(h).member(embed_tuple(x));
}

}  // namespace rpp
