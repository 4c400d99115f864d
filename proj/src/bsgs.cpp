#include "rpp/bsgs.hpp"

#include <algorithm>

namespace rpp {

namespace {

// Mutable chain under construction.
struct Builder {
  std::size_t omega;
  std::vector<BsgsLevel> levels;

  explicit Builder(std::size_t m) : omega(m) {}

  void add_level(Point p) {
    BsgsLevel lv;
    lv.base_point = p;
    lv.orbit_pos.assign(omega, -1);
    levels.push_back(std::move(lv));
    recompute_orbit(levels.size() - 1);
  }

  // Extends the orbit of level i under its current generator list.
  void recompute_orbit(std::size_t i) {
    auto& lv = levels[i];
    if (lv.orbit.empty()) {
      lv.orbit_pos[lv.base_point] = 0;
      lv.orbit.push_back(lv.base_point);
      lv.witness.push_back(Permutation::identity(omega));
      lv.witness_inv.push_back(Permutation::identity(omega));
    }
    for (std::size_t head = 0; head < lv.orbit.size(); ++head) {
      for (const auto& g : lv.gens) {
        const Point t = g.apply(lv.orbit[head]);
        if (lv.orbit_pos[t] < 0) {
          lv.orbit_pos[t] = std::int32_t(lv.orbit.size());
          lv.orbit.push_back(t);
          auto w = compose(lv.witness[head], g);
          lv.witness_inv.push_back(w.inverse());
          lv.witness.push_back(std::move(w));
        }
      }
    }
  }

  Permutation sift(Permutation g, std::size_t from, std::size_t* stop) const {
    std::size_t j = from;
    for (; j < levels.size(); ++j) {
      const auto& lv = levels[j];
      const Point p = g.apply(lv.base_point);
      if (p == lv.base_point) continue;
      const auto pos = lv.orbit_pos[p];
      if (pos < 0) break;
      g = compose(g, lv.witness_inv[std::size_t(pos)]);
    }
    if (stop) *stop = j;
    return g;
  }

  // Install a sifted residue that fixes base points < at. Returns the level
  // whose closure must be re-verified.
  std::size_t install(const Permutation& residue, std::size_t at) {
    if (at == levels.size()) add_level(residue.first_moved());
    const std::size_t target = std::min(at, levels.size() - 1);
    for (std::size_t j = 0; j <= target; ++j) {
      levels[j].gens.push_back(residue);
      recompute_orbit(j);
    }
    return target;
  }

  // Verify Schreier generators of level i all strip; on failure install the
  // residue and report where to resume.
  bool close_level(std::size_t i, std::size_t* resume) {
    recompute_orbit(i);
    auto& lv = levels[i];
    for (std::size_t oi = 0; oi < lv.orbit.size(); ++oi) {
      for (std::size_t si = 0; si < lv.gens.size(); ++si) {
        const auto& s = lv.gens[si];
        const Point t = s.apply(lv.orbit[oi]);
        const auto tpos = lv.orbit_pos[t];
        auto u = compose(compose(lv.witness[oi], s), lv.witness_inv[std::size_t(tpos)]);
        if (u.is_identity()) continue;
        std::size_t stop = 0;
        auto residue = sift(std::move(u), i + 1, &stop);
        if (residue.is_identity()) continue;
        *resume = install(residue, stop);
        return false;
      }
    }
    return true;
  }
};

}  // namespace

PermGroup schreier_sims(std::size_t omega, const std::vector<Permutation>& gens,
                        const std::vector<Point>& base_hint) {
  Builder b(omega);
  for (auto p : base_hint) {
    if (p >= omega) throw InvalidArgument("base hint point out of range");
    b.add_level(p);
  }
  for (const auto& g : gens) {
    if (g.degree() != omega) throw InvalidArgument("generator degree mismatch");
    std::size_t stop = 0;
    auto residue = b.sift(g, 0, &stop);
    if (!residue.is_identity()) b.install(residue, stop);
  }
  if (!b.levels.empty()) {
    std::size_t i = b.levels.size() - 1;
    while (true) {
      std::size_t resume = 0;
      if (b.close_level(i, &resume)) {
        if (i == 0) break;
        --i;
      } else {
        i = resume;
      }
    }
  }
  PermGroup pg;
  pg.omega_ = omega;
  pg.levels_ = std::move(b.levels);
  return pg;
}

std::vector<Point> PermGroup::base() const {
  std::vector<Point> b;
  b.reserve(levels_.size());
  for (const auto& lv : levels_) b.push_back(lv.base_point);
  return b;
}

BigInt PermGroup::order() const {
  BigInt o = 1;
  for (const auto& lv : levels_) o *= BigInt(lv.orbit.size());
  return o;
}

Permutation PermGroup::sift(const Permutation& s, std::size_t from,
                            std::size_t* stop_level) const {
  Permutation g = s;
  std::size_t j = from;
  for (; j < levels_.size(); ++j) {
    const auto& lv = levels_[j];
    const Point p = g.apply(lv.base_point);
    if (p == lv.base_point) continue;
    const auto pos = lv.orbit_pos[p];
    if (pos < 0) break;
    g = compose(g, lv.witness_inv[std::size_t(pos)]);
  }
  if (stop_level) *stop_level = j;
  return g;
}

bool PermGroup::member(const Permutation& s) const {
  if (s.degree() != omega_) throw InvalidArgument("degree mismatch in member()");
  return sift(s, 0, nullptr).is_identity();
}

const std::vector<Permutation>& PermGroup::strong_generators() const {
  static const std::vector<Permutation> empty;
  return levels_.empty() ? empty : levels_.front().gens;
}

PermGroup PermGroup::suffix_group(std::size_t from) const {
  PermGroup pg;
  pg.omega_ = omega_;
  if (from < levels_.size())
    pg.levels_.assign(levels_.begin() + std::ptrdiff_t(from), levels_.end());
  return pg;
}

PermGroup pointwise_stabilizer(const PermGroup& pg, const std::vector<Point>& delta) {
  if (delta.empty()) return pg;
  std::vector<Point> hint;
  for (auto p : delta)
    if (std::find(hint.begin(), hint.end(), p) == hint.end()) hint.push_back(p);
  const std::size_t prefix = hint.size();
  // keep original base order after the delta prefix so the rebuild stays cheap
  for (auto p : pg.base())
    if (std::find(hint.begin(), hint.end(), p) == hint.end()) hint.push_back(p);
  const PermGroup rebuilt = schreier_sims(pg.degree(), pg.strong_generators(), hint);
  return rebuilt.suffix_group(prefix);
}

}  // namespace rpp
