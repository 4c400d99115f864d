#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rpp/errors.hpp"

namespace rpp {

using Point = std::uint32_t;

// Permutation of {0..m-1}. Right action: x^p = images[x], and compose(p,q)
// applies p first, so (x)^(pq) = (x^p)^q and embedding G^n is a homomorphism.
class Permutation {
public:
  explicit Permutation(std::vector<Point> images);
  static Permutation identity(std::size_t m);
  static Permutation from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t degree() const { return img_.size(); }
  Point apply(Point x) const { return img_[x]; }
  const std::vector<Point>& images() const { return img_; }
  bool is_identity() const;
  Permutation inverse() const;
  // smallest moved point, or degree() if identity
  Point first_moved() const;

  bool operator==(const Permutation& o) const { return img_ == o.img_; }

private:
  std::vector<Point> img_;
};

Permutation compose(const Permutation& p, const Permutation& q);

// Orbits of <gens> on {0..omega-1}; blocks in order of their smallest point.
std::vector<std::vector<Point>> orbit_partition(std::size_t omega,
                                                const std::vector<Permutation>& gens);

}  // namespace rpp
