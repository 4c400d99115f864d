#include "rpp/perm.hpp"

#include <nlohmann/json.hpp>

namespace rpp {

Permutation::Permutation(std::vector<Point> images) : img_(std::move(images)) {
  std::vector<bool> seen(img_.size(), false);
  for (auto v : img_) {
    if (v >= img_.size() || seen[v])
      throw InvalidArgument("permutation images must be a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t m) {
  std::vector<Point> img(m);
  for (std::size_t i = 0; i < m; ++i) img[i] = Point(i);
  return Permutation(std::move(img));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<Point> inv(img_.size());
  for (std::size_t i = 0; i < img_.size(); ++i) inv[img_[i]] = Point(i);
  return Permutation(std::move(inv));
}

Point Permutation::first_moved() const {
  for (std::size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != i) return Point(i);
  return Point(img_.size());
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree())
    throw InvalidArgument("composing permutations of different degree");
  std::vector<Point> img(p.degree());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = q.apply(p.apply(Point(i)));
  return Permutation(std::move(img));
}

std::vector<std::vector<Point>> orbit_partition(std::size_t omega,
                                                const std::vector<Permutation>& gens) {
  std::vector<bool> done(omega, false);
  std::vector<std::vector<Point>> blocks;
  for (Point start = 0; start < omega; ++start) {
    if (done[start]) continue;
    std::vector<Point> block{start};
    done[start] = true;
    for (std::size_t head = 0; head < block.size(); ++head)
      for (const auto& g : gens) {
        const Point t = g.apply(block[head]);
        if (!done[t]) {
          done[t] = true;
          block.push_back(t);
        }
      }
    std::sort(block.begin(), block.end());
    blocks.push_back(std::move(block));
  }
  return blocks;
}

Permutation Permutation::from_json(const nlohmann::json& j) {
  return Permutation(j.get<std::vector<Point>>());
}

nlohmann::json Permutation::to_json() const {
  return nlohmann::json(img_);
}

}  // namespace rpp
