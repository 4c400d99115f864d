#include "rpp/tuple.hpp"

#include <algorithm>
#include <cstring>

#include <nlohmann/json.hpp>

#include "rpp/kernels.hpp"

namespace rpp {

TupleElement::TupleElement(GroupPtr g, std::vector<std::uint8_t> coords)
    : g_(std::move(g)), c_(std::move(coords)) {
  if (c_.empty()) throw InvalidArgument("tuple length must be >= 1");
  for (auto v : c_)
    if (v >= g_->order()) throw InvalidArgument("tuple coordinate out of range");
}

TupleElement TupleElement::identity(GroupPtr g, std::size_t n) {
  return TupleElement(g, std::vector<std::uint8_t>(n, std::uint8_t(g->identity())));
}

TupleElement TupleElement::inverse() const {
  std::vector<std::uint8_t> r(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = std::uint8_t(g_->inv(c_[i]));
  return TupleElement(g_, std::move(r));
}

std::size_t TupleElement::weight() const {
  return kernels::count_ne_u8(c_.data(), c_.size(), std::uint8_t(g_->identity()));
}

void mul_rows(const GroupSpec& g, const std::uint8_t* a, const std::uint8_t* b,
              std::uint8_t* dst, std::size_t n) {
  if (g.is_abelian_kind() && g.num_digits() == 1) {
    kernels::addmod_u8(dst, a, b, n, std::uint8_t(g.order()));
    return;
  }
  for (std::size_t i = 0; i < n; ++i) dst[i] = std::uint8_t(g.mul(a[i], b[i]));
}

std::size_t weight_row(const GroupSpec& g, const std::uint8_t* p, std::size_t n) {
  return kernels::count_ne_u8(p, n, std::uint8_t(g.identity()));
}

TupleElement mul(const TupleElement& a, const TupleElement& b) {
  if (!a.group().same_as(b.group()) || a.size() != b.size())
    throw InvalidArgument("tuple product needs matching group and length");
  std::vector<std::uint8_t> r(a.size());
  mul_rows(a.group(), a.coords().data(), b.coords().data(), r.data(), a.size());
  return TupleElement(a.group_ptr(), std::move(r));
}

std::size_t hamming(const TupleElement& x, const TupleElement& y) {
  if (!x.group().same_as(y.group()) || x.size() != y.size())
    throw InvalidArgument("hamming distance needs matching group and length");
  return kernels::count_diff_u8(x.coords().data(), y.coords().data(), x.size());
}

TupleElement quotient(const TupleElement& x, const TupleElement& y) {
  if (!x.group().same_as(y.group()) || x.size() != y.size())
    throw InvalidArgument("quotient needs matching group and length");
  const auto& g = x.group();
  std::vector<std::uint8_t> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    r[i] = std::uint8_t(g.mul(g.inv(x[i]), y[i]));
  return TupleElement(x.group_ptr(), std::move(r));
}

TupleElement TupleElement::from_json(GroupPtr g, const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("tuple must be a JSON array of integers");
  std::vector<std::uint8_t> c;
  c.reserve(j.size());
  for (const auto& v : j) {
    const auto x = v.get<std::int64_t>();
    if (x < 0 || x >= std::int64_t(g->order()))
      throw ParseError("tuple coordinate out of range");
    c.push_back(std::uint8_t(x));
  }
  return TupleElement(std::move(g), std::move(c));
}

nlohmann::json TupleElement::to_json() const {
  nlohmann::json a = nlohmann::json::array();
  for (auto v : c_) a.push_back(int(v));
  return a;
}

TupleElement TupleSet::element(std::size_t i) const {
  auto r = row(i);
  return TupleElement(g_, std::vector<std::uint8_t>(r.begin(), r.end()));
}

void TupleSet::push_row(std::span<const std::uint8_t> r) {
  flat_.insert(flat_.end(), r.begin(), r.end());
  sorted_ = false;
}

void TupleSet::sort_unique() {
  const std::size_t count = size();
  std::vector<std::uint32_t> order(count);
  for (std::uint32_t i = 0; i < count; ++i) order[i] = i;
  const auto* base = flat_.data();
  const std::size_t w = n_;
  auto cmp = [base, w](std::uint32_t a, std::uint32_t b) {
    return std::memcmp(base + a * w, base + b * w, w) < 0;
  };
  std::sort(order.begin(), order.end(), cmp);
  std::vector<std::uint8_t> out;
  out.reserve(flat_.size());
  for (std::size_t i = 0; i < count; ++i) {
    const auto* r = base + order[i] * w;
    if (!out.empty() && std::memcmp(out.data() + out.size() - w, r, w) == 0) continue;
    out.insert(out.end(), r, r + w);
  }
  flat_ = std::move(out);
  sorted_ = true;
}

bool TupleSet::contains(std::span<const std::uint8_t> r) const {
  if (!sorted_) throw InvalidArgument("TupleSet::contains before sort_unique");
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const int c = std::memcmp(flat_.data() + mid * n_, r.data(), n_);
    if (c == 0) return true;
    if (c < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  return false;
}

}  // namespace rpp
