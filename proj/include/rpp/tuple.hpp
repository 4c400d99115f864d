#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rpp/group.hpp"

namespace rpp {

// An element of G^n: a length-n array of element indices.
class TupleElement {
public:
  TupleElement(GroupPtr g, std::vector<std::uint8_t> coords);
  static TupleElement identity(GroupPtr g, std::size_t n);
  static TupleElement from_json(GroupPtr g, const nlohmann::json& j);
  nlohmann::json to_json() const;

  const GroupSpec& group() const { return *g_; }
  const GroupPtr& group_ptr() const { return g_; }
  std::size_t size() const { return c_.size(); }
  std::uint8_t operator[](std::size_t i) const { return c_[i]; }
  std::span<const std::uint8_t> coords() const { return c_; }

  TupleElement inverse() const;
  std::size_t weight() const;
  bool is_identity() const { return weight() == 0; }

  bool operator==(const TupleElement& o) const { return c_ == o.c_; }
  bool operator<(const TupleElement& o) const { return c_ < o.c_; }  // lex

private:
  GroupPtr g_;
  std::vector<std::uint8_t> c_;
};

TupleElement mul(const TupleElement& a, const TupleElement& b);
std::size_t hamming(const TupleElement& x, const TupleElement& y);
// coordinatewise x_i^{-1} y_i; its weight equals hamming(x, y)
TupleElement quotient(const TupleElement& x, const TupleElement& y);

// Raw-array variants used by the inner loops (same group/shape assumed).
void mul_rows(const GroupSpec& g, const std::uint8_t* a, const std::uint8_t* b,
              std::uint8_t* dst, std::size_t n);
std::size_t weight_row(const GroupSpec& g, const std::uint8_t* p, std::size_t n);

// Sorted deduplicated set of same-shape tuples in one flat buffer. Lex order
// of rows is the canonical scan order used everywhere.
class TupleSet {
public:
  TupleSet(GroupPtr g, std::size_t n) : g_(std::move(g)), n_(n) {}

  std::size_t size() const { return n_ ? flat_.size() / n_ : 0; }
  std::size_t width() const { return n_; }
  const GroupPtr& group_ptr() const { return g_; }
  std::span<const std::uint8_t> row(std::size_t i) const {
    return {flat_.data() + i * n_, n_};
  }
  TupleElement element(std::size_t i) const;
  bool contains(std::span<const std::uint8_t> r) const;  // binary search
  bool contains(const TupleElement& t) const { return contains(t.coords()); }

  void push_row(std::span<const std::uint8_t> r);  // appends; call sort_unique() after
  void sort_unique();

private:
  GroupPtr g_;
  std::size_t n_;
  std::vector<std::uint8_t> flat_;
  bool sorted_ = true;
};

}  // namespace rpp
