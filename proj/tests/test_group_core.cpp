#include <doctest.h>

#include <nlohmann/json.hpp>

#include "rpp/feasibility.hpp"
#include "rpp/subgroup.hpp"
#include "test_helpers.hpp"

using namespace rpp;
using testutil::s3_compose;
using testutil::s3_elements;
using testutil::s3_group;

namespace {

TupleElement tup(const GroupPtr& g, std::vector<std::uint8_t> c) {
  return TupleElement(g, std::move(c));
}

}  // namespace

TEST_CASE("mul: Z6 modular addition and identity law") {
  auto z6 = GroupSpec::abelian({6});
  CHECK(mul(tup(z6, {4}), tup(z6, {5})) == tup(z6, {3}));
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto a = testutil::random_tuple(z6, 5, rng);
    CHECK(mul(a, TupleElement::identity(z6, 5)) == a);
  }
}

TEST_CASE("mul: S3 table agrees with direct permutation composition") {
  auto s3 = s3_group();
  const auto els = s3_elements();
  // (12) = [1,0,2], (123) = [1,2,0]
  std::uint32_t swap12 = 0, cyc123 = 0;
  for (std::uint32_t i = 0; i < 6; ++i) {
    if (els[i] == std::array<int, 3>{1, 0, 2}) swap12 = i;
    if (els[i] == std::array<int, 3>{1, 2, 0}) cyc123 = i;
  }
  const auto direct = s3_compose(els[swap12], els[cyc123]);
  CHECK(els[s3->mul(swap12, cyc123)] == direct);
  for (std::uint32_t a = 0; a < 6; ++a)
    for (std::uint32_t b = 0; b < 6; ++b)
      CHECK(els[s3->mul(a, b)] == s3_compose(els[a], els[b]));
  CHECK_FALSE(s3->commutes());
  CHECK_FALSE(s3->is_abelian_kind());
}

TEST_CASE("inv: examples and exhaustive composition to identity") {
  auto z3 = GroupSpec::abelian({3});
  CHECK(tup(z3, {1, 2}).inverse() == tup(z3, {2, 1}));
  CHECK(TupleElement::identity(z3, 4).inverse() == TupleElement::identity(z3, 4));
  auto s3 = s3_group();
  for (std::uint32_t a = 0; a < 6; ++a)
    CHECK(s3->mul(a, s3->inv(a)) == s3->identity());
}

TEST_CASE("weight: examples and sampling mean") {
  auto z3 = GroupSpec::abelian({3});
  CHECK(tup(z3, {1, 0, 2, 0}).weight() == 2);
  CHECK(TupleElement::identity(z3, 7).weight() == 0);

  auto z2 = GroupSpec::abelian({2});
  const std::size_t n = 64, samples = 10000;
  Rng rng(42);
  double total = 0;
  for (std::size_t i = 0; i < samples; ++i)
    total += double(testutil::random_tuple(z2, n, rng).weight());
  const double mean = total / samples;
  const double sigma = std::sqrt(n * 0.25 / samples);
  CHECK(std::abs(mean - n / 2.0) < 5 * sigma);
}

TEST_CASE("hamming: examples, metric, quotient identity") {
  auto z2 = GroupSpec::abelian({2});
  CHECK(hamming(tup(z2, {0, 1, 1}), tup(z2, {1, 1, 0})) == 2);
  auto s3 = s3_group();
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const auto x = testutil::random_tuple(s3, 6, rng);
    const auto y = testutil::random_tuple(s3, 6, rng);
    const auto z = testutil::random_tuple(s3, 6, rng);
    CHECK(hamming(x, x) == 0);
    CHECK(hamming(x, y) == hamming(y, x));
    CHECK(hamming(x, z) <= hamming(x, y) + hamming(y, z));
    CHECK(hamming(x, y) == quotient(x, y).weight());
  }
}

TEST_CASE("enumerate: closures and cap") {
  auto z2 = GroupSpec::abelian({2});
  Subgroup h(z2, 2, {tup(z2, {1, 1})});
  const auto& e = h.enumerate();
  CHECK(e.size() == 2);
  CHECK(e.contains(tup(z2, {0, 0})));
  CHECK(e.contains(tup(z2, {1, 1})));

  Subgroup trivial(z2, 3, {});
  CHECK(trivial.enumerate().size() == 1);

  auto z4 = GroupSpec::abelian({4});
  Subgroup h4(z4, 2, {tup(z4, {1, 2})});
  const auto& e4 = h4.enumerate();
  CHECK(e4.size() == 4);
  for (auto want : {std::vector<std::uint8_t>{0, 0}, {1, 2}, {2, 0}, {3, 2}})
    CHECK(e4.contains(tup(z4, want)));

  Subgroup big(z4, 10, {tup(z4, {1, 0, 0, 0, 0, 0, 0, 0, 0, 0}),
                        tup(z4, {0, 1, 0, 0, 0, 0, 0, 0, 0, 0}),
                        tup(z4, {0, 0, 1, 0, 0, 0, 0, 0, 0, 0}),
                        tup(z4, {0, 0, 0, 1, 0, 0, 0, 0, 0, 0}),
                        tup(z4, {0, 0, 0, 0, 1, 0, 0, 0, 0, 0}),
                        tup(z4, {0, 0, 0, 0, 0, 1, 0, 0, 0, 0}),
                        tup(z4, {0, 0, 0, 0, 0, 0, 1, 0, 0, 0}),
                        tup(z4, {0, 0, 0, 0, 0, 0, 0, 1, 0, 0}),
                        tup(z4, {0, 0, 0, 0, 0, 0, 0, 0, 1, 0}),
                        tup(z4, {0, 0, 0, 0, 0, 0, 0, 0, 0, 1})});
  CHECK_THROWS_AS(big.enumerate(1000), CapExceeded);
}

TEST_CASE("enumerate: invariant under generator order permutation") {
  auto z6 = GroupSpec::abelian({6});
  Rng rng(3);
  for (int it = 0; it < 10; ++it) {
    auto a = testutil::random_tuple(z6, 4, rng);
    auto b = testutil::random_tuple(z6, 4, rng);
    auto c = testutil::random_tuple(z6, 4, rng);
    Subgroup h1(z6, 4, {a, b, c});
    Subgroup h2(z6, 4, {c, a, b});
    const auto& e1 = h1.enumerate();
    const auto& e2 = h2.enumerate();
    REQUIRE(e1.size() == e2.size());
    for (std::size_t i = 0; i < e1.size(); ++i)
      CHECK(std::equal(e1.row(i).begin(), e1.row(i).end(), e2.row(i).begin()));
  }
}

TEST_CASE("dimension: exact order with log ratio") {
  auto z2 = GroupSpec::abelian({2});
  Subgroup diag(z2, 2, {tup(z2, {1, 1})});
  const auto d = diag.dimension();
  CHECK(d.order == 2);
  CHECK(d.delta == doctest::Approx(1.0).epsilon(1e-12));

  Subgroup full(z2, 3, {tup(z2, {1, 0, 0}), tup(z2, {0, 1, 0}), tup(z2, {0, 0, 1})});
  CHECK(full.dimension().order == 8);
  CHECK(full.dimension().delta == doctest::Approx(3.0).epsilon(1e-12));

  auto z4 = GroupSpec::abelian({4});
  Subgroup h4(z4, 2, {tup(z4, {1, 2})});
  CHECK(h4.dimension().order == 4);
  CHECK(h4.dimension().delta == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("distance_to_subgroup: examples and ball characterisation") {
  auto z2 = GroupSpec::abelian({2});
  Subgroup h(z2, 4, {tup(z2, {1, 1, 1, 1})});
  CHECK(h.distance_to(tup(z2, {0, 0, 0, 0})) == 0);
  CHECK(h.distance_to(tup(z2, {0, 1, 0, 1})) == 2);
  CHECK(h.distance_to(tup(z2, {1, 0, 0, 0})) == 1);

  // x in B(H,r) iff distance <= r, exhaustively at n = 4
  for (std::uint32_t v = 0; v < 16; ++v) {
    std::vector<std::uint8_t> c(4);
    for (int i = 0; i < 4; ++i) c[i] = std::uint8_t((v >> i) & 1);
    const TupleElement x = tup(z2, c);
    const std::size_t d = h.distance_to(x);
    for (std::size_t r = 0; r < 4; ++r) {
      // ball membership oracle: exists h0 in H with hamming(x,h0) <= r
      bool in_ball = false;
      const auto& els = h.enumerate();
      for (std::size_t ei = 0; ei < els.size(); ++ei)
        in_ball |= hamming(x, els.element(ei)) <= r;
      CHECK(in_ball == (d <= r));
    }
  }
}

TEST_CASE("feasibility_check: counting-bound examples") {
  auto z2 = GroupSpec::abelian({2});
  const auto a = feasibility_check(100, 0, 0, BigRat(1, 100), *z2);
  CHECK(a.feasible);

  const auto b = feasibility_check(100, 50, 1, BigRat(1, 20), *z2);
  CHECK(b.rhs_value == doctest::Approx(86.92).epsilon(1e-3));
  CHECK(b.feasible);

  const auto c = feasibility_check(100, 90, 20, BigRat(1, 20), *z2);
  CHECK_FALSE(c.feasible);

  CHECK_THROWS_AS(feasibility_check(10, 1, 11, BigRat(1, 20), *z2), InvalidArgument);
  CHECK_THROWS_AS(feasibility_check(10, 1, 2, BigRat(2), *z2), InvalidArgument);
}

TEST_CASE("group validation: broken tables rejected, axioms hold") {
  // non-associative latin square
  std::vector<std::vector<std::uint32_t>> bad = {
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  CHECK_THROWS_AS(GroupSpec::from_table(bad), InvalidArgument);

  CHECK_THROWS_AS(GroupSpec::abelian({}), InvalidArgument);
  CHECK_THROWS_AS(GroupSpec::abelian({1}), InvalidArgument);
  CHECK_THROWS_AS(GroupSpec::abelian({3, 5}), InvalidArgument);  // no divisibility
  CHECK_NOTHROW(GroupSpec::abelian({2, 4}));

  auto z24 = GroupSpec::abelian({2, 4});
  CHECK(z24->order() == 8);
  for (std::uint32_t a = 0; a < 8; ++a) {
    CHECK(z24->mul(a, z24->identity()) == a);
    CHECK(z24->mul(a, z24->inv(a)) == z24->identity());
    for (std::uint32_t b = 0; b < 8; ++b)
      for (std::uint32_t c = 0; c < 8; ++c)
        CHECK(z24->mul(z24->mul(a, b), c) == z24->mul(a, z24->mul(b, c)));
  }
}

TEST_CASE("json round trips for group, tuple, subgroup") {
  auto z24 = GroupSpec::abelian({2, 4});
  auto j = z24->to_json();
  CHECK(GroupSpec::from_json(j)->same_as(*z24));

  auto s3 = s3_group();
  CHECK(GroupSpec::from_json(s3->to_json())->same_as(*s3));

  const auto t = tup(z24, {3, 0, 7});
  CHECK(TupleElement::from_json(z24, t.to_json()) == t);

  Subgroup h(z24, 3, {t});
  const auto hj = h.to_json();
  const Subgroup h2 = Subgroup::from_json(z24, hj);
  CHECK(h2.ambient_n() == 3);
  CHECK(h2.generators().size() == 1);
  CHECK(h2.generators()[0] == t);
}
