#include <doctest.h>

#include <complex>

#include "rpp/bias.hpp"
#include "test_helpers.hpp"

using namespace rpp;

namespace {

TupleElement tup(const GroupPtr& g, std::vector<std::uint8_t> c) {
  return TupleElement(g, std::move(c));
}

// Independent oracle: literal character-sum definition via Character::eval,
// no Kahan, no DFT, no digit precomputation.
double naive_bias(const TupleMultiset& s) {
  Character chi(s.group_ptr(), s.width(),
                std::vector<std::uint8_t>(DigitShape::of(s.group(), s.width()).dims(), 0));
  double best = 0;
  while (chi.next()) {
    std::complex<double> acc{0, 0};
    for (std::size_t i = 0; i < s.distinct(); ++i)
      acc += double(s.multiplicity(i)) * chi.eval(s.element(i));
    best = std::max(best, std::abs(acc) / double(s.total()));
  }
  return best;
}

TupleMultiset random_multiset(const GroupPtr& g, std::size_t n, std::size_t items,
                              Rng& rng, bool symmetric) {
  TupleMultiset s(g, n);
  for (std::size_t i = 0; i < items; ++i) {
    const auto t = testutil::random_tuple(g, n, rng);
    const auto m = 1 + rng.below(3);
    s.add_row(t.coords(), m);
    if (symmetric) s.add_row(t.inverse().coords(), m);
  }
  s.finalize();
  return s;
}

TupleMultiset full_group_multiset(const GroupPtr& g, std::size_t n) {
  TupleMultiset s(g, n);
  std::vector<std::uint8_t> c(n, 0);
  while (true) {
    s.add_row(c);
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (std::uint32_t(c[i]) + 1 < g->order()) {
        ++c[i];
        break;
      }
      c[i] = 0;
    }
    if (i == n) break;
  }
  s.finalize();
  return s;
}

}  // namespace

TEST_CASE("measure_bias: spec examples") {
  auto z2 = GroupSpec::abelian({2});
  CHECK(measure_bias(full_group_multiset(z2, 2)) == doctest::Approx(0.0).epsilon(1e-12));

  TupleMultiset s(z2, 2);
  s.add_row(tup(z2, {0, 1}).coords());
  s.add_row(tup(z2, {1, 0}).coords());
  s.finalize();
  CHECK(measure_bias(s) == doctest::Approx(1.0).epsilon(1e-12));

  TupleMultiset s1(z2, 1);
  s1.add_row(tup(z2, {0}).coords());
  s1.add_row(tup(z2, {1}).coords());
  s1.finalize();
  CHECK(measure_bias(s1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("measure_bias: sweep, dft, and naive oracle agree") {
  Rng rng(314);
  auto z2 = GroupSpec::abelian({2});
  auto z3 = GroupSpec::abelian({3});
  auto z24 = GroupSpec::abelian({2, 4});
  for (int it = 0; it < 12; ++it) {
    for (const auto& g : {z2, z3, z24}) {
      const std::size_t n = 1 + rng.below(g->order() > 4 ? 2 : 3);
      const auto s = random_multiset(g, n, 3 + rng.below(20), rng, it % 2 == 0);
      const double want = naive_bias(s);
      CHECK(measure_bias_sweep(s) == doctest::Approx(want).epsilon(1e-11));
      CHECK(measure_bias_dft(s) == doctest::Approx(want).epsilon(1e-11));
    }
  }
}

TEST_CASE("construct_prime_field: exact bias values") {
  const auto s1 = construct_prime_field(5, 1);
  CHECK(s1.space.total() == 25);
  REQUIRE(s1.measured_bias.has_value());
  CHECK(*s1.measured_bias == doctest::Approx(0.0).epsilon(1e-12));

  const auto s2 = construct_prime_field(3, 2);
  CHECK(s2.space.total() == 9);
  CHECK(*s2.measured_bias == doctest::Approx(1.0 / 3).epsilon(1e-12));

  const auto s3 = construct_prime_field(5, 3);
  CHECK(*s3.measured_bias <= 2.0 / 5 + 1e-12);

  CHECK_THROWS_AS(construct_prime_field(6, 2), InvalidArgument);
}

TEST_CASE("construct_rounding: gated examples") {
  const auto a = construct_rounding(2, 2, BigRat(1, 2));
  CHECK(*a.measured_bias <= 0.5 + 1e-9);
  CHECK(a.meta.at("q").get<std::uint32_t>() == 67);

  const auto b = construct_rounding(4, 2, BigRat(1, 2));
  CHECK(*b.measured_bias <= 0.5 + 1e-9);

  const auto c = construct_rounding(3, 1, BigRat(1, 4));
  CHECK(*c.measured_bias <= 0.25 + 1e-9);
  CHECK(*c.measured_bias == doctest::Approx(naive_bias(c.space)).epsilon(1e-11));

  // beyond the sweep cap: space returned with the unverified flag
  const auto big = construct_rounding(2, 26, BigRat(1, 2));
  CHECK_FALSE(big.verified);
  CHECK(big.meta.value("unverified", false));
  CHECK(big.space.total() > 0);
}

TEST_CASE("quotient_lift: digit reduction in both framings") {
  auto z24 = GroupSpec::abelian({2, 4});

  // flat framing: Z4 rows of width 2 per coordinate
  auto z4 = GroupSpec::abelian({4});
  TupleMultiset flat(z4, 2);
  flat.add_row(tup(z4, {3, 2}).coords());
  flat.finalize();
  BiasedSpace fsp{std::move(flat), BigRat(1), Construction::explicit_tag,
                  false, std::nullopt, false, nlohmann::json::object()};
  const auto lifted = quotient_lift(fsp, z24);
  REQUIRE(lifted.space.distinct() == 1);
  // (3 mod 2, 2 mod 4) = (1,2), encoded 1 + 2*2 = 5
  CHECK(lifted.space.row(0)[0] == 5);

  // G0 framing: one coordinate of Z4^2
  auto z44 = GroupSpec::abelian({4, 4});
  TupleMultiset g0(z44, 1);
  g0.add_row(tup(z44, {std::uint8_t(3 + 4 * 2)}).coords());
  g0.finalize();
  BiasedSpace gsp{std::move(g0), BigRat(1), Construction::explicit_tag,
                  false, std::nullopt, false, nlohmann::json::object()};
  const auto lifted2 = quotient_lift(gsp, z24);
  CHECK(lifted2.space.row(0)[0] == 5);

  // identity lift for cyclic targets
  auto z2 = GroupSpec::abelian({2});
  TupleMultiset idm(z2, 3);
  idm.add_row(tup(z2, {1, 0, 1}).coords());
  idm.finalize();
  BiasedSpace isp{std::move(idm), BigRat(1), Construction::explicit_tag,
                  false, std::nullopt, false, nlohmann::json::object()};
  const auto lifted3 = quotient_lift(isp, z2);
  CHECK(lifted3.space.row(0)[0] == 1);
  CHECK(lifted3.space.row(0)[2] == 1);
}

TEST_CASE("quotient_lift: bias never increases (random spaces)") {
  Rng rng(2718);
  auto z24 = GroupSpec::abelian({2, 4});
  auto z44 = GroupSpec::abelian({4, 4});
  for (int it = 0; it < 20; ++it) {
    auto s0 = random_multiset(z44, 2, 4 + rng.below(12), rng, false);
    const double before = measure_bias(s0);
    BiasedSpace sp{std::move(s0), BigRat(1), Construction::explicit_tag,
                   false, before, true, nlohmann::json::object()};
    const auto lifted = quotient_lift(sp, z24);
    CHECK(measure_bias(lifted.space) <= before + 1e-9);
  }
}

TEST_CASE("symmetrize: involution and bias inequality") {
  auto z3 = GroupSpec::abelian({3});
  TupleMultiset one(z3, 1);
  one.add_row(tup(z3, {1}).coords());
  one.finalize();
  BiasedSpace sp{std::move(one), BigRat(1), Construction::explicit_tag,
                 false, std::nullopt, false, nlohmann::json::object()};
  const auto sym = symmetrize(sp);
  CHECK(sym.space.total() == 2);
  CHECK(sym.space.is_symmetric());

  // already-symmetric input doubles in size, bias unchanged
  const auto sym2 = symmetrize(sym);
  CHECK(sym2.space.total() == 4);
  CHECK(measure_bias(sym2.space) ==
        doctest::Approx(measure_bias(sym.space)).epsilon(1e-12));

  // random spaces over Z5^2: bias after <= before
  auto z5 = GroupSpec::abelian({5});
  Rng rng(555);
  for (int it = 0; it < 15; ++it) {
    auto s = random_multiset(z5, 2, 3 + rng.below(10), rng, false);
    const double before = measure_bias(s);
    BiasedSpace raw{std::move(s), BigRat(1), Construction::explicit_tag,
                    false, std::nullopt, false, nlohmann::json::object()};
    const auto after = symmetrize(raw);
    CHECK(after.space.is_symmetric());
    CHECK(measure_bias(after.space) <= before + 1e-9);
  }
}

TEST_CASE("construct_for_group: contract on the spec's example cells") {
  auto z2 = GroupSpec::abelian({2});
  const auto a = construct_for_group(z2, 4, BigRat(1, 2));
  REQUIRE(a.measured_bias.has_value());
  CHECK(*a.measured_bias <= 0.5 + 1e-9);
  CHECK(a.symmetric);
  CHECK(a.space.is_symmetric());
  CHECK(a.space.total() <= 2 * 7 * 7);  // 2*Q^2 with Q = smallest prime >= 6

  auto z3 = GroupSpec::abelian({3});
  const auto b = construct_for_group(z3, 2, BigRat(1, 4));
  CHECK(*b.measured_bias <= 0.25 + 1e-9);
  CHECK(b.space.total() <= 2 * 5 * 5);

  const auto c = construct_for_group(z3, 2, BigRat(3, 2));
  CHECK(c.space.total() == 1);
  CHECK(c.symmetric);
  CHECK(c.meta.contains("note"));
}

TEST_CASE("construct_for_group: deterministic output") {
  auto z24 = GroupSpec::abelian({2, 4});
  const auto a = construct_for_group(z24, 2, BigRat(1, 4));
  const auto b = construct_for_group(z24, 2, BigRat(1, 4));
  CHECK(a.to_json(std::uint64_t(1) << 22) == b.to_json(std::uint64_t(1) << 22));
}

TEST_CASE("AMN convention remark: char bias <= L * linf bias") {
  Rng rng(31337);
  auto z4 = GroupSpec::abelian({4});
  auto z6 = GroupSpec::abelian({6});
  for (const auto& g : {z4, z6}) {
    for (int it = 0; it < 8; ++it) {
      const auto s = random_multiset(g, 2, 4 + rng.below(10), rng, false);
      const double linf = measure_bias_linf(s);
      CHECK(measure_bias(s) <= double(g->order()) * linf + 1e-9);
    }
  }
}

TEST_CASE("biased space json round trip preserves the multiset") {
  auto z3 = GroupSpec::abelian({3});
  Rng rng(8);
  const auto s = random_multiset(z3, 2, 6, rng, true);
  BiasedSpace sp{s, BigRat(1, 3), Construction::explicit_tag, true,
                 measure_bias(s), true, nlohmann::json::object()};
  const auto j = sp.to_json();
  const auto back = BiasedSpace::from_json(z3, j);
  CHECK(back.space.total() == sp.space.total());
  CHECK(back.space.distinct() == sp.space.distinct());
  CHECK(back.to_json() == j);
}
