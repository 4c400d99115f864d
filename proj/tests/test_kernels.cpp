#include <doctest.h>

#include <string>
#include <vector>

#include "rpp/kernels.hpp"
#include "rpp/rng.hpp"

using namespace rpp;

namespace {

// Runs fn under both backends (when AVX2 exists) and checks agreement.
template <class Fn>
void with_both_backends(Fn&& fn) {
  kernels::force_backend(kernels::Backend::scalar);
  fn();
  if (kernels::avx2_available()) {
    kernels::force_backend(kernels::Backend::avx2);
    fn();
  }
  kernels::force_backend(std::nullopt);
}

}  // namespace

TEST_CASE("count kernels: scalar and avx2 agree bit for bit") {
  if (!kernels::avx2_available()) return;
  Rng rng(12345);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 1 + rng.below(300);
    std::vector<std::uint8_t> a(n), b(n);
    for (auto& v : a) v = std::uint8_t(rng.below(7));
    for (auto& v : b) v = std::uint8_t(rng.below(7));
    const std::uint8_t id = std::uint8_t(rng.below(7));

    kernels::force_backend(kernels::Backend::scalar);
    const auto ne_s = kernels::count_ne_u8(a.data(), n, id);
    const auto df_s = kernels::count_diff_u8(a.data(), b.data(), n);
    kernels::force_backend(kernels::Backend::avx2);
    CHECK(kernels::count_ne_u8(a.data(), n, id) == ne_s);
    CHECK(kernels::count_diff_u8(a.data(), b.data(), n) == df_s);
  }
  kernels::force_backend(std::nullopt);
}

TEST_CASE("addmod kernel matches scalar for all moduli classes") {
  if (!kernels::avx2_available()) return;
  Rng rng(777);
  for (std::uint32_t d : {2u, 3u, 5u, 6u, 17u, 127u, 128u, 200u, 251u}) {
    const std::size_t n = 97;
    std::vector<std::uint8_t> a(n), b(n), r1(n), r2(n);
    for (auto& v : a) v = std::uint8_t(rng.below(d));
    for (auto& v : b) v = std::uint8_t(rng.below(d));
    kernels::force_backend(kernels::Backend::scalar);
    kernels::addmod_u8(r1.data(), a.data(), b.data(), n, std::uint8_t(d));
    kernels::force_backend(kernels::Backend::avx2);
    kernels::addmod_u8(r2.data(), a.data(), b.data(), n, std::uint8_t(d));
    CHECK(r1 == r2);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(r1[i] == std::uint8_t((unsigned(a[i]) + b[i]) % d));
  }
  kernels::force_backend(std::nullopt);
}

TEST_CASE("amn_round_index: both backends reproduce the direct formula") {
  Rng rng(99);
  for (int it = 0; it < 40; ++it) {
    const std::uint32_t qs[] = {17, 19, 67, 257, 1543, 6151};
    const std::uint32_t q = qs[rng.below(6)];
    const std::uint32_t m = 2 + std::uint32_t(rng.below(7));
    const std::size_t np = 1 + rng.below(12);
    std::vector<std::uint32_t> powers(np), places(np);
    std::uint32_t pl = 1;
    for (std::size_t i = np; i-- > 0;) {
      places[i] = pl;
      pl *= m;
    }
    for (auto& p : powers) p = std::uint32_t(rng.below(q));

    std::vector<std::uint32_t> want(q);
    for (std::uint32_t y = 0; y < q; ++y) {
      std::uint32_t acc = 0;
      for (std::size_t i = 0; i < np; ++i) {
        const std::uint64_t t = (std::uint64_t(y) * powers[i]) % q;
        acc += std::uint32_t(t * m / q) * places[i];
      }
      want[y] = acc;
    }
    with_both_backends([&] {
      std::vector<std::uint32_t> got(q);
      kernels::amn_round_index(got.data(), q, m, powers.data(), np, places.data());
      CHECK(got == want);
    });
  }
}

TEST_CASE("backend dispatch reports a name") {
  CHECK((std::string(kernels::backend_name()) == "scalar" ||
         std::string(kernels::backend_name()) == "avx2"));
}
