#include <immintrin.h>

#include "rpp/kernels.hpp"

// AVX2 lane. Every kernel here computes exactly what the scalar reference
// computes (pure integer math), verified by the equivalence tests.
namespace rpp::kernels {
namespace {

std::size_t avx2_count_ne(const std::uint8_t* p, std::size_t n, std::uint8_t v) {
  std::size_t c = 0, i = 0;
  const __m256i vv = _mm256_set1_epi8(char(v));
  for (; i + 32 <= n; i += 32) {
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
    const unsigned eq = unsigned(_mm256_movemask_epi8(_mm256_cmpeq_epi8(x, vv)));
    c += 32u - unsigned(__builtin_popcount(eq));
  }
  for (; i < n; ++i) c += (p[i] != v);
  return c;
}

std::size_t avx2_count_diff(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t c = 0, i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const unsigned eq = unsigned(_mm256_movemask_epi8(_mm256_cmpeq_epi8(x, y)));
    c += 32u - unsigned(__builtin_popcount(eq));
  }
  for (; i < n; ++i) c += (a[i] != b[i]);
  return c;
}

void avx2_addmod(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b,
                 std::size_t n, std::uint8_t d) {
  if (d > 128 || d == 0) {  // u8 sums would wrap; take the safe path
    detail::scalar_ops.addmod_u8(dst, a, b, n, d);
    return;
  }
  const __m256i dv = _mm256_set1_epi8(char(d));
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const __m256i s = _mm256_add_epi8(x, y);
    // s >= d  <=>  max_epu8(s, d) == s
    const __m256i ge = _mm256_cmpeq_epi8(_mm256_max_epu8(s, dv), s);
    const __m256i r = _mm256_sub_epi8(s, _mm256_and_si256(ge, dv));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), r);
  }
  for (; i < n; ++i) {
    unsigned s = unsigned(a[i]) + unsigned(b[i]);
    dst[i] = std::uint8_t(s >= d ? s - d : s);
  }
}

// floor(t/q) for t < 2^26, q in [17, 2^13): multiply by floor(2^36/q), shift,
// then a single +1 correction. The shift budget keeps the multiplier in 32
// bits so _mm256_mul_epu32 applies.
struct DivQ {
  __m256i mul, q;
  std::uint32_t qs;
  explicit DivQ(std::uint32_t qq)
      : mul(_mm256_set1_epi64x(std::int64_t((std::uint64_t(1) << 36) / qq))),
        q(_mm256_set1_epi64x(qq)),
        qs(qq) {}
  // returns {quot, rem}; the multiplier undershoots by at most 1, fixed up below
  void divmod(__m256i t, __m256i& quot, __m256i& rem) const {
    __m256i qh = _mm256_srli_epi64(_mm256_mul_epu32(t, mul), 36);
    __m256i r = _mm256_sub_epi64(t, _mm256_mul_epu32(qh, q));
    const __m256i over = _mm256_cmpgt_epi64(_mm256_add_epi64(r, _mm256_set1_epi64x(1)), q);
    qh = _mm256_sub_epi64(qh, over);  // mask is all-ones, so this is +1
    r = _mm256_sub_epi64(r, _mm256_and_si256(over, q));
    quot = qh;
    rem = r;
  }
};

void avx2_amn(std::uint32_t* idx, std::uint32_t q, std::uint32_t m,
              const std::uint32_t* powers, std::size_t nprime,
              const std::uint32_t* places) {
  if (q < 17) {
    detail::scalar_ops.amn_round_index(idx, q, m, powers, nprime, places);
    return;
  }
  const DivQ dq(q);
  const __m256i mv = _mm256_set1_epi64x(m);
  std::uint32_t y = 0;
  for (; y + 4 <= q; y += 4) {
    const __m256i yv = _mm256_set_epi64x(y + 3, y + 2, y + 1, y);
    __m256i acc = _mm256_setzero_si256();
    for (std::size_t i = 0; i < nprime; ++i) {
      const __m256i t = _mm256_mul_epu32(yv, _mm256_set1_epi64x(powers[i]));
      __m256i quot, rem;
      dq.divmod(t, quot, rem);
      const __m256i u = _mm256_mul_epu32(rem, mv);
      __m256i dquot, drem;
      dq.divmod(u, dquot, drem);
      acc = _mm256_add_epi64(acc, _mm256_mul_epu32(dquot, _mm256_set1_epi64x(places[i])));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    idx[y + 0] = std::uint32_t(lanes[0]);
    idx[y + 1] = std::uint32_t(lanes[1]);
    idx[y + 2] = std::uint32_t(lanes[2]);
    idx[y + 3] = std::uint32_t(lanes[3]);
  }
  if (y < q) {
    // scalar tail on the same formula
    for (; y < q; ++y) {
      std::uint32_t acc = 0;
      for (std::size_t i = 0; i < nprime; ++i) {
        const std::uint64_t t = (std::uint64_t(y) * powers[i]) % q;
        acc += std::uint32_t(t * m / q) * places[i];
      }
      idx[y] = acc;
    }
  }
}

}  // namespace

namespace detail {
const Ops avx2_ops = {avx2_count_ne, avx2_count_diff, avx2_addmod, avx2_amn};
}

}  // namespace rpp::kernels
