#include "rpp/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace rpp::kernels {

namespace {

std::size_t scalar_count_ne(const std::uint8_t* p, std::size_t n, std::uint8_t v) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += (p[i] != v);
  return c;
}

std::size_t scalar_count_diff(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += (a[i] != b[i]);
  return c;
}

void scalar_addmod(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b,
                   std::size_t n, std::uint8_t d) {
  const unsigned dd = d;
  for (std::size_t i = 0; i < n; ++i) {
    unsigned s = unsigned(a[i]) + unsigned(b[i]);
    dst[i] = std::uint8_t(s >= dd ? s - dd : s);
  }
}

void scalar_amn(std::uint32_t* idx, std::uint32_t q, std::uint32_t m,
                const std::uint32_t* powers, std::size_t nprime,
                const std::uint32_t* places) {
  for (std::uint32_t y = 0; y < q; ++y) {
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i < nprime; ++i) {
      const std::uint64_t t = (std::uint64_t(y) * powers[i]) % q;
      const std::uint32_t digit = std::uint32_t(t * m / q);
      acc += digit * places[i];
    }
    idx[y] = acc;
  }
}

}  // namespace

namespace detail {
const Ops scalar_ops = {scalar_count_ne, scalar_count_diff, scalar_addmod, scalar_amn};
}

namespace {

const detail::Ops* select_default() {
#ifdef RPP_HAVE_AVX2_TU
  if (const char* env = std::getenv("RPP_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &detail::scalar_ops;
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) return &detail::avx2_ops;
  }
  if (avx2_available()) return &detail::avx2_ops;
#endif
  return &detail::scalar_ops;
}

const detail::Ops*& current() {
  static const detail::Ops* ops = select_default();
  return ops;
}

}  // namespace

bool avx2_available() {
#if defined(RPP_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend active_backend() {
  return current() == &detail::scalar_ops ? Backend::scalar : Backend::avx2;
}

const char* backend_name() {
  return active_backend() == Backend::scalar ? "scalar" : "avx2";
}

void force_backend(std::optional<Backend> b) {
  if (!b) {
    current() = select_default();
    return;
  }
  if (*b == Backend::scalar) {
    current() = &detail::scalar_ops;
    return;
  }
#ifdef RPP_HAVE_AVX2_TU
  if (avx2_available()) {
    current() = &detail::avx2_ops;
    return;
  }
#endif
  throw std::runtime_error("avx2 backend unavailable on this CPU/build");
}

std::size_t count_ne_u8(const std::uint8_t* p, std::size_t n, std::uint8_t v) {
  return current()->count_ne_u8(p, n, v);
}
std::size_t count_diff_u8(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  return current()->count_diff_u8(a, b, n);
}
void addmod_u8(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b,
               std::size_t n, std::uint8_t d) {
  current()->addmod_u8(dst, a, b, n, d);
}
void amn_round_index(std::uint32_t* idx, std::uint32_t q, std::uint32_t m,
                     const std::uint32_t* powers, std::size_t nprime,
                     const std::uint32_t* places) {
  current()->amn_round_index(idx, q, m, powers, nprime, places);
}

}  // namespace rpp::kernels
