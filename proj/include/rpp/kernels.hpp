#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

// Data-parallel inner loops, provided as scalar reference kernels plus an
// AVX2 variant selected at runtime (cpuid, overridable via RPP_KERNELS=scalar
// or =avx2). All kernels are pure integer arithmetic, so the two backends
// must agree bit for bit; tests enforce exact equality on random inputs.
namespace rpp::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name();
// Test hook. Throws if the requested backend is unavailable on this CPU.
void force_backend(std::optional<Backend> b);
bool avx2_available();

// |{i : p[i] != v}| — tuple weight against the identity byte.
std::size_t count_ne_u8(const std::uint8_t* p, std::size_t n, std::uint8_t v);

// |{i : a[i] != b[i]}| — Hamming distance on coordinate arrays.
std::size_t count_diff_u8(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);

// dst[i] = (a[i] + b[i]) mod d, inputs already reduced mod d. Cyclic-group
// coordinatewise product.
void addmod_u8(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b,
               std::size_t n, std::uint8_t d);

// Rounded geometric-progression row indices: for y in [0,q),
//   idx[y] = sum_i floor(((y * powers[i]) mod q) * m / q) * places[i].
// Requires q < 2^13, m <= 256, and sum_i (m-1)*places[i] < 2^32.
void amn_round_index(std::uint32_t* idx, std::uint32_t q, std::uint32_t m,
                     const std::uint32_t* powers, std::size_t nprime,
                     const std::uint32_t* places);

namespace detail {
struct Ops {
  std::size_t (*count_ne_u8)(const std::uint8_t*, std::size_t, std::uint8_t);
  std::size_t (*count_diff_u8)(const std::uint8_t*, const std::uint8_t*, std::size_t);
  void (*addmod_u8)(std::uint8_t*, const std::uint8_t*, const std::uint8_t*,
                    std::size_t, std::uint8_t);
  void (*amn_round_index)(std::uint32_t*, std::uint32_t, std::uint32_t,
                          const std::uint32_t*, std::size_t, const std::uint32_t*);
};
extern const Ops scalar_ops;
extern const Ops avx2_ops;  // defined only when the AVX2 TU is compiled in
}  // namespace detail

}  // namespace rpp::kernels
