#pragma once

// Data-parallel inner loops shared by the linear-algebra and decoding code.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2 implementation. The dispatching entry points in glowf::kernels pick
// the widest backend the running CPU supports; the per-backend namespaces are
// exposed so tests can check the variants against each other.

#include <cstdint>
#include <span>

namespace glowf::kernels {

enum class Backend { Scalar, Avx2 };

const char* backend_name(Backend b) noexcept;
bool backend_available(Backend b) noexcept;
Backend active_backend() noexcept;

/// Forces a backend. Throws std::invalid_argument if the CPU or the build lacks it.
void set_backend(Backend b);

/// dst[i] = (dst[i] + coeff * src[i]) mod q. Entries and coeff must be in [0, q), q < 256.
void axpy_mod(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t coeff,
              unsigned q);

/// Sum of a[i] * b[i] mod q.
std::uint8_t dot_mod(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, unsigned q);

/// dst ^= src, word-wise.
void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);

/// Parity of popcount(a & b): the GF(2) inner product of two packed vectors.
unsigned and_parity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// In-place unnormalized Walsh-Hadamard transform; size must be a power of two.
void walsh_hadamard(std::span<std::int32_t> data);

namespace scalar {
void axpy_mod(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t coeff,
              unsigned q);
std::uint8_t dot_mod(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, unsigned q);
void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
unsigned and_parity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
void walsh_hadamard(std::span<std::int32_t> data);
}  // namespace scalar

namespace avx2 {
// Only callable when backend_available(Backend::Avx2).
void axpy_mod(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t coeff,
              unsigned q);
std::uint8_t dot_mod(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, unsigned q);
void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src);
unsigned and_parity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);
void walsh_hadamard(std::span<std::int32_t> data);
}  // namespace avx2

}  // namespace glowf::kernels
