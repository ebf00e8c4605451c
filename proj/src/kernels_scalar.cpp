#include "glowf/kernels.hpp"

#include <bit>
#include <cstddef>

namespace glowf::kernels::scalar {

void axpy_mod(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t coeff,
              unsigned q) {
    if (coeff == 0) return;
    const std::size_t n = dst.size();
    if (q == 2) {
        for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] = static_cast<std::uint8_t>((dst[i] + unsigned(coeff) * src[i]) % q);
    }
}

std::uint8_t dot_mod(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, unsigned q) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += unsigned(a[i]) * b[i];
    return static_cast<std::uint8_t>(acc % q);
}

void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

unsigned and_parity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc ^= a[i] & b[i];
    return static_cast<unsigned>(std::popcount(acc) & 1);
}

void walsh_hadamard(std::span<std::int32_t> data) {
    const std::size_t n = data.size();
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const std::int32_t x = data[j];
                const std::int32_t y = data[j + h];
                data[j] = x + y;
                data[j + h] = x - y;
            }
        }
    }
}

}  // namespace glowf::kernels::scalar
