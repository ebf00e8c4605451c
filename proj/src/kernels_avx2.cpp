// Compiled with -mavx2. Nothing here may run before the dispatcher has
// confirmed AVX2 support on the host CPU.

#include "glowf/kernels.hpp"

#include <immintrin.h>

#include <bit>
#include <cstddef>

namespace glowf::kernels::avx2 {

namespace {

// r in [0, 2q) -> r mod q. When r < q the subtraction wraps and min keeps r.
inline __m256i conditional_subtract(__m256i r, __m256i q16) {
    return _mm256_min_epu16(r, _mm256_sub_epi16(r, q16));
}

}  // namespace

void axpy_mod(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t coeff,
              unsigned q) {
    if (coeff == 0) return;
    const std::size_t n = dst.size();
    std::size_t i = 0;
    if (q == 2) {
        for (; i + 32 <= n; i += 32) {
            auto* d = reinterpret_cast<__m256i*>(dst.data() + i);
            const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src.data() + i));
            _mm256_storeu_si256(d, _mm256_xor_si256(_mm256_loadu_si256(d), s));
        }
        for (; i < n; ++i) dst[i] ^= src[i];
        return;
    }

    // x = d + c*s < 2^16; Barrett with magic = floor(2^16 / q) leaves x - t*q in [0, 2q).
    const __m256i c16 = _mm256_set1_epi16(static_cast<short>(coeff));
    const __m256i q16 = _mm256_set1_epi16(static_cast<short>(q));
    const __m256i magic = _mm256_set1_epi16(static_cast<short>(65536u / q));
    for (; i + 16 <= n; i += 16) {
        const __m128i d8 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(dst.data() + i));
        const __m128i s8 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src.data() + i));
        const __m256i d = _mm256_cvtepu8_epi16(d8);
        const __m256i s = _mm256_cvtepu8_epi16(s8);
        const __m256i x = _mm256_add_epi16(d, _mm256_mullo_epi16(s, c16));
        const __m256i t = _mm256_mulhi_epu16(x, magic);
        __m256i r = _mm256_sub_epi16(x, _mm256_mullo_epi16(t, q16));
        r = conditional_subtract(r, q16);
        const __m128i lo = _mm256_castsi256_si128(r);
        const __m128i hi = _mm256_extracti128_si256(r, 1);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(dst.data() + i), _mm_packus_epi16(lo, hi));
    }
    for (; i < n; ++i) {
        dst[i] = static_cast<std::uint8_t>((dst[i] + unsigned(coeff) * src[i]) % q);
    }
}

std::uint8_t dot_mod(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, unsigned q) {
    const std::size_t n = a.size();
    std::uint64_t total = 0;
    std::size_t i = 0;
    // Each madd lane gains at most 2*255*255 per step; flush well before int32 overflow.
    constexpr std::size_t kFlushSteps = 4096;
    while (i + 16 <= n) {
        __m256i acc = _mm256_setzero_si256();
        for (std::size_t steps = 0; steps < kFlushSteps && i + 16 <= n; ++steps, i += 16) {
            const __m256i x = _mm256_cvtepu8_epi16(
                _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.data() + i)));
            const __m256i y = _mm256_cvtepu8_epi16(
                _mm_loadu_si128(reinterpret_cast<const __m128i*>(b.data() + i)));
            acc = _mm256_add_epi32(acc, _mm256_madd_epi16(x, y));
        }
        alignas(32) std::uint32_t lanes[8];
        _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
        for (std::uint32_t lane : lanes) total += lane;
    }
    for (; i < n; ++i) total += unsigned(a[i]) * b[i];
    return static_cast<std::uint8_t>(total % q);
}

void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
    const std::size_t n = dst.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        auto* d = reinterpret_cast<__m256i*>(dst.data() + i);
        const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src.data() + i));
        _mm256_storeu_si256(d, _mm256_xor_si256(_mm256_loadu_si256(d), s));
    }
    for (; i < n; ++i) dst[i] ^= src[i];
}

unsigned and_parity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    __m256i acc = _mm256_setzero_si256();
    for (; i + 4 <= n; i += 4) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
        const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
        acc = _mm256_xor_si256(acc, _mm256_and_si256(x, y));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t folded = lanes[0] ^ lanes[1] ^ lanes[2] ^ lanes[3];
    for (; i < n; ++i) folded ^= a[i] & b[i];
    return static_cast<unsigned>(std::popcount(folded) & 1);
}

void walsh_hadamard(std::span<std::int32_t> data) {
    const std::size_t n = data.size();
    std::int32_t* p = data.data();
    std::size_t h = 1;
    // Strides below one register width stay scalar.
    for (; h < n && h < 8; h <<= 1) {
        for (std::size_t i = 0; i < n; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const std::int32_t x = p[j];
                const std::int32_t y = p[j + h];
                p[j] = x + y;
                p[j + h] = x - y;
            }
        }
    }
    for (; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += 2 * h) {
            for (std::size_t j = i; j < i + h; j += 8) {
                auto* lo = reinterpret_cast<__m256i*>(p + j);
                auto* hi = reinterpret_cast<__m256i*>(p + j + h);
                const __m256i x = _mm256_loadu_si256(lo);
                const __m256i y = _mm256_loadu_si256(hi);
                _mm256_storeu_si256(lo, _mm256_add_epi32(x, y));
                _mm256_storeu_si256(hi, _mm256_sub_epi32(x, y));
            }
        }
    }
}

}  // namespace glowf::kernels::avx2
