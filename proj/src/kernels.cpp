#include "glowf/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace glowf::kernels {

namespace {

struct Table {
    Backend backend;
    void (*axpy_mod)(std::span<std::uint8_t>, std::span<const std::uint8_t>, std::uint8_t, unsigned);
    std::uint8_t (*dot_mod)(std::span<const std::uint8_t>, std::span<const std::uint8_t>, unsigned);
    void (*xor_into)(std::span<std::uint64_t>, std::span<const std::uint64_t>);
    unsigned (*and_parity)(std::span<const std::uint64_t>, std::span<const std::uint64_t>);
    void (*walsh_hadamard)(std::span<std::int32_t>);
};

constexpr Table kScalar{Backend::Scalar, scalar::axpy_mod, scalar::dot_mod, scalar::xor_into,
                        scalar::and_parity, scalar::walsh_hadamard};

#if GLOWF_HAVE_AVX2_KERNELS
constexpr Table kAvx2{Backend::Avx2, avx2::axpy_mod, avx2::dot_mod, avx2::xor_into,
                      avx2::and_parity, avx2::walsh_hadamard};
#endif

bool cpu_has_avx2() noexcept {
#if GLOWF_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Table* detect() noexcept {
#if GLOWF_HAVE_AVX2_KERNELS
    if (cpu_has_avx2()) return &kAvx2;
#endif
    return &kScalar;
}

std::atomic<const Table*>& active() noexcept {
    static std::atomic<const Table*> table{detect()};
    return table;
}

inline const Table& table() noexcept { return *active().load(std::memory_order_relaxed); }

}  // namespace

const char* backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

bool backend_available(Backend b) noexcept {
    switch (b) {
        case Backend::Scalar: return true;
        case Backend::Avx2: return cpu_has_avx2();
    }
    return false;
}

Backend active_backend() noexcept { return table().backend; }

void set_backend(Backend b) {
    if (!backend_available(b)) {
        throw std::invalid_argument(std::string("kernel backend not available: ") + backend_name(b));
    }
#if GLOWF_HAVE_AVX2_KERNELS
    active().store(b == Backend::Avx2 ? &kAvx2 : &kScalar);
#else
    active().store(&kScalar);
#endif
}

void axpy_mod(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t coeff,
              unsigned q) {
    table().axpy_mod(dst, src, coeff, q);
}

std::uint8_t dot_mod(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, unsigned q) {
    return table().dot_mod(a, b, q);
}

void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
    table().xor_into(dst, src);
}

unsigned and_parity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    return table().and_parity(a, b);
}

void walsh_hadamard(std::span<std::int32_t> data) { table().walsh_hadamard(data); }

}  // namespace glowf::kernels
