#pragma once

// Prime-field scalars, dense vectors and matrices, and the seeded random stream.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace glowf {

using Scalar = std::uint8_t;

struct SingularMatrix : std::domain_error {
    using std::domain_error::domain_error;
};

struct CapExceeded : std::length_error {
    using std::length_error::length_error;
};

/// F_q for a prime q < 256. Arithmetic assumes operands already lie in [0, q).
class Field {
public:
    explicit Field(unsigned q);

    unsigned q() const noexcept { return q_; }
    bool is_binary() const noexcept { return q_ == 2; }

    Scalar add(Scalar a, Scalar b) const noexcept {
        const unsigned s = unsigned(a) + b;
        return static_cast<Scalar>(s >= q_ ? s - q_ : s);
    }
    Scalar sub(Scalar a, Scalar b) const noexcept {
        return static_cast<Scalar>(a >= b ? a - b : a + q_ - b);
    }
    Scalar neg(Scalar a) const noexcept { return static_cast<Scalar>(a == 0 ? 0 : q_ - a); }
    Scalar mul(Scalar a, Scalar b) const noexcept {
        return static_cast<Scalar>((unsigned(a) * b) % q_);
    }
    /// Multiplicative inverse; a must be nonzero.
    Scalar inv(Scalar a) const;

    bool operator==(const Field& other) const noexcept { return q_ == other.q_; }

private:
    unsigned q_;
    std::array<Scalar, 256> inverse_{};
};

bool is_prime(unsigned q) noexcept;

/// Vector over F_q. Ordering is lexicographic with index 0 most significant.
struct Vector {
    std::vector<Scalar> entries;

    Vector() = default;
    explicit Vector(std::size_t n) : entries(n, 0) {}
    explicit Vector(std::vector<Scalar> e) : entries(std::move(e)) {}
    Vector(std::initializer_list<Scalar> e) : entries(e) {}

    static Vector unit(std::size_t n, std::size_t i);

    std::size_t size() const noexcept { return entries.size(); }
    Scalar& operator[](std::size_t i) { return entries[i]; }
    Scalar operator[](std::size_t i) const { return entries[i]; }
    std::span<Scalar> span() noexcept { return entries; }
    std::span<const Scalar> span() const noexcept { return entries; }

    bool is_zero() const noexcept;
    std::size_t weight() const noexcept;

    auto operator<=>(const Vector&) const = default;
};

/// Dense row-major matrix over F_q.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
    Matrix(std::initializer_list<std::initializer_list<Scalar>> rows);

    static Matrix identity(std::size_t n);
    /// Matrix whose i-th row is vectors[i].
    static Matrix from_rows(std::span<const Vector> vectors, std::size_t cols);
    /// Matrix whose i-th column is vectors[i].
    static Matrix from_columns(std::span<const Vector> vectors, std::size_t rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Scalar operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<Scalar> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Scalar> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    Vector row_vector(std::size_t r) const;
    Vector column(std::size_t c) const;

    bool is_identity() const noexcept;

    std::span<const Scalar> data() const noexcept { return data_; }

    auto operator<=>(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

/// Deterministic random stream. Substreams derived with split() depend only on
/// the root seed and the index, never on how much of the parent was consumed.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }
    RandomSource split(std::uint64_t index) const;

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform integer in [0, bound).
    unsigned uniform(unsigned bound);
    /// Uniform double in [0, 1).
    double uniform_real();

    std::mt19937_64& engine() noexcept { return engine_; }

    static std::uint64_t mix(std::uint64_t x) noexcept;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

Vector random_vector(const Field& field, std::size_t n, RandomSource& rng);
Matrix random_matrix(const Field& field, std::size_t rows, std::size_t cols, RandomSource& rng);

/// GF(2) vector packed 64 entries per word, entry i at bit (i % 64) of word i / 64.
std::vector<std::uint64_t> pack_bits(const Vector& v);
Vector unpack_bits(std::span<const std::uint64_t> words, std::size_t n);

}  // namespace glowf
