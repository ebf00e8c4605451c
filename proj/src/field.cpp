#include "glowf/field.hpp"

#include <algorithm>
#include <string>

namespace glowf {

bool is_prime(unsigned q) noexcept {
    if (q < 2) return false;
    for (unsigned d = 2; d * d <= q; ++d) {
        if (q % d == 0) return false;
    }
    return true;
}

Field::Field(unsigned q) : q_(q) {
    if (q >= 256 || !is_prime(q)) {
        throw std::invalid_argument("field order must be a prime below 256, got " + std::to_string(q));
    }
    for (unsigned a = 1; a < q; ++a) {
        for (unsigned b = 1; b < q; ++b) {
            if ((a * b) % q == 1) {
                inverse_[a] = static_cast<Scalar>(b);
                break;
            }
        }
    }
}

Scalar Field::inv(Scalar a) const {
    if (a == 0 || a >= q_) throw std::domain_error("no inverse for " + std::to_string(a));
    return inverse_[a];
}

Vector Vector::unit(std::size_t n, std::size_t i) {
    Vector v(n);
    v.entries.at(i) = 1;
    return v;
}

bool Vector::is_zero() const noexcept {
    return std::all_of(entries.begin(), entries.end(), [](Scalar s) { return s == 0; });
}

std::size_t Vector::weight() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](Scalar s) { return s != 0; }));
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(std::span<const Vector> vectors, std::size_t cols) {
    Matrix m(vectors.size(), cols);
    for (std::size_t r = 0; r < vectors.size(); ++r) {
        if (vectors[r].size() != cols) throw std::invalid_argument("vector length mismatch");
        std::copy(vectors[r].entries.begin(), vectors[r].entries.end(), m.row(r).begin());
    }
    return m;
}

Matrix Matrix::from_columns(std::span<const Vector> vectors, std::size_t rows) {
    Matrix m(rows, vectors.size());
    for (std::size_t c = 0; c < vectors.size(); ++c) {
        if (vectors[c].size() != rows) throw std::invalid_argument("vector length mismatch");
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = vectors[c][r];
    }
    return m;
}

Vector Matrix::row_vector(std::size_t r) const {
    auto s = row(r);
    return Vector(std::vector<Scalar>(s.begin(), s.end()));
}

Vector Matrix::column(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

bool Matrix::is_identity() const noexcept {
    if (!is_square()) return false;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            if ((*this)(r, c) != (r == c ? 1 : 0)) return false;
        }
    }
    return true;
}

std::uint64_t RandomSource::mix(std::uint64_t x) noexcept {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

RandomSource RandomSource::split(std::uint64_t index) const {
    return RandomSource(mix(seed_ ^ mix(index + 0x632be59bd9b4e019ull)));
}

unsigned RandomSource::uniform(unsigned bound) {
    std::uniform_int_distribution<unsigned> dist(0, bound - 1);
    return dist(engine_);
}

double RandomSource::uniform_real() {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    return dist(engine_);
}

Vector random_vector(const Field& field, std::size_t n, RandomSource& rng) {
    Vector v(n);
    for (auto& e : v.entries) e = static_cast<Scalar>(rng.uniform(field.q()));
    return v;
}

Matrix random_matrix(const Field& field, std::size_t rows, std::size_t cols, RandomSource& rng) {
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (auto& e : m.row(r)) e = static_cast<Scalar>(rng.uniform(field.q()));
    }
    return m;
}

std::vector<std::uint64_t> pack_bits(const Vector& v) {
    std::vector<std::uint64_t> words((v.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] & 1) words[i / 64] |= std::uint64_t{1} << (i % 64);
    }
    return words;
}

Vector unpack_bits(std::span<const std::uint64_t> words, std::size_t n) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Scalar>((words[i / 64] >> (i % 64)) & 1);
    return v;
}

}  // namespace glowf
