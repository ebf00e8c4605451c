#pragma once

// Dense linear algebra over F_q. Elimination runs on packed 64-bit words when
// q = 2 and on byte rows otherwise; both paths go through glowf::kernels.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "glowf/field.hpp"

namespace glowf {

/// Throws std::invalid_argument on length mismatch.
Scalar inner_product(const Field& field, const Vector& a, const Vector& b);

Vector multiply(const Field& field, const Matrix& m, const Vector& v);
Matrix multiply(const Field& field, const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);
Scalar trace(const Field& field, const Matrix& m);

std::size_t rank(const Field& field, const Matrix& m);
/// Rank of the span of `vectors`, each of length n.
std::size_t rank_of(const Field& field, std::span<const Vector> vectors, std::size_t n);
bool is_invertible(const Field& field, const Matrix& m);

/// Gauss-Jordan inverse; std::nullopt when singular. Throws on non-square input.
std::optional<Matrix> inverse(const Field& field, const Matrix& m);

enum class SolveStatus { Unique, NoSolution, Underdetermined };

struct SolveResult {
    SolveStatus status;
    Matrix solution;  // meaningful only when status == Unique
};

/// Finds the n x n matrix X with X * constraints.row(i) = targets.row(i) for
/// every i. Inconsistency is reported before rank deficiency.
SolveResult solve_linear(const Field& field, const Matrix& constraints, const Matrix& targets);

/// Uniform element of GL_n(F_q) by rejection. `attempts`, when given,
/// receives the number of uniform matrices drawn.
Matrix random_invertible(const Field& field, std::size_t n, RandomSource& rng,
                         std::size_t* attempts = nullptr);

/// Uniform element of { A in GL_n : A u = w }. Throws std::invalid_argument on zero input.
Matrix random_invertible_mapping(const Field& field, const Vector& u, const Vector& w,
                                 RandomSource& rng);

/// prod_{i=1..n} (1 - q^-i): probability a uniform n x n matrix is invertible.
double invertible_probability(unsigned q, std::size_t n);
/// The n -> infinity limit of invertible_probability.
double invertible_probability_limit(unsigned q);

/// |GL_n(F_q)| = prod_{i<n} (q^n - q^i), exact while it fits in 64 bits.
std::uint64_t general_linear_order(unsigned q, std::size_t n);

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

/// Enumeration cap; GLOWF_ENUMERATION_CAP in the environment overrides the default.
std::uint64_t enumeration_cap();

/// Visits every element of GL_n(F_q) once, in lexicographic row-major order,
/// until `visit` returns false. Throws CapExceeded when q^(n^2) > cap.
void for_each_invertible(const Field& field, std::size_t n,
                         const std::function<bool(const Matrix&)>& visit,
                         std::uint64_t cap = enumeration_cap());

std::vector<Matrix> enumerate_invertible(const Field& field, std::size_t n,
                                         std::uint64_t cap = enumeration_cap());

/// Accumulates constraints K v = w for an unknown invertible n x n matrix K.
/// Copyable, so search code can branch by value.
class LinearMapBuilder {
public:
    enum class Outcome {
        Independent,   // v was new; constraint recorded
        Consistent,    // v already in the span and its forced image equals w
        Inconsistent,  // v in the span but its forced image differs from w
        Singular,      // v new but w in the span of earlier images: K cannot be invertible
    };

    LinearMapBuilder(const Field& field, std::size_t n);

    /// State is unchanged unless the outcome is Independent.
    Outcome add(const Vector& v, const Vector& w);

    /// K v when v lies in the span of the recorded sources.
    std::optional<Vector> forced_image(const Vector& v) const;

    std::size_t rank() const noexcept { return sources_.size(); }
    bool determined() const noexcept { return sources_.size() == n_; }

    /// An invertible K meeting every recorded constraint. When the sources do
    /// not span, the completion maps the missing standard basis vectors onto a
    /// complement of the recorded images.
    Matrix complete() const;

private:
    struct Row {
        Vector source;  // pivot entry normalized to 1
        Vector image;
        std::size_t pivot;
    };

    Field field_;
    std::size_t n_;
    std::vector<Row> sources_;
    std::vector<Row> images_;  // echelon basis of recorded images; `image` unused

    // Reduces v against the recorded sources; returns the accumulated image.
    Vector reduce(Vector& v) const;
    static bool reduce_against(const Field& field, const std::vector<Row>& basis, Vector& v);
};

}  // namespace glowf
