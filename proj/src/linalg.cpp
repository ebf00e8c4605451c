#include "glowf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "glowf/kernels.hpp"

namespace glowf {

namespace {

// Row storage policies for the shared elimination routine.

class ByteRows {
public:
    ByteRows(const Field& field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    std::size_t count() const noexcept { return rows_; }
    Scalar get(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, Scalar s) { data_[r * cols_ + c] = s; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::swap_ranges(row(a).begin(), row(a).end(), row(b).begin());
    }
    void normalize(std::size_t r, std::size_t c) {
        const Scalar s = field_.inv(get(r, c));
        if (s == 1) return;
        for (auto& e : row(r)) e = field_.mul(e, s);
    }
    void eliminate(std::size_t dst, std::size_t src, Scalar factor) {
        kernels::axpy_mod(row(dst), row(src), field_.neg(factor), field_.q());
    }

private:
    std::span<Scalar> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

    const Field& field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Scalar> data_;
};

class BitRows {
public:
    BitRows(std::size_t rows, std::size_t cols)
        : rows_(rows), words_((cols + 63) / 64), data_(rows * words_, 0) {}

    std::size_t count() const noexcept { return rows_; }
    Scalar get(std::size_t r, std::size_t c) const {
        return static_cast<Scalar>((data_[r * words_ + c / 64] >> (c % 64)) & 1);
    }
    void set(std::size_t r, std::size_t c, Scalar s) {
        const std::uint64_t bit = std::uint64_t{1} << (c % 64);
        auto& w = data_[r * words_ + c / 64];
        w = (s & 1) ? (w | bit) : (w & ~bit);
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::swap_ranges(row(a).begin(), row(a).end(), row(b).begin());
    }
    void normalize(std::size_t, std::size_t) {}
    void eliminate(std::size_t dst, std::size_t src, Scalar) { kernels::xor_into(row(dst), row(src)); }

private:
    std::span<std::uint64_t> row(std::size_t r) { return {data_.data() + r * words_, words_}; }

    std::size_t rows_;
    std::size_t words_;
    std::vector<std::uint64_t> data_;
};

// Gaussian elimination on the first `pivot_cols` columns. With `full`, rows
// above each pivot are cleared as well (reduced row echelon form).
template <class Rows>
std::size_t reduce_rows(Rows& rows, std::size_t pivot_cols, bool full) {
    std::size_t rank = 0;
    for (std::size_t c = 0; c < pivot_cols && rank < rows.count(); ++c) {
        std::size_t p = rank;
        while (p < rows.count() && rows.get(p, c) == 0) ++p;
        if (p == rows.count()) continue;
        rows.swap_rows(p, rank);
        rows.normalize(rank, c);
        for (std::size_t i = full ? 0 : rank + 1; i < rows.count(); ++i) {
            if (i == rank) continue;
            const Scalar f = rows.get(i, c);
            if (f != 0) rows.eliminate(i, rank, f);
        }
        ++rank;
    }
    return rank;
}

template <class Rows>
void load(Rows& rows, const Matrix& m, std::size_t col_offset) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (m(r, c) != 0) rows.set(r, col_offset + c, m(r, c));
        }
    }
}

template <class Rows>
std::size_t rank_impl(Rows rows, const Matrix& m) {
    load(rows, m, 0);
    return reduce_rows(rows, m.cols(), false);
}

template <class Rows>
std::optional<Matrix> inverse_impl(Rows rows, const Matrix& m) {
    const std::size_t n = m.rows();
    load(rows, m, 0);
    load(rows, Matrix::identity(n), n);
    if (reduce_rows(rows, n, true) < n) return std::nullopt;
    Matrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) inv(r, c) = rows.get(r, n + c);
    }
    return inv;
}

template <class Rows>
SolveResult solve_impl(Rows rows, const Matrix& constraints, const Matrix& targets) {
    const std::size_t n = constraints.cols();
    const std::size_t k = constraints.rows();
    load(rows, constraints, 0);
    load(rows, targets, n);
    const std::size_t r = reduce_rows(rows, n, true);
    for (std::size_t i = r; i < k; ++i) {
        for (std::size_t c = n; c < 2 * n; ++c) {
            if (rows.get(i, c) != 0) return {SolveStatus::NoSolution, {}};
        }
    }
    if (r < n) return {SolveStatus::Underdetermined, {}};
    // Rows 0..n-1 now read (e_i | X^T e_i).
    Matrix x(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) x(j, i) = rows.get(i, n + j);
    }
    return {SolveStatus::Unique, std::move(x)};
}

std::uint64_t checked_power(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t result = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (__builtin_mul_overflow(result, base, &result)) return UINT64_MAX;
    }
    return result;
}

}  // namespace

Scalar inner_product(const Field& field, const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("inner product of vectors of length " + std::to_string(a.size()) +
                                    " and " + std::to_string(b.size()));
    }
    return kernels::dot_mod(a.span(), b.span(), field.q());
}

Vector multiply(const Field& field, const Matrix& m, const Vector& v) {
    if (m.cols() != v.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
    Vector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) out[r] = kernels::dot_mod(m.row(r), v.span(), field.q());
    return out;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
    }
    return t;
}

Matrix multiply(const Field& field, const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix dimension mismatch");
    const Matrix bt = transpose(b);
    Matrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < b.cols(); ++c) {
            out(r, c) = kernels::dot_mod(a.row(r), bt.row(c), field.q());
        }
    }
    return out;
}

Scalar trace(const Field& field, const Matrix& m) {
    Scalar t = 0;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) t = field.add(t, m(i, i));
    return t;
}

std::size_t rank(const Field& field, const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    if (field.is_binary()) return rank_impl(BitRows(m.rows(), m.cols()), m);
    return rank_impl(ByteRows(field, m.rows(), m.cols()), m);
}

std::size_t rank_of(const Field& field, std::span<const Vector> vectors, std::size_t n) {
    if (vectors.empty()) return 0;
    return rank(field, Matrix::from_rows(vectors, n));
}

bool is_invertible(const Field& field, const Matrix& m) {
    return m.is_square() && rank(field, m) == m.rows();
}

std::optional<Matrix> inverse(const Field& field, const Matrix& m) {
    if (!m.is_square()) throw std::invalid_argument("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    if (field.is_binary()) return inverse_impl(BitRows(n, 2 * n), m);
    return inverse_impl(ByteRows(field, n, 2 * n), m);
}

SolveResult solve_linear(const Field& field, const Matrix& constraints, const Matrix& targets) {
    if (constraints.rows() != targets.rows() || constraints.cols() != targets.cols()) {
        throw std::invalid_argument("constraint and target shapes differ");
    }
    const std::size_t n = constraints.cols();
    if (field.is_binary()) return solve_impl(BitRows(constraints.rows(), 2 * n), constraints, targets);
    return solve_impl(ByteRows(field, constraints.rows(), 2 * n), constraints, targets);
}

Matrix random_invertible(const Field& field, std::size_t n, RandomSource& rng, std::size_t* attempts) {
    if (n == 0) throw std::invalid_argument("dimension must be positive");
    std::size_t tries = 0;
    for (;;) {
        ++tries;
        Matrix m = random_matrix(field, n, n, rng);
        if (rank(field, m) == n) {
            if (attempts) *attempts = tries;
            return m;
        }
    }
}

namespace {

// Invertible matrix whose first column is v, completed with standard basis vectors.
Matrix basis_starting_with(const Field& field, const Vector& v) {
    const std::size_t n = v.size();
    LinearMapBuilder span(field, n);
    std::vector<Vector> columns{v};
    span.add(v, v);
    for (std::size_t j = 0; j < n && columns.size() < n; ++j) {
        const Vector e = Vector::unit(n, j);
        if (span.add(e, e) == LinearMapBuilder::Outcome::Independent) columns.push_back(e);
    }
    return Matrix::from_columns(columns, n);
}

}  // namespace

Matrix random_invertible_mapping(const Field& field, const Vector& u, const Vector& w,
                                 RandomSource& rng) {
    if (u.size() != w.size()) throw std::invalid_argument("vector length mismatch");
    if (u.is_zero() || w.is_zero()) throw std::invalid_argument("mapping endpoints must be nonzero");
    const std::size_t n = u.size();
    const Matrix pu = basis_starting_with(field, u);
    const Matrix pw = basis_starting_with(field, w);
    // T ranges uniformly over the stabilizer of e_0; A = Pw T Pu^-1 then ranges
    // uniformly over { A : A u = w }.
    Matrix t;
    do {
        t = random_matrix(field, n, n, rng);
        for (std::size_t r = 0; r < n; ++r) t(r, 0) = r == 0 ? 1 : 0;
    } while (rank(field, t) < n);
    return multiply(field, multiply(field, pw, t), *inverse(field, pu));
}

double invertible_probability(unsigned q, std::size_t n) {
    double p = 1.0;
    for (std::size_t i = 1; i <= n; ++i) p *= 1.0 - std::pow(double(q), -double(i));
    return p;
}

double invertible_probability_limit(unsigned q) {
    double p = 1.0;
    for (int i = 1; i < 200; ++i) {
        const double term = std::pow(double(q), -double(i));
        if (term < 1e-18) break;
        p *= 1.0 - term;
    }
    return p;
}

std::uint64_t general_linear_order(unsigned q, std::size_t n) {
    const std::uint64_t qn = checked_power(q, n);
    if (qn == UINT64_MAX) throw std::overflow_error("|GL_n| does not fit in 64 bits");
    std::uint64_t order = 1;
    std::uint64_t qi = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (__builtin_mul_overflow(order, qn - qi, &order)) {
            throw std::overflow_error("|GL_n| does not fit in 64 bits");
        }
        qi *= q;
    }
    return order;
}

std::uint64_t enumeration_cap() {
    if (const char* env = std::getenv("GLOWF_ENUMERATION_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return kDefaultEnumerationCap;
}

void for_each_invertible(const Field& field, std::size_t n,
                         const std::function<bool(const Matrix&)>& visit, std::uint64_t cap) {
    if (n == 0) throw std::invalid_argument("dimension must be positive");
    const std::uint64_t space = checked_power(field.q(), n * n);
    if (space > cap) {
        throw CapExceeded("enumerating GL_" + std::to_string(n) + "(F_" + std::to_string(field.q()) +
                          ") exceeds the enumeration cap of " + std::to_string(cap));
    }
    // All q^n vectors in lexicographic order.
    std::vector<Vector> vectors;
    {
        Vector v(n);
        for (bool carry = false; !carry;) {
            vectors.push_back(v);
            carry = true;
            for (std::size_t i = n; i > 0 && carry; --i) {
                if (++v[i - 1] < field.q()) {
                    carry = false;
                } else {
                    v[i - 1] = 0;
                }
            }
        }
    }

    Matrix current(n, n);
    bool keep_going = true;
    std::function<void(std::size_t, const LinearMapBuilder&)> place =
        [&](std::size_t row, const LinearMapBuilder& span) {
            if (row == n) {
                keep_going = visit(current);
                return;
            }
            for (const Vector& v : vectors) {
                if (!keep_going) return;
                LinearMapBuilder next = span;
                if (next.add(v, v) != LinearMapBuilder::Outcome::Independent) continue;
                std::copy(v.entries.begin(), v.entries.end(), current.row(row).begin());
                place(row + 1, next);
            }
        };
    place(0, LinearMapBuilder(field, n));
}

std::vector<Matrix> enumerate_invertible(const Field& field, std::size_t n, std::uint64_t cap) {
    std::vector<Matrix> out;
    for_each_invertible(field, n, [&](const Matrix& m) {
        out.push_back(m);
        return true;
    }, cap);
    return out;
}

// --- LinearMapBuilder -------------------------------------------------------

LinearMapBuilder::LinearMapBuilder(const Field& field, std::size_t n) : field_(field), n_(n) {}

bool LinearMapBuilder::reduce_against(const Field& field, const std::vector<Row>& basis, Vector& v) {
    for (const Row& row : basis) {
        const Scalar c = v[row.pivot];
        if (c != 0) kernels::axpy_mod(v.span(), row.source.span(), field.neg(c), field.q());
    }
    return !v.is_zero();
}

Vector LinearMapBuilder::reduce(Vector& v) const {
    Vector acc(n_);
    for (const Row& row : sources_) {
        const Scalar c = v[row.pivot];
        if (c == 0) continue;
        kernels::axpy_mod(v.span(), row.source.span(), field_.neg(c), field_.q());
        kernels::axpy_mod(acc.span(), row.image.span(), c, field_.q());
    }
    return acc;
}

LinearMapBuilder::Outcome LinearMapBuilder::add(const Vector& v, const Vector& w) {
    if (v.size() != n_ || w.size() != n_) throw std::invalid_argument("constraint length mismatch");
    Vector residual = v;
    const Vector acc = reduce(residual);
    if (residual.is_zero()) return acc == w ? Outcome::Consistent : Outcome::Inconsistent;

    Vector image = w;
    for (std::size_t i = 0; i < n_; ++i) image[i] = field_.sub(image[i], acc[i]);
    Vector image_residual = image;
    if (!reduce_against(field_, images_, image_residual)) return Outcome::Singular;

    auto normalized = [&](Vector& x, Vector* companion) {
        std::size_t p = 0;
        while (x[p] == 0) ++p;
        const Scalar s = field_.inv(x[p]);
        for (auto& e : x.entries) e = field_.mul(e, s);
        if (companion) {
            for (auto& e : companion->entries) e = field_.mul(e, s);
        }
        return p;
    };
    const std::size_t p = normalized(residual, &image);
    sources_.push_back({std::move(residual), std::move(image), p});
    const std::size_t ip = normalized(image_residual, nullptr);
    images_.push_back({std::move(image_residual), Vector{}, ip});
    return Outcome::Independent;
}

std::optional<Vector> LinearMapBuilder::forced_image(const Vector& v) const {
    Vector residual = v;
    Vector acc = reduce(residual);
    if (!residual.is_zero()) return std::nullopt;
    return acc;
}

Matrix LinearMapBuilder::complete() const {
    std::vector<Vector> from;
    std::vector<Vector> to;
    std::vector<bool> source_pivot(n_, false);
    std::vector<bool> image_pivot(n_, false);
    for (const Row& row : sources_) {
        from.push_back(row.source);
        to.push_back(row.image);
        source_pivot[row.pivot] = true;
    }
    for (const Row& row : images_) image_pivot[row.pivot] = true;
    for (std::size_t j = 0; j < n_; ++j) {
        if (!source_pivot[j]) from.push_back(Vector::unit(n_, j));
        if (!image_pivot[j]) to.push_back(Vector::unit(n_, j));
    }
    SolveResult r = solve_linear(field_, Matrix::from_rows(from, n_), Matrix::from_rows(to, n_));
    if (r.status != SolveStatus::Unique) throw std::logic_error("completion basis is not a basis");
    return std::move(r.solution);
}

}  // namespace glowf
