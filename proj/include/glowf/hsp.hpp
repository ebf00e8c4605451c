#pragma once

// Hidden shift and hidden subgroup instances built from f_V, the wreath
// product GL_n wr Z_2, and its block-matrix copy inside GL_2n.

#include <optional>
#include <utility>
#include <vector>

#include "glowf/owf.hpp"

namespace glowf {

/// (g1, g2, z). Multiplication is read off the block embedding:
/// z = 0 is diag(g1, g2) and z = 1 is [[0, g1], [g2, 0]].
struct WreathElement {
    Matrix g1;
    Matrix g2;
    bool z = false;

    static WreathElement identity(std::size_t n);
    auto operator<=>(const WreathElement&) const = default;
};

/// (a1, a2, y)(b1, b2, z) = (a1 b', a2 b'', y xor z) where (b', b'') is
/// (b1, b2), swapped when y = 1. Throws std::invalid_argument on size mismatch.
WreathElement wreath_mul(const Field& field, const WreathElement& x, const WreathElement& y);
WreathElement wreath_inverse(const Field& field, const WreathElement& x);

Matrix embed_gl2n(const WreathElement& x);

/// Every element of GL_n wr Z_2, 2 |GL_n|^2 of them.
std::vector<WreathElement> enumerate_wreath(const Field& field, std::size_t n,
                                            std::uint64_t cap = enumeration_cap());

/// f1(N) = sort(N V), f2(N) = sort(N M V) = f1(N M).
struct HiddenShiftInstance {
    OwfKey key;
    Matrix shift;  // kept for verification

    OwfImage f1(const Matrix& n) const { return evaluate(key, n); }
    OwfImage f2(const Matrix& n) const;
};

/// Throws SingularMatrix if m is not invertible.
HiddenShiftInstance make_hidden_shift(const OwfKey& key, const Matrix& m);

using HspValue = std::pair<OwfImage, OwfImage>;

/// f(g1, g2, 0) = (f1(g1), f2(g2)) and f(g1, g2, 1) = (f2(g1), f1(g2)),
/// hiding H = {e, alpha} with alpha = (M^-1, M, 1).
struct HspInstance {
    HiddenShiftInstance shift;
    WreathElement alpha;
    std::optional<bool> promise_exact;  // is_injective(key); nullopt when undecided

    HspValue f(const WreathElement& x) const;
};

HspInstance make_hsp_oracle(const OwfKey& key, const Matrix& m,
                            std::uint64_t node_budget = kDefaultNodeBudget);

/// Exhaustive check that f(x) = f(y) exactly when y is in {x, x alpha}.
bool verify_hsp_promise(const HspInstance& instance, std::uint64_t cap = enumeration_cap());

}  // namespace glowf
