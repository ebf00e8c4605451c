#pragma once

// Permutations counted by transposition number, the polynomial
// q_k(z) = sum over S_k of z^t(pi), and the |I_G| experiment.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glowf/field.hpp"

namespace glowf {

using Rational = boost::multiprecision::cpp_rational;

/// Bijection of {0..k-1}; mapping[i] is the image of i.
class Permutation {
public:
    /// Throws std::invalid_argument unless `mapping` is a bijection.
    explicit Permutation(std::vector<std::size_t> mapping);
    static Permutation identity(std::size_t k);

    std::size_t size() const noexcept { return mapping_.size(); }
    std::size_t operator[](std::size_t i) const { return mapping_[i]; }
    const std::vector<std::size_t>& mapping() const noexcept { return mapping_; }

    /// Fixed points count as cycles.
    std::size_t cycle_count() const;
    std::vector<std::size_t> cycle_lengths() const;

private:
    std::vector<std::size_t> mapping_;
};

/// k minus the number of cycles: the fewest transpositions composing to p.
std::size_t transposition_count(const Permutation& p);

/// Exact polynomial with coefficients in ascending degree, trailing zeros trimmed.
class RationalPoly {
public:
    RationalPoly() = default;
    explicit RationalPoly(std::vector<Rational> coefficients);

    const std::vector<Rational>& coefficients() const noexcept { return c_; }
    std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }
    Rational coefficient(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
    Rational evaluate(const Rational& z) const;
    double evaluate(double z) const;

    RationalPoly operator*(const RationalPoly& other) const;
    bool operator==(const RationalPoly& other) const { return c_ == other.c_; }

    /// "1 + 3z + 2z^2"
    std::string to_string() const;

private:
    std::vector<Rational> c_;
    void trim();
};

/// Enumerates S_k; k <= 9.
RationalPoly qk_bruteforce(std::size_t k);

/// prod_{j<k} (1 + j z).
RationalPoly qk_product(std::size_t k);

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

/// q_k(z) against e sqrt(k) e^-k (1 - z k)^(-1/z). Throws std::domain_error
/// unless 0 < z < 1/k.
BoundCheck qk_bound_check(std::size_t k, double z);

struct IgSummary {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t trials = 0;
    double mean = 0.0;
    std::uint64_t max = 0;
    double mean_over_sqrt_m = 0.0;
};

/// Per trial: V uniform (m vectors), M invertible, G from draw_family; W = M V
/// and |I_G| = prod over signature classes of (class size)!. Trial t uses rng.split(t).
IgSummary ig_experiment(std::size_t n, std::size_t m, unsigned q, std::size_t trials, const RandomSource& rng);

/// Number of permutations of W preserving every signature, by enumerating S_m; m <= 8.
std::uint64_t ig_bruteforce(const Field& field, std::span<const Vector> g, std::span<const Vector> w);

}  // namespace glowf
