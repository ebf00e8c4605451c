#pragma once

// The candidate one-way function f_V(M) = sort(M v_1, ..., M v_m) over F_q,
// its injectivity analysis, brute-force inverters, and the worst-to-average
// self-reduction wrappers.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "glowf/field.hpp"
#include "glowf/linalg.hpp"

namespace glowf {

/// Public parameters of f_V. The vector list is a multiset: duplicates are kept.
struct OwfKey {
    Field field;
    std::size_t n;
    std::vector<Vector> vectors;
    std::optional<std::uint64_t> seed;  // set by keygen

    std::size_t m() const noexcept { return vectors.size(); }
    unsigned q() const noexcept { return field.q(); }
};

/// f_V(M): the image vectors sorted ascending, duplicates kept.
struct OwfImage {
    std::vector<Vector> vectors;

    static OwfImage from_unsorted(std::vector<Vector> vectors);
    std::size_t size() const noexcept { return vectors.size(); }
    auto operator<=>(const OwfImage&) const = default;
};

/// ceil(A ln^2 n) with A = 5 / ln^2 q.
std::size_t default_delta(unsigned q, std::size_t n);

/// m = n + delta uniform vectors in F_q^n.
OwfKey keygen(unsigned q, std::size_t n, std::optional<std::size_t> delta, RandomSource& rng);

/// Throws SingularMatrix unless m is invertible.
OwfImage evaluate(const OwfKey& key, const Matrix& m);

/// sort(A w) over the image vectors; no invertibility check.
OwfImage transform_image(const Field& field, const Matrix& a, const OwfImage& image);

/// Key with vectors B v_i, order preserved.
OwfKey transform_key(const OwfKey& key, const Matrix& b);

/// K v_i = v_{pi(i)} for every i.
///
/// One witness stands for a whole class of index permutations: equal vectors
/// may be exchanged freely without changing K, and `multiplicity` counts the
/// permutations the class contains. `determined` is false when V does not
/// span, in which case K is one canonical completion among several.
struct ConsistencyWitness {
    std::vector<std::size_t> pi;
    Matrix k;
    bool determined = true;
    std::uint64_t multiplicity = 1;
};

struct WitnessList {
    std::vector<ConsistencyWitness> witnesses;
    bool complete = true;  // false when the cap stopped the search
};

inline constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;

WitnessList consistent_permutations(const OwfKey& key, std::size_t cap,
                                    std::uint64_t node_budget = kDefaultNodeBudget);

/// True iff the identity is the only K with K V = V. std::nullopt when the
/// node budget ran out before a decision.
std::optional<bool> is_injective(const OwfKey& key, std::uint64_t node_budget = kDefaultNodeBudget);

enum class InvertStatus { Found, NotInImage, BudgetExceeded };

struct InvertResult {
    InvertStatus status = InvertStatus::NotInImage;
    Matrix preimage;  // valid when status == Found; always verified with evaluate
    std::uint64_t nodes = 0;
};

/// Backtracking search for M with M V = W, matching equal-multiplicity value
/// classes and pruning with incremental elimination.
InvertResult invert_backtracking(const OwfKey& key, const OwfImage& image,
                                 std::uint64_t node_budget = kDefaultNodeBudget);

/// Scans GL_n in lexicographic order. Throws CapExceeded for large n.
InvertResult invert_exhaustive(const OwfKey& key, const OwfImage& image);

/// Every invertible M with M V = W (canonical completion when V does not span).
std::vector<Matrix> all_preimages(const OwfKey& key, const OwfImage& image,
                                  std::uint64_t node_budget = kDefaultNodeBudget);

/// An inversion algorithm with a declared budget (interpretation is up to the algorithm).
struct Inverter {
    std::function<std::optional<Matrix>(const OwfKey&, const OwfImage&)> invert;
    std::uint64_t budget = 0;
};

struct SelfReduceResult {
    std::optional<Matrix> preimage;
    std::size_t calls = 0;
};

/// Rerandomizes the instance with uniform A: f_V(AM) = A f_V(M).
SelfReduceResult self_reduce(const Inverter& inverter, const OwfKey& key, const OwfImage& image,
                             std::size_t trials, RandomSource& rng);

/// Instance moved to a uniform point of the orbit of V: f_{BV}(M') = f_V(M'B).
struct OrbitInstance {
    OwfKey key;
    OwfImage image;
    Matrix unblind;  // B
};

OrbitInstance orbit_randomize(const OwfKey& key, const OwfImage& image, RandomSource& rng);

/// Maps a preimage for the randomized key back to the original: M = M' B.
Matrix unblind(const Field& field, const OrbitInstance& instance, const Matrix& preimage);

struct InjectivityRow {
    std::size_t delta = 0;
    std::size_t m = 0;
    std::size_t trials = 0;
    std::size_t injective = 0;
    std::size_t undecided = 0;  // budget exhausted
    double probability = 0.0;
    double std_error = 0.0;
};

/// Empirical Pr[f_V injective] for each delta. Trial t of delta index d draws
/// its key from rng.split(d).split(t).
std::vector<InjectivityRow> injectivity_experiment(unsigned q, std::size_t n,
                                                   std::span<const std::size_t> deltas,
                                                   std::size_t trials, const RandomSource& rng);

}  // namespace glowf
