#pragma once

// Hard-core predicate reductions: simulated predictors, Goldreich-Levin
// decoding, and the trace and bilinear inversion pipelines.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "glowf/owf.hpp"

namespace glowf {

/// Predictor input shaped like (f_V(M), V).
struct InstanceQuery {
    OwfImage image;
    std::vector<Vector> basis;
    auto operator<=>(const InstanceQuery&) const = default;
};

/// Predictor input (a, b) for a bilinear form <a, M b>.
struct PairQuery {
    Vector a;
    Vector b;
    auto operator<=>(const PairQuery&) const = default;
};

std::uint64_t fingerprint(std::uint64_t salt, const Vector& v);
std::uint64_t fingerprint(std::uint64_t salt, const Matrix& m);
std::uint64_t fingerprint(std::uint64_t salt, const InstanceQuery& query);
std::uint64_t fingerprint(std::uint64_t salt, const PairQuery& query);

/// Uniform double in [0, 1) from a 64-bit hash.
inline double unit_interval(std::uint64_t h) { return double(h >> 11) * 0x1.0p-53; }

/// A predicate oracle. Answers are memoized per query, so asking twice always
/// gives the same value; concurrent first answers race and the first stored wins.
template <class Query>
class Predictor {
public:
    using Answer = std::function<Scalar(const Query&)>;

    Predictor(unsigned q, double epsilon, Answer answer)
        : state_(std::make_shared<State>(q, epsilon, std::move(answer))) {}

    Scalar operator()(const Query& query) const {
        ++state_->queries;
        {
            std::lock_guard lock(state_->mutex);
            if (auto it = state_->memo.find(query); it != state_->memo.end()) return it->second;
        }
        const Scalar value = state_->answer(query);
        std::lock_guard lock(state_->mutex);
        return state_->memo.emplace(query, value).first->second;
    }

    unsigned q() const noexcept { return state_->q; }
    double epsilon() const noexcept { return state_->epsilon; }
    std::uint64_t queries() const noexcept { return state_->queries.load(); }
    std::size_t distinct_queries() const {
        std::lock_guard lock(state_->mutex);
        return state_->memo.size();
    }

private:
    struct State {
        State(unsigned q_, double epsilon_, Answer answer_)
            : q(q_), epsilon(epsilon_), answer(std::move(answer_)) {}
        unsigned q;
        double epsilon;
        Answer answer;
        std::atomic<std::uint64_t> queries{0};
        mutable std::mutex mutex;
        std::map<Query, Scalar> memo;
    };
    std::shared_ptr<State> state_;
};

/// Correct with probability 1/q + epsilon, otherwise uniform over the q - 1
/// wrong values. The coin for a query is a hash of (seed, query).
template <class Query>
Predictor<Query> make_noisy_predictor(std::function<Scalar(const Query&)> truth, double epsilon,
                                      unsigned q, std::uint64_t seed) {
    if (epsilon < 0.0 || epsilon > 1.0 - 1.0 / q + 1e-12) {
        throw std::invalid_argument("epsilon must lie in [0, 1 - 1/q]");
    }
    const double p_correct = 1.0 / q + epsilon;
    return Predictor<Query>(q, epsilon, [truth = std::move(truth), p_correct, q, seed](const Query& x) {
        const Scalar right = truth(x);
        const std::uint64_t h = fingerprint(seed, x);
        if (unit_interval(h) < p_correct || q == 1) return right;
        const auto wrong = static_cast<Scalar>(RandomSource::mix(h) % (q - 1));
        return static_cast<Scalar>(wrong >= right ? wrong + 1 : wrong);
    });
}

/// tr(M) for the M with f_V(M) = image, found by inversion. Meant for
/// injective keys; returns 0 when the query has no preimage.
Scalar trace_truth(const Field& field, const InstanceQuery& query);

/// <a, M b> for the M with f_V(M) = image.
Scalar bilinear_truth(const Field& field, const Vector& a, const Vector& b, const InstanceQuery& query);

/// Over F_2: P(a, b) = <a, M b> if a or b is orthogonal to the span S of the
/// first dim_s basis vectors, otherwise a hashed coin of (seed, a, b) that
/// never looks at M. dim_s defaults to ceil(log2 n).
Predictor<PairQuery> make_subspace_adversary(const Matrix& m, std::uint64_t seed,
                                             std::optional<std::size_t> dim_s = std::nullopt);

struct AdvantageEstimate {
    double advantage = 0.0;  // Pr[P = truth] - 1/q
    double std_error = 0.0;
    std::size_t samples = 0;
};

template <class Query>
AdvantageEstimate estimate_advantage(const Predictor<Query>& predictor,
                                     const std::function<Scalar(const Query&)>& truth,
                                     const std::function<Query(RandomSource&)>& sample,
                                     std::size_t samples, RandomSource& rng) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const Query x = sample(rng);
        if (predictor(x) == truth(x)) ++hits;
    }
    const double p = samples ? double(hits) / double(samples) : 0.0;
    return {p - 1.0 / predictor.q(), samples ? std::sqrt(p * (1.0 - p) / double(samples)) : 0.0, samples};
}

using LinearOracle = std::function<Scalar(const Vector&)>;

struct DecodeOptions {
    double confidence = 0.9;
    std::size_t max_log_samples = 16;  // at most 2^16 - 1 pairwise-independent points
};

/// Goldreich-Levin over F_2. Returns every h whose agreement with the oracle
/// on a fresh sample is at least 1/2 + epsilon/2.
std::vector<Vector> gl_decode_f2(const LinearOracle& oracle, std::size_t k, double epsilon,
                                 RandomSource& rng, const DecodeOptions& options = {});

/// Scores every h in F_q^k on `samples` random points; keeps those above
/// 1/q + epsilon/2. Throws CapExceeded when q^k exceeds the enumeration cap.
std::vector<Vector> gl_decode_exhaustive(const LinearOracle& oracle, std::size_t k, unsigned q,
                                         double epsilon, std::size_t samples, RandomSource& rng);

/// Agreement fraction of x -> <x, h> with the oracle on the given points.
double agreement(const Field& field, const LinearOracle& oracle, const Vector& h,
                 std::span<const Vector> points);

struct TraceResult {
    std::optional<Matrix> preimage;  // always verified
    std::size_t candidates = 0;      // summed over attempts
    std::size_t attempts = 0;
    std::uint64_t invertible_queries = 0;
    std::uint64_t singular_queries = 0;
    double effective_epsilon = 0.0;
};

/// Recovers M from a predictor for tr(M). The oracle C -> P(sort(C image), V)
/// is extended to singular C by hashed coins, then decoded in dimension n^2.
/// A failed attempt is retried with fresh coins, up to `attempts` times; at
/// small n the fixed coins alone can pull the true agreement under threshold.
TraceResult trace_invert(const OwfKey& key, const OwfImage& image, const Predictor<InstanceQuery>& predictor,
                         double epsilon, RandomSource& rng, const DecodeOptions& options = {},
                         std::size_t attempts = 4);

/// Projection onto <g, .> for g in G, and W partitioned by equal projection.
struct SignatureTable {
    std::vector<Vector> g;
    std::map<std::vector<Scalar>, std::vector<std::size_t>> classes;

    std::vector<Scalar> signature(const Field& field, const Vector& w) const;
    /// prod over classes of (class size)!, saturating.
    std::uint64_t ig_size() const;
};

SignatureTable make_signature_table(const Field& field, std::vector<Vector> g, std::span<const Vector> w);

/// 2 ceil(log2 m) vectors, redrawn until their rank is min(|G|, n).
std::vector<Vector> draw_family(const Field& field, std::size_t n, std::size_t m, RandomSource& rng);

struct BilinearOptions {
    std::uint64_t assignment_budget = 1'000'000;
    DecodeOptions decode;
};

struct BilinearResult {
    std::optional<Matrix> preimage;  // always verified
    std::size_t family_size = 0;
    std::uint64_t assignments = 0;
    bool budget_exhausted = false;
};

/// Recovers M from a predictor for <a, M b> using t(x, y) = P(sort(A image), B V)
/// with A^T a = x and B y = b.
BilinearResult bilinear_invert(const OwfKey& key, const OwfImage& image,
                               const Predictor<InstanceQuery>& predictor, const Vector& a, const Vector& b,
                               double epsilon, RandomSource& rng, const BilinearOptions& options = {});

/// Keys drawn by keygen until is_injective holds. Throws CapExceeded after
/// max_draws rejections (at q = 2, n = 4, m = 8 injective keys are vanishingly rare).
OwfKey injective_keygen(unsigned q, std::size_t n, std::optional<std::size_t> delta, RandomSource& rng,
                        std::size_t max_draws = 10'000);

struct ReductionSummary {
    std::size_t trials = 0;
    std::size_t recovered = 0;  // verified preimage returned
    std::size_t exact = 0;      // and it equals the planted M
    std::uint64_t predictor_queries = 0;
};

/// Planted-M trials of trace_invert with a noisy predictor for tr(M).
/// Trial t uses rng.split(t).
ReductionSummary trace_experiment(unsigned q, std::size_t n, std::optional<std::size_t> delta, double epsilon,
                                  std::size_t trials, const RandomSource& rng);

/// Planted-M trials of bilinear_invert with a = b = e_0 and m = n + delta.
ReductionSummary bilinear_experiment(unsigned q, std::size_t n, std::size_t delta, double epsilon,
                                     std::size_t trials, const RandomSource& rng);

}  // namespace glowf
