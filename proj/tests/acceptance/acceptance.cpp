// Acceptance checks, one numbered criterion per function. Each prints a single
// PASS or FAIL line with the measured quantities.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>

#include "glowf/gi.hpp"
#include "glowf/hardcore.hpp"
#include "glowf/hsp.hpp"
#include "glowf/perm_stats.hpp"

using namespace glowf;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[1024];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const Field f2(2);

VertexMap shuffled(std::size_t n, RandomSource& rng) {
    VertexMap p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng.engine());
    return p;
}

Outcome c01() {
    const auto start = std::chrono::steady_clock::now();
    RandomSource rng(101);
    std::size_t ok = 0;
    for (int t = 0; t < 200; ++t) {
        const OwfKey key = injective_keygen(2, 3, std::nullopt, rng);
        const Matrix m = random_invertible(f2, 3, rng);
        const InvertResult r = invert_backtracking(key, evaluate(key, m));
        ok += r.status == InvertStatus::Found && r.preimage == m;
    }
    std::size_t cross = 0, agree = 0;
    for (unsigned q : {2u, 3u}) {
        const Field f(q);
        for (int t = 0; t < 50; ++t) {
            const OwfKey key = injective_keygen(q, 2, std::nullopt, rng);
            const Matrix m = random_invertible(f, 2, rng);
            const OwfImage img = evaluate(key, m);
            const InvertResult a = invert_backtracking(key, img);
            const InvertResult b = invert_exhaustive(key, img);
            ++cross;
            agree += a.status == InvertStatus::Found && b.status == InvertStatus::Found && a.preimage == m &&
                     b.preimage == m;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {ok == 200 && agree == cross && secs < 60,
            fmt("round trips %zu/200, exhaustive cross-check %zu/%zu, %.1fs", ok, agree, cross, secs)};
}

// Independent collision search over all of GL_2.
bool injective_by_enumeration(const OwfKey& key) {
    std::vector<Vector> sorted = key.vectors;
    std::sort(sorted.begin(), sorted.end());
    const OwfImage base{sorted};
    for (const Matrix& k : enumerate_invertible(key.field, key.n)) {
        if (!k.is_identity() && evaluate(key, k) == base) return false;
    }
    return true;
}

Outcome c02() {
    RandomSource rng(202);
    std::size_t agree = 0, total = 0, injective = 0;
    for (unsigned q : {2u, 3u}) {
        const Field f(q);
        for (int t = 0; t < 500; ++t) {
            OwfKey key{f, 2, {}, std::nullopt};
            const std::size_t m = 1 + rng.uniform(6);
            for (std::size_t i = 0; i < m; ++i) key.vectors.push_back(random_vector(f, 2, rng));
            const bool expect = injective_by_enumeration(key);
            injective += expect;
            agree += is_injective(key) == expect;
            ++total;
        }
    }
    return {agree == total, fmt("agreement %zu/%zu (%zu injective)", agree, total, injective)};
}

Outcome c03() {
    const std::vector<std::size_t> deltas{0, 1, 2, 4, 8, 12};
    const auto rows = injectivity_experiment(2, 4, deltas, 500, RandomSource(303));
    bool monotone = true;
    std::string table;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        table += fmt("%s%zu:%.3f", i ? " " : "", rows[i].delta, rows[i].probability);
        if (i > 0) {
            const double se = std::hypot(rows[i].std_error, rows[i - 1].std_error);
            if (rows[i].probability < rows[i - 1].probability - 2 * se) monotone = false;
        }
    }
    const double last = rows.back().probability;
    return {monotone && last >= 0.99,
            fmt("non-decreasing within 2 SE: %s; P(injective) at delta = 3n is %.3f (needs >= 0.99) [%s]",
                monotone ? "yes" : "no", last, table.c_str())};
}

bool is_permutation_matrix(const Matrix& m) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const Vector col = m.column(c);
        if (col.weight() != 1 || std::count(col.entries.begin(), col.entries.end(), 1) != 1) return false;
    }
    return true;
}

Outcome c04() {
    RandomSource rng(404);
    std::size_t agree = 0, verified = 0, returned = 0, witnesses = 0, permutation = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + rng.uniform(5);
        const SimpleGraph g = random_graph(n, 0.5, rng);
        const SimpleGraph h = t < 50 ? relabel(g, shuffled(n, rng)) : random_graph(n, 0.5, rng);
        const bool expect = brute_force_iso(g, h).has_value();
        bool both = true;
        for (unsigned q : {2u, 3u}) {
            const IsoDecision d = decide_isomorphic(g, h, q);
            both = both && d.status != IsoStatus::BudgetExceeded && (d.status == IsoStatus::Isomorphic) == expect;
            if (d.status == IsoStatus::Isomorphic) {
                ++returned;
                verified += is_isomorphism(g, h, d.pi);
            }
        }
        agree += both;
        if (const auto pair = reduce_pair(g, h, 3)) {
            for (const Matrix& m : all_preimages(pair->key, pair->image)) {
                ++witnesses;
                permutation += is_permutation_matrix(m);
            }
        }
    }
    return {agree == 100 && verified == returned && permutation == witnesses,
            fmt("agreement %zu/100, verified maps %zu/%zu, q = 3 permutation witnesses %zu/%zu", agree, verified,
                returned, permutation, witnesses)};
}

Outcome c05() {
    const SimpleGraph tri(3, {{0, 1}, {1, 2}, {0, 2}});
    const Matrix m = Matrix::from_columns(std::vector<Vector>{{0, 1, 1}, {1, 0, 1}, {0, 0, 1}}, 3);
    const VertexMap pi = extract_isomorphism(m, tri, tri, 2);
    const bool ok = pi == VertexMap{1, 0, 2} && is_isomorphism(tri, tri, pi);
    return {ok, fmt("recovered (%zu %zu %zu), automorphism: %s", pi[0], pi[1], pi[2],
                    is_isomorphism(tri, tri, pi) ? "yes" : "no")};
}

Outcome c06() {
    const auto start = std::chrono::steady_clock::now();
    const OwfKey key{f2, 2, {{1, 0}, {0, 1}, {0, 1}, {1, 1}, {1, 1}, {1, 1}}, std::nullopt};
    const HspInstance inst = make_hsp_oracle(key, Matrix{{1, 1}, {0, 1}});
    const auto group = enumerate_wreath(f2, 2);
    const WreathElement e = WreathElement::identity(2);
    std::size_t bad_pairs = 0, bad_products = 0;
    for (const auto& x : group) {
        for (const auto& y : group) {
            const WreathElement d = wreath_mul(f2, wreath_inverse(f2, x), y);
            bad_pairs += (inst.f(x) == inst.f(y)) != (d == e || d == inst.alpha);
            bad_products += embed_gl2n(wreath_mul(f2, x, y)) != multiply(f2, embed_gl2n(x), embed_gl2n(y));
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {group.size() == 72 && bad_pairs == 0 && bad_products == 0 && inst.promise_exact == true,
            fmt("|G| = %zu, promise violations %zu, homomorphism violations %zu, %.2fs", group.size(), bad_pairs,
                bad_products, secs)};
}

Outcome c07() {
    RandomSource rng(707);
    std::size_t invertible = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) invertible += is_invertible(f2, random_matrix(f2, 10, 10, rng));
    const double frac = double(invertible) / trials;
    const double limit = invertible_probability_limit(2);
    const bool empirical = std::abs(frac - 0.2891) <= 0.02;
    const bool constant = std::abs(limit - 0.2711) < 5e-5;
    return {empirical && constant,
            fmt("empirical alpha_2(10) = %.4f (target 0.2891 +/- 0.02: %s); product limit = %.6f vs quoted 0.2711 (%s)",
                frac, empirical ? "ok" : "off", limit, constant ? "ok" : "mismatch")};
}

Outcome c08() {
    RandomSource rng(808);
    std::size_t noisy = 0, clean = 0;
    for (int t = 0; t < 50; ++t) {
        RandomSource trial = rng.split(std::uint64_t(t));
        const Vector h = random_vector(f2, 20, trial);
        const std::uint64_t seed = trial.next_u64();
        const LinearOracle g = [&h, seed](const Vector& x) {
            const Scalar right = inner_product(f2, x, h);
            return unit_interval(fingerprint(seed, x)) < 0.65 ? right : Scalar(right ^ 1);
        };
        const auto list = gl_decode_f2(g, 20, 0.15, trial);
        noisy += std::find(list.begin(), list.end(), h) != list.end();
        const LinearOracle exact = [&h](const Vector& x) { return inner_product(f2, x, h); };
        const auto one = gl_decode_f2(exact, 20, 0.15, trial);
        clean += std::find(one.begin(), one.end(), h) != one.end();
    }
    return {noisy >= 45 && clean == 50, fmt("noisy recovery %zu/50 (needs 45), noiseless %zu/50", noisy, clean)};
}

Outcome c09() {
    const ReductionSummary n2 = trace_experiment(2, 2, std::nullopt, 0.5, 20, RandomSource(909));
    const ReductionSummary n3 = trace_experiment(2, 3, std::nullopt, 0.5, 20, RandomSource(910));
    return {n2.exact >= 19 && n3.exact >= 19 && n2.exact == n2.recovered && n3.exact == n3.recovered,
            fmt("n = 2: %zu/20 recovered (%zu verified); n = 3: %zu/20 recovered (%zu verified)", n2.exact,
                n2.recovered, n3.exact, n3.recovered)};
}

Outcome c10() {
    // The stated size is m = 8, but injective keys at q = 2, n = 4, m = 8 are
    // too rare to draw; without one the predicate has no well-defined value.
    std::string at_target;
    bool target_ok = false;
    try {
        const ReductionSummary s = bilinear_experiment(2, 4, 4, 0.5, 20, RandomSource(1010));
        target_ok = s.recovered >= 18;
        at_target = fmt("m = 8: perfect %zu/20", s.recovered);
    } catch (const CapExceeded& e) {
        at_target = fmt("m = 8: %s", e.what());
    }
    const ReductionSummary perfect = bilinear_experiment(2, 4, 12, 0.5, 20, RandomSource(1012));
    const ReductionSummary noisy = bilinear_experiment(2, 4, 12, 0.2, 20, RandomSource(1013));
    return {target_ok, fmt("%s; m = 16: perfect predictor %zu/20 verified, epsilon = 0.2 predictor %zu/20 verified",
                           at_target.c_str(), perfect.recovered, noisy.recovered)};
}

Outcome c11() {
    RandomSource rng(1111);
    const Inverter crippled{[](const OwfKey& key, const OwfImage& image) -> std::optional<Matrix> {
                                const InvertResult r = invert_backtracking(key, image);
                                if (r.status != InvertStatus::Found || r.preimage(0, 0) != 1) return std::nullopt;
                                return r.preimage;
                            },
                            0};
    std::size_t ok = 0, hard_targets = 0;
    for (int t = 0; t < 200; ++t) {
        const OwfKey key = injective_keygen(2, 3, std::nullopt, rng);
        const Matrix m = random_invertible(f2, 3, rng);
        hard_targets += m(0, 0) == 0;
        const SelfReduceResult r = self_reduce(crippled, key, evaluate(key, m), 100, rng);
        ok += r.preimage && *r.preimage == m;
    }
    return {ok >= 198, fmt("inverted %zu/200 (%zu targets with M[0][0] = 0)", ok, hard_targets)};
}

Outcome c12() {
    bool identity = true;
    for (std::size_t k = 0; k <= 8; ++k) identity = identity && qk_bruteforce(k) == qk_product(k);
    bool bound = true;
    for (std::size_t k = 1; k <= 10; ++k)
        for (double f : {0.1, 0.5, 0.9}) bound = bound && qk_bound_check(k, f / double(k)).ok;
    double worst = 0.0;
    std::string ratios;
    for (std::size_t m : {8u, 16u, 32u}) {
        const std::size_t n = std::max<std::size_t>(m / 2, 2 * std::size_t(std::ceil(std::log2(double(m)))));
        const IgSummary s = ig_experiment(n, m, 2, 1000, RandomSource(1212 + m));
        worst = std::max(worst, s.mean_over_sqrt_m);
        ratios += fmt("%sm=%zu:%.3f", ratios.empty() ? "" : " ", m, s.mean_over_sqrt_m);
    }
    return {identity && bound && worst <= 3.0,
            fmt("identity k <= 8: %s; bound k <= 10: %s; mean |I_G| / sqrt(m) [%s], max %.3f", identity ? "ok" : "no",
                bound ? "ok" : "no", ratios.c_str(), worst)};
}

Outcome c13() {
    const std::size_t n = 16;
    RandomSource rng(1313);
    const Matrix m = random_invertible(f2, n, rng);
    const auto p = make_subspace_adversary(m, 77);
    const std::function<Scalar(const PairQuery&)> truth = [&m](const PairQuery& x) {
        return inner_product(f2, x.a, multiply(f2, m, x.b));
    };
    const std::function<PairQuery(RandomSource&)> sample = [](RandomSource& r) {
        return PairQuery{random_vector(f2, n, r), random_vector(f2, n, r)};
    };
    const AdvantageEstimate adv = estimate_advantage(p, truth, sample, 20000, rng);

    Matrix m2 = m;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) m2(r, c) ^= Scalar(rng.uniform(2));
    const auto p2 = make_subspace_adversary(m2, 77);
    std::size_t differ = 0;
    RandomSource stream(1314);
    for (int i = 0; i < 20000; ++i) {
        const PairQuery x = sample(stream);
        differ += p(x) != p2(x);
    }
    return {adv.advantage >= 1.0 / (2 * n) && differ == 0,
            fmt("advantage %.4f (needs >= %.4f), differing answers %zu/20000", adv.advantage, 1.0 / (2 * n), differ)};
}

using Check = Outcome (*)();
constexpr Check kChecks[] = {c01, c02, c03, c04, c05, c06, c07, c08, c09, c10, c11, c12, c13};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> selected;
    bool report = false;
    std::string log_path;
    app.add_option("--criterion", selected, "Criterion number(s) to run; default all")->check(CLI::Range(1, 13));
    app.add_flag("--report", report, "Always exit 0 after printing");
    app.add_option("--log", log_path, "Also write the result lines to this file");
    CLI11_PARSE(app, argc, argv);
    if (selected.empty()) {
        selected.resize(13);
        std::iota(selected.begin(), selected.end(), 1);
    }
    std::ofstream log;
    if (!log_path.empty()) log.open(log_path);
    int failures = 0;
    for (int c : selected) {
        Outcome o;
        try {
            o = kChecks[c - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        const std::string line = fmt("criterion %2d: %s  %s", c, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::cout << line << std::endl;
        if (log) log << line << '\n';
    }
    return report || failures == 0 ? 0 : 1;
}
