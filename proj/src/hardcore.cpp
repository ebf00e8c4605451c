#include "glowf/hardcore.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "glowf/kernels.hpp"
#include "glowf/parallel.hpp"

namespace glowf {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t absorb(std::uint64_t h, std::span<const Scalar> bytes) {
    h = RandomSource::mix(h ^ (bytes.size() * kGolden));
    for (std::size_t i = 0; i < bytes.size(); i += 8) {
        std::uint64_t word = 0;
        std::memcpy(&word, bytes.data() + i, std::min<std::size_t>(8, bytes.size() - i));
        h = RandomSource::mix(h + word + kGolden);
    }
    return h;
}

std::size_t ceil_log2(std::size_t x) { return x <= 1 ? 0 : std::bit_width(x - 1); }

std::optional<Matrix> preimage_of(const Field& field, const InstanceQuery& query) {
    if (query.basis.empty()) return std::nullopt;
    const OwfKey key{field, query.basis.front().size(), query.basis, std::nullopt};
    InvertResult r = invert_backtracking(key, query.image);
    if (r.status != InvertStatus::Found) return std::nullopt;
    return std::move(r.preimage);
}

}  // namespace

std::uint64_t fingerprint(std::uint64_t salt, const Vector& v) { return absorb(salt, v.span()); }

std::uint64_t fingerprint(std::uint64_t salt, const Matrix& m) {
    return absorb(RandomSource::mix(salt ^ (m.rows() << 32 | m.cols())), m.data());
}

std::uint64_t fingerprint(std::uint64_t salt, const InstanceQuery& query) {
    std::uint64_t h = RandomSource::mix(salt ^ 0x51ed270b27e3a8c1ULL);
    for (const Vector& w : query.image.vectors) h = fingerprint(h, w);
    h = RandomSource::mix(h ^ query.basis.size());
    for (const Vector& v : query.basis) h = fingerprint(h, v);
    return h;
}

std::uint64_t fingerprint(std::uint64_t salt, const PairQuery& query) {
    return fingerprint(fingerprint(RandomSource::mix(salt ^ 0x2545f4914f6cdd1dULL), query.a), query.b);
}

Scalar trace_truth(const Field& field, const InstanceQuery& query) {
    const auto m = preimage_of(field, query);
    return m ? trace(field, *m) : Scalar{0};
}

Scalar bilinear_truth(const Field& field, const Vector& a, const Vector& b, const InstanceQuery& query) {
    const auto m = preimage_of(field, query);
    return m ? inner_product(field, a, multiply(field, *m, b)) : Scalar{0};
}

Predictor<PairQuery> make_subspace_adversary(const Matrix& m, std::uint64_t seed,
                                             std::optional<std::size_t> dim_s) {
    if (!m.is_square()) throw std::invalid_argument("matrix must be square");
    const std::size_t dim = dim_s.value_or(ceil_log2(m.rows()));
    const double advantage = 1.0 / double(m.rows()) - 1.0 / (2.0 * double(m.rows() * m.rows()));
    const Field f2(2);
    return Predictor<PairQuery>(2, advantage, [m, dim, seed, f2](const PairQuery& x) {
        auto orthogonal_to_s = [dim](const Vector& v) {
            return std::all_of(v.entries.begin(), v.entries.begin() + std::min(dim, v.size()),
                               [](Scalar s) { return s == 0; });
        };
        if (orthogonal_to_s(x.a) || orthogonal_to_s(x.b)) {
            return inner_product(f2, x.a, multiply(f2, m, x.b));
        }
        return static_cast<Scalar>(fingerprint(seed, x) & 1);
    });
}

std::vector<Vector> gl_decode_f2(const LinearOracle& oracle, std::size_t k, double epsilon,
                                 RandomSource& rng, const DecodeOptions& options) {
    if (k == 0 || epsilon <= 0.0) throw std::invalid_argument("gl_decode_f2 needs k > 0 and epsilon > 0");
    const double failure = (1.0 - options.confidence) / 2.0;  // half for voting, half for filtering
    // Chebyshev per coordinate, union bound over k coordinates.
    const double points = double(k) / (4.0 * epsilon * epsilon * failure);
    const std::size_t l = std::clamp<std::size_t>(std::size_t(std::ceil(std::log2(points + 1.0))), 1,
                                                  options.max_log_samples);
    const std::size_t count = std::size_t{1} << l;
    const std::size_t words = (k + 63) / 64;
    const Field f2(2);

    // r_J for every subset J of the l reference points, packed.
    std::vector<std::uint64_t> sums(count * words, 0);
    std::vector<std::vector<std::uint64_t>> refs(l);
    for (auto& r : refs) r = pack_bits(random_vector(f2, k, rng));
    for (std::size_t j = 1; j < count; ++j) {
        const std::span<std::uint64_t> dst(sums.data() + j * words, words);
        const std::span<const std::uint64_t> prev(sums.data() + (j & (j - 1)) * words, words);
        std::copy(prev.begin(), prev.end(), dst.begin());
        kernels::xor_into(dst, refs[std::countr_zero(j)]);
    }

    // Each guess sigma fixes <r_j, h> = sigma_j; coordinate i of the candidate
    // is the majority of g(r_J + e_i) - <r_J, h>, read off a Walsh-Hadamard transform.
    std::vector<std::vector<std::uint64_t>> candidates(count, std::vector<std::uint64_t>(words, 0));
    std::vector<std::int32_t> votes(count);
    std::vector<std::uint64_t> point(words);
    for (std::size_t i = 0; i < k; ++i) {
        votes[0] = 0;
        for (std::size_t j = 1; j < count; ++j) {
            std::copy_n(sums.begin() + std::ptrdiff_t(j * words), words, point.begin());
            point[i / 64] ^= std::uint64_t{1} << (i % 64);
            votes[j] = oracle(unpack_bits(point, k)) ? -1 : 1;
        }
        kernels::walsh_hadamard(votes);
        for (std::size_t s = 0; s < count; ++s) {
            if (votes[s] < 0) candidates[s][i / 64] |= std::uint64_t{1} << (i % 64);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // Keep candidates that agree often enough on a fresh sample; Hoeffding with
    // a union bound over the candidate list.
    const double log_terms = std::log(double(candidates.size())) + std::log(2.0 / failure);
    const std::size_t samples =
        std::max<std::size_t>(32, std::size_t(std::ceil(2.0 * log_terms / (epsilon * epsilon))));
    std::vector<std::vector<std::uint64_t>> xs(samples);
    std::vector<unsigned> ys(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        const Vector x = random_vector(f2, k, rng);
        ys[s] = oracle(x);
        xs[s] = pack_bits(x);
    }
    std::vector<Vector> out;
    for (const auto& c : candidates) {
        std::size_t agree = 0;
        for (std::size_t s = 0; s < samples; ++s) agree += kernels::and_parity(xs[s], c) == ys[s];
        if (double(agree) / double(samples) >= 0.5 + epsilon / 2.0) out.push_back(unpack_bits(c, k));
    }
    return out;
}

std::vector<Vector> gl_decode_exhaustive(const LinearOracle& oracle, std::size_t k, unsigned q,
                                         double epsilon, std::size_t samples, RandomSource& rng) {
    const Field field(q);
    const double total = std::pow(double(q), double(k));
    if (total > double(enumeration_cap())) throw CapExceeded("q^k exceeds the enumeration cap");
    std::vector<Vector> points;
    points.reserve(samples);
    for (std::size_t s = 0; s < samples; ++s) points.push_back(random_vector(field, k, rng));
    std::vector<Scalar> answers(samples);
    for (std::size_t s = 0; s < samples; ++s) answers[s] = oracle(points[s]);

    std::vector<Vector> out;
    Vector h(k);
    for (bool done = false; !done;) {
        std::size_t agree = 0;
        for (std::size_t s = 0; s < samples; ++s) {
            agree += kernels::dot_mod(points[s].span(), h.span(), q) == answers[s];
        }
        if (double(agree) / double(samples) > 1.0 / q + epsilon / 2.0) out.push_back(h);
        done = true;
        for (std::size_t i = k; i-- > 0 && done;) {
            if (++h[i] < q) {
                done = false;
            } else {
                h[i] = 0;
            }
        }
    }
    return out;
}

double agreement(const Field& field, const LinearOracle& oracle, const Vector& h,
                 std::span<const Vector> points) {
    if (points.empty()) return 0.0;
    std::size_t agree = 0;
    for (const Vector& x : points) agree += inner_product(field, x, h) == oracle(x);
    return double(agree) / double(points.size());
}

TraceResult trace_invert(const OwfKey& key, const OwfImage& image, const Predictor<InstanceQuery>& predictor,
                         double epsilon, RandomSource& rng, const DecodeOptions& options, std::size_t attempts) {
    const Field& field = key.field;
    const std::size_t n = key.n;
    const std::size_t k = n * n;
    TraceResult result;
    result.effective_epsilon = invertible_probability(field.q(), n) * epsilon;

    std::atomic<std::uint64_t> invertible{0}, singular{0};
    for (std::size_t attempt = 0; attempt < attempts && !result.preimage; ++attempt) {
        // Each attempt draws a fresh random extension to the singular matrices.
        const std::uint64_t salt = rng.next_u64();
        // tr(C M) = <vec(C), vec(M^T)>, so the decoded vector is M^T.
        const LinearOracle oracle = [&](const Vector& x) -> Scalar {
            Matrix c(n, n);
            for (std::size_t i = 0; i < k; ++i) c(i / n, i % n) = x[i];
            if (!is_invertible(field, c)) {
                ++singular;
                return static_cast<Scalar>(RandomSource::mix(fingerprint(salt, c)) % field.q());
            }
            ++invertible;
            return predictor(InstanceQuery{transform_image(field, c, image), key.vectors});
        };

        std::vector<Vector> candidates;
        if (field.is_binary()) {
            candidates = gl_decode_f2(oracle, k, result.effective_epsilon, rng, options);
        } else {
            const double eps = result.effective_epsilon;
            const double failure = 1.0 - options.confidence;
            const double log_candidates = double(k) * std::log(double(field.q()));
            const auto samples =
                std::size_t(std::ceil(2.0 * (log_candidates + std::log(2.0 / failure)) / (eps * eps)));
            candidates = gl_decode_exhaustive(oracle, k, field.q(), eps, samples, rng);
        }
        result.candidates += candidates.size();
        ++result.attempts;

        for (const Vector& h : candidates) {
            Matrix m(n, n);
            for (std::size_t i = 0; i < k; ++i) m(i % n, i / n) = h[i];
            if (is_invertible(field, m) && evaluate(key, m) == image) {
                result.preimage = std::move(m);
                break;
            }
        }
    }
    result.invertible_queries = invertible;
    result.singular_queries = singular;
    return result;
}

std::vector<Scalar> SignatureTable::signature(const Field& field, const Vector& w) const {
    std::vector<Scalar> out;
    out.reserve(g.size());
    for (const Vector& x : g) out.push_back(inner_product(field, x, w));
    return out;
}

std::uint64_t SignatureTable::ig_size() const {
    std::uint64_t out = 1;
    for (const auto& [sig, members] : classes) {
        for (std::uint64_t k = 2; k <= members.size(); ++k) {
            if (__builtin_mul_overflow(out, k, &out)) return UINT64_MAX;
        }
    }
    return out;
}

SignatureTable make_signature_table(const Field& field, std::vector<Vector> g, std::span<const Vector> w) {
    SignatureTable table{std::move(g), {}};
    for (std::size_t i = 0; i < w.size(); ++i) table.classes[table.signature(field, w[i])].push_back(i);
    return table;
}

std::vector<Vector> draw_family(const Field& field, std::size_t n, std::size_t m, RandomSource& rng) {
    const std::size_t size = 2 * std::max<std::size_t>(1, ceil_log2(m));
    const std::size_t want = std::min(size, n);
    for (;;) {
        std::vector<Vector> g;
        g.reserve(size);
        for (std::size_t i = 0; i < size; ++i) g.push_back(random_vector(field, n, rng));
        if (rank_of(field, g, n) == want) return g;
    }
}

namespace {

// Enumerates the assignments within signature classes: class c sends the V
// indices sources[c] onto some ordering of the W indices targets[c].
class ClassAssignments {
public:
    ClassAssignments(std::vector<std::vector<std::size_t>> sources, std::vector<std::vector<std::size_t>> targets)
        : sources_(std::move(sources)), targets_(std::move(targets)) {}

    // Calls visit(pi) for each assignment until it returns false.
    template <class Visit>
    void run(Visit&& visit) {
        std::size_t m = 0;
        for (const auto& s : sources_) m += s.size();
        std::vector<std::size_t> pi(m);
        recurse(0, pi, visit);
    }

private:
    template <class Visit>
    bool recurse(std::size_t c, std::vector<std::size_t>& pi, Visit& visit) {
        if (c == sources_.size()) return visit(pi);
        std::vector<std::size_t> order = targets_[c];
        do {
            for (std::size_t i = 0; i < order.size(); ++i) pi[sources_[c][i]] = order[i];
            if (!recurse(c + 1, pi, visit)) return false;
        } while (std::next_permutation(order.begin(), order.end()));
        return true;
    }

    std::vector<std::vector<std::size_t>> sources_;
    std::vector<std::vector<std::size_t>> targets_;
};

std::optional<Matrix> solve_assignment(const OwfKey& key, const OwfImage& image,
                                       const std::vector<std::size_t>& pi) {
    const Field& field = key.field;
    std::vector<Vector> targets;
    targets.reserve(pi.size());
    for (std::size_t i : pi) targets.push_back(image.vectors[i]);
    const SolveResult solved = solve_linear(field, Matrix::from_rows(key.vectors, key.n),
                                            Matrix::from_rows(targets, key.n));
    std::optional<Matrix> m;
    if (solved.status == SolveStatus::Unique) {
        m = solved.solution;
    } else if (solved.status == SolveStatus::Underdetermined) {
        LinearMapBuilder builder(field, key.n);
        for (std::size_t i = 0; i < pi.size(); ++i) {
            const auto outcome = builder.add(key.vectors[i], targets[i]);
            if (outcome == LinearMapBuilder::Outcome::Inconsistent ||
                outcome == LinearMapBuilder::Outcome::Singular) {
                return std::nullopt;
            }
        }
        m = builder.complete();
    }
    if (!m || !is_invertible(field, *m) || evaluate(key, *m) != image) return std::nullopt;
    return m;
}

}  // namespace

BilinearResult bilinear_invert(const OwfKey& key, const OwfImage& image,
                               const Predictor<InstanceQuery>& predictor, const Vector& a, const Vector& b,
                               double epsilon, RandomSource& rng, const BilinearOptions& options) {
    const Field& field = key.field;
    const std::size_t n = key.n;
    if (a.is_zero() || b.is_zero()) throw std::invalid_argument("a and b must be nonzero");
    BilinearResult result;
    if (image.size() != key.m()) return result;
    const std::uint64_t salt = rng.next_u64();

    // t(x, y) = P(sort(A W), B V) with A^T a = x and B y = b, so that the
    // predicted value <a, A M B^-1 b> equals <x, M y>.
    std::mutex memo_mutex;
    std::map<std::pair<Vector, Vector>, Scalar> memo;
    auto t = [&](const Vector& x, const Vector& y) -> Scalar {
        if (x.is_zero() || y.is_zero()) return 0;
        {
            std::lock_guard lock(memo_mutex);
            if (auto it = memo.find({x, y}); it != memo.end()) return it->second;
        }
        RandomSource local(fingerprint(fingerprint(salt, x), y));
        const Matrix am = transpose(random_invertible_mapping(field, a, x, local));
        const Matrix bm = random_invertible_mapping(field, y, b, local);
        const Scalar value = predictor(InstanceQuery{transform_image(field, am, image),
                                                     transform_key(key, bm).vectors});
        std::lock_guard lock(memo_mutex);
        return memo.emplace(std::pair{x, y}, value).first->second;
    };

    const std::vector<Vector> family = draw_family(field, n, key.m(), rng);
    result.family_size = family.size();

    // Decoding y -> t(g, y) yields h_g = M^T g, so <h_g, v> = <g, M v>.
    const RandomSource decode_rng(rng.next_u64());
    const double decode_epsilon = epsilon / 2.0;
    std::vector<std::vector<Vector>> lists(family.size());
    parallel_for(family.size(), [&](std::size_t i) {
        RandomSource local = decode_rng.split(i);
        const LinearOracle oracle = [&](const Vector& y) { return t(family[i], y); };
        if (field.is_binary()) {
            lists[i] = gl_decode_f2(oracle, n, decode_epsilon, local, options.decode);
        } else {
            const double failure = 1.0 - options.decode.confidence;
            const auto samples = std::size_t(std::ceil(
                2.0 * (double(n) * std::log(double(field.q())) + std::log(2.0 / failure)) /
                (decode_epsilon * decode_epsilon)));
            lists[i] = gl_decode_exhaustive(oracle, n, field.q(), decode_epsilon, samples, local);
        }
    });
    if (std::any_of(lists.begin(), lists.end(), [](const auto& l) { return l.empty(); })) return result;

    const SignatureTable table = make_signature_table(field, family, image.vectors);
    std::vector<std::size_t> choice(lists.size(), 0);
    for (bool more = true; more;) {
        // Claimed signature of M v is (<h_g, v>)_g.
        std::map<std::vector<Scalar>, std::vector<std::size_t>> claimed;
        for (std::size_t i = 0; i < key.m(); ++i) {
            std::vector<Scalar> sig;
            sig.reserve(lists.size());
            for (std::size_t j = 0; j < lists.size(); ++j) {
                sig.push_back(inner_product(field, lists[j][choice[j]], key.vectors[i]));
            }
            claimed[std::move(sig)].push_back(i);
        }
        bool matches = claimed.size() == table.classes.size();
        std::vector<std::vector<std::size_t>> sources, targets;
        for (const auto& [sig, members] : claimed) {
            if (!matches) break;
            const auto it = table.classes.find(sig);
            matches = it != table.classes.end() && it->second.size() == members.size();
            if (matches) {
                sources.push_back(members);
                targets.push_back(it->second);
            }
        }
        if (matches) {
            ClassAssignments(std::move(sources), std::move(targets)).run([&](const std::vector<std::size_t>& pi) {
                if (result.assignments >= options.assignment_budget) {
                    result.budget_exhausted = true;
                    return false;
                }
                ++result.assignments;
                result.preimage = solve_assignment(key, image, pi);
                return !result.preimage;
            });
            if (result.preimage || result.budget_exhausted) return result;
        }
        more = false;
        for (std::size_t j = lists.size(); j-- > 0 && !more;) {
            if (++choice[j] < lists[j].size()) {
                more = true;
            } else {
                choice[j] = 0;
            }
        }
    }
    return result;
}

OwfKey injective_keygen(unsigned q, std::size_t n, std::optional<std::size_t> delta, RandomSource& rng,
                        std::size_t max_draws) {
    for (std::size_t i = 0; i < max_draws; ++i) {
        OwfKey key = keygen(q, n, delta, rng);
        if (is_injective(key).value_or(false)) return key;
    }
    throw CapExceeded("no injective key in " + std::to_string(max_draws) + " draws");
}

ReductionSummary trace_experiment(unsigned q, std::size_t n, std::optional<std::size_t> delta, double epsilon,
                                  std::size_t trials, const RandomSource& rng) {
    std::vector<int> outcome(trials, 0);
    std::vector<std::uint64_t> queries(trials, 0);
    parallel_for(trials, [&](std::size_t t) {
        RandomSource local = rng.split(t);
        const OwfKey key = injective_keygen(q, n, delta, local);
        const Matrix m = random_invertible(key.field, n, local);
        const OwfImage image = evaluate(key, m);
        const Field field = key.field;
        const auto predictor = make_noisy_predictor<InstanceQuery>(
            [field](const InstanceQuery& x) { return trace_truth(field, x); }, epsilon, q, local.next_u64());
        const TraceResult r = trace_invert(key, image, predictor, epsilon, local);
        if (r.preimage) outcome[t] = *r.preimage == m ? 2 : 1;
        queries[t] = predictor.queries();
    });
    ReductionSummary out;
    out.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        out.recovered += outcome[t] >= 1;
        out.exact += outcome[t] == 2;
        out.predictor_queries += queries[t];
    }
    return out;
}

ReductionSummary bilinear_experiment(unsigned q, std::size_t n, std::size_t delta, double epsilon,
                                     std::size_t trials, const RandomSource& rng) {
    ReductionSummary out;
    out.trials = trials;
    const Vector e0 = Vector::unit(n, 0);
    for (std::size_t t = 0; t < trials; ++t) {
        RandomSource local = rng.split(t);
        const OwfKey key = injective_keygen(q, n, delta, local);
        const Matrix m = random_invertible(key.field, n, local);
        const OwfImage image = evaluate(key, m);
        const Field field = key.field;
        const auto predictor = make_noisy_predictor<InstanceQuery>(
            [field, e0](const InstanceQuery& x) { return bilinear_truth(field, e0, e0, x); }, epsilon, q,
            local.next_u64());
        const BilinearResult r = bilinear_invert(key, image, predictor, e0, e0, epsilon, local);
        if (r.preimage) {
            ++out.recovered;
            out.exact += *r.preimage == m;
        }
        out.predictor_queries += predictor.queries();
    }
    return out;
}

}  // namespace glowf
