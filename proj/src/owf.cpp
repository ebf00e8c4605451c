#include "glowf/owf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "glowf/kernels.hpp"
#include "glowf/parallel.hpp"

namespace glowf {

namespace {

struct ValueClass {
    Vector value;
    std::vector<std::size_t> indices;
};

// Equal vectors grouped; classes ordered by first occurrence.
std::vector<ValueClass> classes_in_index_order(std::span<const Vector> vectors) {
    std::map<Vector, std::size_t> position;
    std::vector<ValueClass> out;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        auto [it, inserted] = position.emplace(vectors[i], out.size());
        if (inserted) out.push_back({vectors[i], {}});
        out[it->second].indices.push_back(i);
    }
    return out;
}

// Equal vectors grouped; classes ordered lexicographically by value.
std::vector<ValueClass> classes_in_value_order(std::span<const Vector> vectors) {
    std::map<Vector, std::vector<std::size_t>> grouped;
    for (std::size_t i = 0; i < vectors.size(); ++i) grouped[vectors[i]].push_back(i);
    std::vector<ValueClass> out;
    out.reserve(grouped.size());
    for (auto& [value, indices] : grouped) out.push_back({value, std::move(indices)});
    return out;
}

enum class SearchEnd { Exhausted, Stopped, BudgetExceeded };

// Finds invertible K with K (source multiset) = (target multiset). Sources are
// taken class by class in first-index order; targets are tried in lex order.
// A source class can only map to a target class of the same size, and a
// source already in the span of assigned ones has its image forced.
class Matcher {
public:
    using Visit = std::function<bool(const std::vector<std::size_t>&, const LinearMapBuilder&)>;

    Matcher(const Field& field, std::size_t n, std::span<const Vector> sources,
            std::span<const Vector> targets, std::uint64_t budget)
        : field_(field),
          n_(n),
          sources_(classes_in_index_order(sources)),
          targets_(classes_in_value_order(targets)),
          budget_(budget) {}

    SearchEnd run(const Visit& visit) {
        visit_ = &visit;
        if (!profiles_match()) return SearchEnd::Exhausted;
        assignment_.assign(sources_.size(), 0);
        used_.assign(targets_.size(), false);
        recurse(0, LinearMapBuilder(field_, n_));
        if (budget_hit_) return SearchEnd::BudgetExceeded;
        return stopped_ ? SearchEnd::Stopped : SearchEnd::Exhausted;
    }

    const std::vector<ValueClass>& sources() const noexcept { return sources_; }
    const std::vector<ValueClass>& targets() const noexcept { return targets_; }
    std::uint64_t nodes() const noexcept { return nodes_; }

    // Index permutation realizing a class assignment.
    std::vector<std::size_t> permutation(const std::vector<std::size_t>& assignment) const {
        std::size_t m = 0;
        for (const auto& c : sources_) m += c.indices.size();
        std::vector<std::size_t> pi(m);
        for (std::size_t i = 0; i < sources_.size(); ++i) {
            const auto& from = sources_[i].indices;
            const auto& to = targets_[assignment[i]].indices;
            for (std::size_t k = 0; k < from.size(); ++k) pi[from[k]] = to[k];
        }
        return pi;
    }

private:
    bool profiles_match() const {
        if (sources_.size() != targets_.size()) return false;
        std::vector<std::size_t> a, b;
        for (const auto& c : sources_) a.push_back(c.indices.size());
        for (const auto& c : targets_) b.push_back(c.indices.size());
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return a == b;
    }

    std::optional<std::size_t> target_with_value(const Vector& v) const {
        auto it = std::lower_bound(targets_.begin(), targets_.end(), v,
                                   [](const ValueClass& c, const Vector& x) { return c.value < x; });
        if (it == targets_.end() || it->value != v) return std::nullopt;
        return static_cast<std::size_t>(it - targets_.begin());
    }

    bool take(std::size_t i, std::size_t t, const LinearMapBuilder& builder) {
        used_[t] = true;
        assignment_[i] = t;
        const bool go_on = recurse(i + 1, builder);
        used_[t] = false;
        return go_on;
    }

    // Returns false when the whole search must stop.
    bool recurse(std::size_t i, const LinearMapBuilder& builder) {
        if (++nodes_ > budget_) {
            budget_hit_ = true;
            return false;
        }
        if (i == sources_.size()) {
            if (!(*visit_)(assignment_, builder)) {
                stopped_ = true;
                return false;
            }
            return true;
        }
        const ValueClass& source = sources_[i];
        if (auto forced = builder.forced_image(source.value)) {
            const auto t = target_with_value(*forced);
            if (!t || used_[*t] || targets_[*t].indices.size() != source.indices.size()) return true;
            return take(i, *t, builder);
        }
        for (std::size_t t = 0; t < targets_.size(); ++t) {
            if (used_[t] || targets_[t].indices.size() != source.indices.size()) continue;
            LinearMapBuilder next = builder;
            if (next.add(source.value, targets_[t].value) != LinearMapBuilder::Outcome::Independent) {
                continue;
            }
            if (!take(i, t, next)) return false;
        }
        return true;
    }

    const Field& field_;
    std::size_t n_;
    std::vector<ValueClass> sources_;
    std::vector<ValueClass> targets_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool budget_hit_ = false;
    bool stopped_ = false;
    const Visit* visit_ = nullptr;
    std::vector<std::size_t> assignment_;
    std::vector<bool> used_;
};

std::uint64_t saturating_factorial_product(const std::vector<ValueClass>& classes) {
    std::uint64_t out = 1;
    for (const auto& c : classes) {
        for (std::uint64_t k = 2; k <= c.indices.size(); ++k) {
            if (__builtin_mul_overflow(out, k, &out)) return UINT64_MAX;
        }
    }
    return out;
}

void check_key(const OwfKey& key) {
    for (std::size_t i = 0; i < key.vectors.size(); ++i) {
        if (key.vectors[i].size() != key.n) {
            throw std::invalid_argument("key vector " + std::to_string(i) + " has the wrong length");
        }
    }
}

}  // namespace

OwfImage OwfImage::from_unsorted(std::vector<Vector> vectors) {
    std::sort(vectors.begin(), vectors.end());
    return OwfImage{std::move(vectors)};
}

std::size_t default_delta(unsigned q, std::size_t n) {
    const double lnq = std::log(double(q));
    const double lnn = std::log(double(n));
    const double bound = (5.0 / (lnq * lnq)) * lnn * lnn;
    // Guard against ceil() rounding an exact integer up through float error.
    return static_cast<std::size_t>(std::ceil(bound - 1e-9));
}

OwfKey keygen(unsigned q, std::size_t n, std::optional<std::size_t> delta, RandomSource& rng) {
    if (n < 2) throw std::invalid_argument("keygen needs n >= 2");
    Field field(q);
    const std::size_t m = n + delta.value_or(default_delta(q, n));
    OwfKey key{field, n, {}, rng.seed()};
    key.vectors.reserve(m);
    for (std::size_t i = 0; i < m; ++i) key.vectors.push_back(random_vector(field, n, rng));
    return key;
}

OwfImage evaluate(const OwfKey& key, const Matrix& m) {
    if (m.rows() != key.n || m.cols() != key.n) throw std::invalid_argument("matrix must be n x n");
    if (!is_invertible(key.field, m)) throw SingularMatrix("f_V is only defined on invertible matrices");
    std::vector<Vector> out;
    out.reserve(key.m());
    for (const Vector& v : key.vectors) out.push_back(multiply(key.field, m, v));
    return OwfImage::from_unsorted(std::move(out));
}

OwfImage transform_image(const Field& field, const Matrix& a, const OwfImage& image) {
    std::vector<Vector> out;
    out.reserve(image.size());
    for (const Vector& w : image.vectors) out.push_back(multiply(field, a, w));
    return OwfImage::from_unsorted(std::move(out));
}

OwfKey transform_key(const OwfKey& key, const Matrix& b) {
    OwfKey out{key.field, key.n, {}, std::nullopt};
    out.vectors.reserve(key.m());
    for (const Vector& v : key.vectors) out.vectors.push_back(multiply(key.field, b, v));
    return out;
}

WitnessList consistent_permutations(const OwfKey& key, std::size_t cap, std::uint64_t node_budget) {
    check_key(key);
    WitnessList out;
    Matcher matcher(key.field, key.n, key.vectors, key.vectors, node_budget);
    const SearchEnd end = matcher.run([&](const std::vector<std::size_t>& assignment,
                                          const LinearMapBuilder& builder) {
        if (out.witnesses.size() >= cap) {
            out.complete = false;
            return false;
        }
        out.witnesses.push_back({matcher.permutation(assignment), builder.complete(),
                                 builder.determined(),
                                 saturating_factorial_product(matcher.sources())});
        return true;
    });
    if (end == SearchEnd::BudgetExceeded) out.complete = false;
    return out;
}

std::optional<bool> is_injective(const OwfKey& key, std::uint64_t node_budget) {
    check_key(key);
    // A K != I fixing span(V) pointwise exists whenever V does not span.
    if (rank_of(key.field, key.vectors, key.n) < key.n) return false;
    Matcher matcher(key.field, key.n, key.vectors, key.vectors, node_budget);
    const SearchEnd end = matcher.run([](const std::vector<std::size_t>&, const LinearMapBuilder& b) {
        return b.complete().is_identity();
    });
    switch (end) {
        case SearchEnd::Exhausted: return true;
        case SearchEnd::Stopped: return false;
        case SearchEnd::BudgetExceeded: return std::nullopt;
    }
    return std::nullopt;
}

InvertResult invert_backtracking(const OwfKey& key, const OwfImage& image, std::uint64_t node_budget) {
    check_key(key);
    InvertResult result;
    if (image.size() != key.m()) return result;
    for (const Vector& w : image.vectors) {
        if (w.size() != key.n) return result;
    }
    Matcher matcher(key.field, key.n, key.vectors, image.vectors, node_budget);
    const SearchEnd end = matcher.run([&](const std::vector<std::size_t>&, const LinearMapBuilder& b) {
        Matrix candidate = b.complete();
        if (evaluate(key, candidate) != image) return true;
        result.preimage = std::move(candidate);
        return false;
    });
    result.nodes = matcher.nodes();
    switch (end) {
        case SearchEnd::Stopped: result.status = InvertStatus::Found; break;
        case SearchEnd::Exhausted: result.status = InvertStatus::NotInImage; break;
        case SearchEnd::BudgetExceeded: result.status = InvertStatus::BudgetExceeded; break;
    }
    return result;
}

InvertResult invert_exhaustive(const OwfKey& key, const OwfImage& image) {
    check_key(key);
    InvertResult result;
    if (image.size() != key.m()) return result;
    for_each_invertible(key.field, key.n, [&](const Matrix& m) {
        ++result.nodes;
        if (evaluate(key, m) != image) return true;
        result.preimage = m;
        result.status = InvertStatus::Found;
        return false;
    });
    return result;
}

std::vector<Matrix> all_preimages(const OwfKey& key, const OwfImage& image, std::uint64_t node_budget) {
    check_key(key);
    std::vector<Matrix> out;
    if (image.size() != key.m()) return out;
    Matcher matcher(key.field, key.n, key.vectors, image.vectors, node_budget);
    const SearchEnd end = matcher.run([&](const std::vector<std::size_t>&, const LinearMapBuilder& b) {
        out.push_back(b.complete());
        return true;
    });
    if (end == SearchEnd::BudgetExceeded) throw CapExceeded("preimage enumeration exceeded its node budget");
    return out;
}

SelfReduceResult self_reduce(const Inverter& inverter, const OwfKey& key, const OwfImage& image,
                             std::size_t trials, RandomSource& rng) {
    SelfReduceResult result;
    for (std::size_t t = 0; t < trials; ++t) {
        const Matrix a = random_invertible(key.field, key.n, rng);
        const OwfImage shifted = transform_image(key.field, a, image);
        ++result.calls;
        const std::optional<Matrix> found = inverter.invert(key, shifted);
        if (!found) continue;
        Matrix candidate = multiply(key.field, *inverse(key.field, a), *found);
        if (!is_invertible(key.field, candidate)) continue;
        if (evaluate(key, candidate) == image) {
            result.preimage = std::move(candidate);
            return result;
        }
    }
    return result;
}

OrbitInstance orbit_randomize(const OwfKey& key, const OwfImage& image, RandomSource& rng) {
    Matrix b = random_invertible(key.field, key.n, rng);
    return {transform_key(key, b), image, std::move(b)};
}

Matrix unblind(const Field& field, const OrbitInstance& instance, const Matrix& preimage) {
    return multiply(field, preimage, instance.unblind);
}

std::vector<InjectivityRow> injectivity_experiment(unsigned q, std::size_t n,
                                                   std::span<const std::size_t> deltas,
                                                   std::size_t trials, const RandomSource& rng) {
    std::vector<InjectivityRow> rows;
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        std::vector<std::optional<bool>> outcome(trials);
        const RandomSource stream = rng.split(d);
        parallel_for(trials, [&](std::size_t t) {
            RandomSource trial_rng = stream.split(t);
            outcome[t] = is_injective(keygen(q, n, deltas[d], trial_rng));
        });
        InjectivityRow row;
        row.delta = deltas[d];
        row.m = n + deltas[d];
        row.trials = trials;
        for (const auto& o : outcome) {
            if (!o) {
                ++row.undecided;
            } else if (*o) {
                ++row.injective;
            }
        }
        const std::size_t decided = trials - row.undecided;
        if (decided > 0) {
            row.probability = double(row.injective) / double(decided);
            row.std_error = std::sqrt(row.probability * (1.0 - row.probability) / double(decided));
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace glowf
