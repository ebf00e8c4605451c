#include "glowf/perm_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "glowf/hardcore.hpp"
#include "glowf/parallel.hpp"

namespace glowf {

Permutation::Permutation(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
    std::vector<bool> seen(mapping_.size(), false);
    for (std::size_t x : mapping_) {
        if (x >= mapping_.size() || seen[x]) throw std::invalid_argument("mapping is not a bijection");
        seen[x] = true;
    }
}

Permutation Permutation::identity(std::size_t k) {
    std::vector<std::size_t> m(k);
    std::iota(m.begin(), m.end(), 0);
    return Permutation(std::move(m));
}

std::vector<std::size_t> Permutation::cycle_lengths() const {
    std::vector<std::size_t> out;
    std::vector<bool> seen(size(), false);
    for (std::size_t start = 0; start < size(); ++start) {
        if (seen[start]) continue;
        std::size_t len = 0;
        for (std::size_t x = start; !seen[x]; x = mapping_[x]) {
            seen[x] = true;
            ++len;
        }
        out.push_back(len);
    }
    return out;
}

std::size_t Permutation::cycle_count() const { return cycle_lengths().size(); }

std::size_t transposition_count(const Permutation& p) { return p.size() - p.cycle_count(); }

RationalPoly::RationalPoly(std::vector<Rational> coefficients) : c_(std::move(coefficients)) { trim(); }

void RationalPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational RationalPoly::evaluate(const Rational& z) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double RationalPoly::evaluate(double z) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + it->convert_to<double>();
    return acc;
}

RationalPoly RationalPoly::operator*(const RationalPoly& other) const {
    if (c_.empty() || other.c_.empty()) return {};
    std::vector<Rational> out(c_.size() + other.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        for (std::size_t j = 0; j < other.c_.size(); ++j) out[i + j] += c_[i] * other.c_[j];
    }
    return RationalPoly(std::move(out));
}

std::string RationalPoly::to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0 || c_[i] != 1) os << c_[i];
        if (i >= 1) os << 'z';
        if (i >= 2) os << '^' << i;
    }
    return os.str();
}

RationalPoly qk_bruteforce(std::size_t k) {
    if (k > 9) throw CapExceeded("qk_bruteforce supports k <= 9");
    std::vector<std::uint64_t> counts(std::max<std::size_t>(k, 1), 0);
    std::vector<std::size_t> m(k);
    std::iota(m.begin(), m.end(), 0);
    do {
        ++counts[transposition_count(Permutation(m))];
    } while (std::next_permutation(m.begin(), m.end()));
    std::vector<Rational> c;
    for (std::uint64_t x : counts) c.emplace_back(x);
    return RationalPoly(std::move(c));
}

RationalPoly qk_product(std::size_t k) {
    RationalPoly out({Rational(1)});
    for (std::size_t j = 0; j < k; ++j) out = out * RationalPoly({Rational(1), Rational(j)});
    return out;
}

BoundCheck qk_bound_check(std::size_t k, double z) {
    if (k == 0 || !(z > 0.0) || !(z * double(k) < 1.0)) {
        throw std::domain_error("qk_bound_check needs 0 < z < 1/k");
    }
    BoundCheck out;
    out.lhs = qk_product(k).evaluate(z);
    const double kd = double(k);
    // log form keeps (1 - zk)^(-1/z) finite for small z
    out.rhs = std::exp(1.0 + 0.5 * std::log(kd) - kd - std::log1p(-z * kd) / z);
    out.ok = out.lhs <= out.rhs * (1.0 + 1e-9);
    return out;
}

IgSummary ig_experiment(std::size_t n, std::size_t m, unsigned q, std::size_t trials, const RandomSource& rng) {
    const Field field(q);
    std::vector<std::uint64_t> sizes(trials);
    parallel_for(trials, [&](std::size_t t) {
        RandomSource local = rng.split(t);
        std::vector<Vector> v;
        v.reserve(m);
        for (std::size_t i = 0; i < m; ++i) v.push_back(random_vector(field, n, local));
        const Matrix mm = random_invertible(field, n, local);
        std::vector<Vector> w;
        w.reserve(m);
        for (const Vector& x : v) w.push_back(multiply(field, mm, x));
        sizes[t] = make_signature_table(field, draw_family(field, n, m, local), w).ig_size();
    });
    IgSummary out{n, m, trials, 0.0, 0, 0.0};
    for (std::uint64_t s : sizes) {
        out.mean += double(s);
        out.max = std::max(out.max, s);
    }
    if (trials > 0) out.mean /= double(trials);
    out.mean_over_sqrt_m = out.mean / std::sqrt(double(m));
    return out;
}

std::uint64_t ig_bruteforce(const Field& field, std::span<const Vector> g, std::span<const Vector> w) {
    if (w.size() > 8) throw CapExceeded("ig_bruteforce supports m <= 8");
    auto signature = [&](const Vector& x) {
        std::vector<Scalar> s;
        for (const Vector& y : g) s.push_back(inner_product(field, y, x));
        return s;
    };
    std::vector<std::vector<Scalar>> sig;
    for (const Vector& x : w) sig.push_back(signature(x));
    std::vector<std::size_t> p(w.size());
    std::iota(p.begin(), p.end(), 0);
    std::uint64_t count = 0;
    do {
        bool keeps = true;
        for (std::size_t i = 0; i < p.size() && keeps; ++i) keeps = sig[i] == sig[p[i]];
        count += keeps;
    } while (std::next_permutation(p.begin(), p.end()));
    return count;
}

}  // namespace glowf
