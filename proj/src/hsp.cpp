#include "glowf/hsp.hpp"

#include <map>

#include "glowf/parallel.hpp"

namespace glowf {

WreathElement WreathElement::identity(std::size_t n) {
    return {Matrix::identity(n), Matrix::identity(n), false};
}

WreathElement wreath_mul(const Field& field, const WreathElement& x, const WreathElement& y) {
    if (x.g1.rows() != y.g1.rows()) throw std::invalid_argument("wreath elements differ in size");
    const Matrix& b1 = x.z ? y.g2 : y.g1;
    const Matrix& b2 = x.z ? y.g1 : y.g2;
    return {multiply(field, x.g1, b1), multiply(field, x.g2, b2), x.z != y.z};
}

WreathElement wreath_inverse(const Field& field, const WreathElement& x) {
    const auto i1 = inverse(field, x.g1);
    const auto i2 = inverse(field, x.g2);
    if (!i1 || !i2) throw SingularMatrix("wreath element has a singular block");
    if (x.z) return {*i2, *i1, true};
    return {*i1, *i2, false};
}

Matrix embed_gl2n(const WreathElement& x) {
    const std::size_t n = x.g1.rows();
    Matrix out(2 * n, 2 * n);
    // z = 0: g1 top-left, g2 bottom-right. z = 1: g1 top-right, g2 bottom-left.
    const std::size_t c1 = x.z ? n : 0;
    const std::size_t c2 = x.z ? 0 : n;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            out(r, c1 + c) = x.g1(r, c);
            out(n + r, c2 + c) = x.g2(r, c);
        }
    }
    return out;
}

std::vector<WreathElement> enumerate_wreath(const Field& field, std::size_t n, std::uint64_t cap) {
    const std::vector<Matrix> gl = enumerate_invertible(field, n, cap);
    const std::uint64_t size = 2 * std::uint64_t(gl.size()) * gl.size();
    if (size > cap) throw CapExceeded("wreath product larger than the enumeration cap");
    std::vector<WreathElement> out;
    out.reserve(size);
    for (bool z : {false, true}) {
        for (const Matrix& a : gl) {
            for (const Matrix& b : gl) out.push_back({a, b, z});
        }
    }
    return out;
}

OwfImage HiddenShiftInstance::f2(const Matrix& n) const {
    return evaluate(key, multiply(key.field, n, shift));
}

HiddenShiftInstance make_hidden_shift(const OwfKey& key, const Matrix& m) {
    if (!is_invertible(key.field, m)) throw SingularMatrix("hidden shift must be invertible");
    return {key, m};
}

HspValue HspInstance::f(const WreathElement& x) const {
    if (x.z) return {shift.f2(x.g1), shift.f1(x.g2)};
    return {shift.f1(x.g1), shift.f2(x.g2)};
}

HspInstance make_hsp_oracle(const OwfKey& key, const Matrix& m, std::uint64_t node_budget) {
    HiddenShiftInstance shift = make_hidden_shift(key, m);
    WreathElement alpha{*inverse(key.field, m), m, true};
    return {std::move(shift), std::move(alpha), is_injective(key, node_budget)};
}

bool verify_hsp_promise(const HspInstance& instance, std::uint64_t cap) {
    const Field& field = instance.shift.key.field;
    const std::vector<WreathElement> group = enumerate_wreath(field, instance.shift.key.n, cap);
    std::vector<HspValue> values(group.size());
    parallel_for(group.size(), [&](std::size_t i) { values[i] = instance.f(group[i]); });

    std::map<HspValue, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < group.size(); ++i) classes[values[i]].push_back(i);
    for (const auto& [value, members] : classes) {
        if (members.size() != 2) return false;
        if (wreath_mul(field, group[members[0]], instance.alpha) != group[members[1]] &&
            wreath_mul(field, group[members[1]], instance.alpha) != group[members[0]]) {
            return false;
        }
    }
    return true;
}

}  // namespace glowf
