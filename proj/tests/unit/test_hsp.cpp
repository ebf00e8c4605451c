#include <doctest.h>

#include <set>

#include "glowf/hsp.hpp"

using namespace glowf;

namespace {

const Field f2(2);

OwfKey injective_key() {
    return {f2, 2, {{1, 0}, {0, 1}, {0, 1}, {1, 1}, {1, 1}, {1, 1}}, std::nullopt};
}

}  // namespace

TEST_SUITE("hsp") {

TEST_CASE("wreath group axioms over GL_2(F_2) wr Z_2") {
    const auto g = enumerate_wreath(f2, 2);
    REQUIRE(g.size() == 72);
    const std::set<WreathElement> all(g.begin(), g.end());
    CHECK(all.size() == 72);
    const WreathElement e = WreathElement::identity(2);
    for (const auto& x : g) {
        CHECK(wreath_mul(f2, e, x) == x);
        CHECK(wreath_mul(f2, x, e) == x);
        CHECK(wreath_mul(f2, x, wreath_inverse(f2, x)) == e);
        CHECK(wreath_mul(f2, wreath_inverse(f2, x), x) == e);
    }
    for (const auto& x : g) {
        for (const auto& y : g) {
            const WreathElement xy = wreath_mul(f2, x, y);
            REQUIRE(all.count(xy));
            CHECK(embed_gl2n(xy) == multiply(f2, embed_gl2n(x), embed_gl2n(y)));
        }
    }
    // associativity on a sampled third factor
    RandomSource rng(1);
    for (int t = 0; t < 2000; ++t) {
        const auto& x = g[rng.uniform(72)];
        const auto& y = g[rng.uniform(72)];
        const auto& z = g[rng.uniform(72)];
        CHECK(wreath_mul(f2, wreath_mul(f2, x, y), z) == wreath_mul(f2, x, wreath_mul(f2, y, z)));
    }
}

TEST_CASE("embedding") {
    CHECK(embed_gl2n(WreathElement::identity(2)).is_identity());
    const auto g = enumerate_wreath(f2, 2);
    std::set<Matrix> images;
    for (const auto& x : g) {
        const Matrix m = embed_gl2n(x);
        CHECK(is_invertible(f2, m));
        images.insert(m);
    }
    CHECK(images.size() == 72);
    const WreathElement x{Matrix{{1, 1}, {0, 1}}, Matrix{{0, 1}, {1, 0}}, true};
    CHECK(embed_gl2n(x) == Matrix{{0, 0, 1, 1}, {0, 0, 0, 1}, {0, 1, 0, 0}, {1, 0, 0, 0}});
}

TEST_CASE("hidden shift instance") {
    const OwfKey key = injective_key();
    const Matrix m{{1, 1}, {0, 1}};
    const HiddenShiftInstance h = make_hidden_shift(key, m);
    CHECK(h.f1(Matrix::identity(2)) == evaluate(key, Matrix::identity(2)));
    CHECK(h.f2(Matrix::identity(2)) == evaluate(key, m));
    for (const Matrix& n : enumerate_invertible(f2, 2)) CHECK(h.f2(n) == h.f1(multiply(f2, n, m)));
    CHECK_THROWS_AS(make_hidden_shift(key, Matrix{{1, 1}, {1, 1}}), SingularMatrix);
}

TEST_CASE("hidden subgroup oracle") {
    const OwfKey key = injective_key();
    const Matrix m{{0, 1}, {1, 1}};
    const HspInstance inst = make_hsp_oracle(key, m);
    CHECK(inst.promise_exact == true);
    const WreathElement e = WreathElement::identity(2);
    CHECK(inst.f(e) == HspValue{evaluate(key, Matrix::identity(2)), evaluate(key, m)});
    CHECK(wreath_mul(f2, inst.alpha, inst.alpha) == e);
    for (const auto& x : enumerate_wreath(f2, 2)) {
        CHECK(inst.f(wreath_mul(f2, x, inst.alpha)) == inst.f(x));
        CHECK(inst.f(wreath_mul(f2, x, e)) == inst.f(x));
    }
    CHECK(verify_hsp_promise(inst));
}

TEST_CASE("promise fails for a non-injective key") {
    const OwfKey key{f2, 2, {{1, 0}, {0, 1}, {1, 1}}, std::nullopt};
    const HspInstance inst = make_hsp_oracle(key, Matrix::identity(2));
    CHECK(inst.promise_exact == false);
    CHECK_FALSE(verify_hsp_promise(inst));
}

TEST_CASE("promise holds over GL_2(F_3) for an injective key") {
    const Field f3(3);
    RandomSource rng(2);
    OwfKey key = keygen(3, 2, 4, rng);
    while (!is_injective(key).value_or(false)) key = keygen(3, 2, 4, rng);
    const HspInstance inst = make_hsp_oracle(key, random_invertible(f3, 2, rng));
    CHECK(verify_hsp_promise(inst));
}

}
