#include <doctest.h>

#include <map>

#include "glowf/linalg.hpp"
#include "oracles.hpp"

using namespace glowf;

TEST_SUITE("field") {

TEST_CASE("field arithmetic against integer residues") {
    for (unsigned q : {2u, 3u, 5u, 251u}) {
        const Field f(q);
        for (unsigned a = 0; a < q; ++a) {
            for (unsigned b = 0; b < q; ++b) {
                CHECK(f.add(Scalar(a), Scalar(b)) == (a + b) % q);
                CHECK(f.sub(Scalar(a), Scalar(b)) == (a + q - b) % q);
                CHECK(f.mul(Scalar(a), Scalar(b)) == (a * b) % q);
            }
            if (a) CHECK(f.mul(Scalar(a), f.inv(Scalar(a))) == 1);
        }
    }
    CHECK_THROWS(Field(4));
    CHECK_THROWS(Field(1));
    CHECK_THROWS(Field(257));
    CHECK_THROWS(Field(3).inv(0));
}

TEST_CASE("vectors order lexicographically with index 0 most significant") {
    CHECK(Vector{0, 1, 1} < Vector{1, 0, 0});
    CHECK(Vector{1, 0, 0} < Vector{1, 0, 1});
    CHECK(Vector{2, 0} > Vector{1, 2});
    CHECK(Vector{0, 1, 1}.weight() == 2);
}

TEST_CASE("bit packing round trips") {
    RandomSource rng(5);
    const Field f2(2);
    for (std::size_t n : {1u, 63u, 64u, 65u, 200u}) {
        const Vector v = random_vector(f2, n, rng);
        CHECK(unpack_bits(pack_bits(v), n) == v);
    }
}

TEST_CASE("random streams are reproducible and splits ignore consumption") {
    RandomSource a(42), b(42);
    for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
    RandomSource c(42);
    const auto s1 = c.split(3).next_u64();
    c.next_u64();
    CHECK(c.split(3).next_u64() == s1);
    CHECK(RandomSource(42).split(4).next_u64() != s1);
}

}

TEST_SUITE("linalg") {

TEST_CASE("inner products") {
    CHECK(inner_product(Field(2), {1, 0}, {0, 1}) == 0);
    CHECK(inner_product(Field(2), {1, 1}, {1, 1}) == 0);
    CHECK(inner_product(Field(3), {1, 2}, {2, 2}) == 0);
    CHECK_THROWS_AS(inner_product(Field(2), {1, 0}, {1}), std::invalid_argument);
}

TEST_CASE("inverse and rank examples") {
    const Field f2(2);
    CHECK(inverse(f2, Matrix::identity(3)) == Matrix::identity(3));
    CHECK(inverse(f2, Matrix{{1, 1}, {0, 1}}) == Matrix{{1, 1}, {0, 1}});
    CHECK_FALSE(inverse(f2, Matrix{{1, 1}, {1, 1}}).has_value());
    CHECK_THROWS(inverse(f2, Matrix(2, 3)));
    CHECK(rank(f2, Matrix(3, 3)) == 0);
    CHECK(rank(f2, Matrix::identity(4)) == 4);
    CHECK(rank(f2, Matrix{{1, 1}, {1, 1}}) == 1);
}

TEST_CASE("inverse is two-sided on all of GL_2 for q = 2, 3") {
    for (int q : {2, 3}) {
        const Field f(q);
        oracle::for_each_gl(q, 2, [&](const oracle::Grid& g) {
            const Matrix m = oracle::from_grid(g);
            const auto inv = inverse(f, m);
            REQUIRE(inv.has_value());
            CHECK(multiply(f, *inv, m).is_identity());
            CHECK(multiply(f, m, *inv).is_identity());
        });
    }
}

TEST_CASE("rank agrees with the determinant oracle and with the transpose") {
    RandomSource rng(6);
    for (int q : {2, 3, 5}) {
        const Field f(q);
        for (int t = 0; t < 200; ++t) {
            const std::size_t n = 1 + rng.uniform(4);
            const Matrix m = random_matrix(f, n, n, rng);
            CHECK((rank(f, m) == n) == (oracle::det(oracle::to_grid(m), q) != 0));
            CHECK(rank(f, m) == rank(f, transpose(m)));
        }
        for (int t = 0; t < 30; ++t) {
            const Matrix m = random_matrix(f, 7, 19, rng);
            CHECK(rank(f, m) == rank(f, transpose(m)));
        }
    }
}

TEST_CASE("matrix products match the naive oracle") {
    RandomSource rng(7);
    const Field f(7);
    const Matrix a = random_matrix(f, 4, 5, rng), b = random_matrix(f, 5, 3, rng);
    CHECK(oracle::to_grid(multiply(f, a, b)) == oracle::matmul(oracle::to_grid(a), oracle::to_grid(b), 7));
    CHECK(trace(Field(2), Matrix::identity(2)) == 0);
}

TEST_CASE("solve_linear outcomes") {
    const Field f2(2);
    SUBCASE("standard basis constraints give the target columns") {
        const Matrix v = Matrix::identity(3);
        const Matrix w{{1, 1, 0}, {0, 1, 1}, {1, 0, 1}};
        const SolveResult r = solve_linear(Field(3), v, w);
        REQUIRE(r.status == SolveStatus::Unique);
        for (std::size_t i = 0; i < 3; ++i) CHECK(r.solution.column(i) == w.row_vector(i));
    }
    SUBCASE("contradictory constraints") {
        CHECK(solve_linear(f2, Matrix{{1, 0}, {1, 0}}, Matrix{{1, 0}, {0, 1}}).status == SolveStatus::NoSolution);
    }
    SUBCASE("rank deficit") {
        CHECK(solve_linear(f2, Matrix{{1, 0}}, Matrix{{0, 1}}).status == SolveStatus::Underdetermined);
    }
    SUBCASE("re-application reproduces the targets") {
        RandomSource rng(8);
        const Field f(5);
        for (int t = 0; t < 50; ++t) {
            const Matrix x = random_invertible(f, 4, rng);
            std::vector<Vector> vs, ws;
            for (int i = 0; i < 7; ++i) {
                vs.push_back(random_vector(f, 4, rng));
                ws.push_back(multiply(f, x, vs.back()));
            }
            const SolveResult r = solve_linear(f, Matrix::from_rows(vs, 4), Matrix::from_rows(ws, 4));
            if (rank_of(f, vs, 4) < 4) {
                CHECK(r.status == SolveStatus::Underdetermined);
                continue;
            }
            REQUIRE(r.status == SolveStatus::Unique);
            CHECK(r.solution == x);
        }
    }
}

TEST_CASE("random_invertible is uniform on GL_2(F_2)") {
    RandomSource rng(9);
    const Field f2(2);
    CHECK(random_invertible(f2, 1, rng) == Matrix{{1}});
    std::map<Matrix, int> counts;
    const int samples = 10000;
    for (int i = 0; i < samples; ++i) ++counts[random_invertible(f2, 2, rng)];
    CHECK(counts.size() == 6);
    for (const auto& [m, c] : counts) CHECK(std::abs(double(c) / samples - 1.0 / 6) < 0.02);
}

TEST_CASE("rejection acceptance at n = 10 over F_2") {
    RandomSource rng(10);
    const Field f2(2);
    std::size_t attempts = 0, total = 0;
    const int samples = 3000;
    for (int i = 0; i < samples; ++i) {
        random_invertible(f2, 10, rng, &attempts);
        total += attempts;
    }
    CHECK(std::abs(double(samples) / double(total) - 0.2891) < 0.02);
}

TEST_CASE("random_invertible_mapping") {
    RandomSource rng(11);
    const Field f2(2);
    const Vector e1{1, 0}, e2{0, 1};
    std::map<Matrix, int> counts;
    for (int i = 0; i < 4000; ++i) {
        const Matrix a = random_invertible_mapping(f2, e1, e1, rng);
        CHECK(multiply(f2, a, e1) == e1);
        ++counts[a];
    }
    REQUIRE(counts.size() == 2);
    CHECK(counts.count(Matrix::identity(2)));
    CHECK(counts.count(Matrix{{1, 1}, {0, 1}}));
    for (const auto& [m, c] : counts) CHECK(std::abs(c / 4000.0 - 0.5) < 0.04);

    const Matrix b = random_invertible_mapping(f2, e1, e2, rng);
    CHECK(is_invertible(f2, b));
    CHECK(multiply(f2, b, e1) == e2);

    const Field f7(7);
    for (int t = 0; t < 100; ++t) {
        Vector u = random_vector(f7, 5, rng), w = random_vector(f7, 5, rng);
        if (u.is_zero() || w.is_zero()) continue;
        const Matrix a = random_invertible_mapping(f7, u, w, rng);
        CHECK(is_invertible(f7, a));
        CHECK(multiply(f7, a, u) == w);
    }
    CHECK_THROWS_AS(random_invertible_mapping(f2, Vector{0, 0}, e1, rng), std::invalid_argument);
}

TEST_CASE("enumerate_invertible counts and distinctness") {
    CHECK(enumerate_invertible(Field(3), 1).size() == 2);
    CHECK(enumerate_invertible(Field(2), 2).size() == 6);
    CHECK(enumerate_invertible(Field(3), 2).size() == 48);
    for (unsigned q : {2u, 3u}) {
        for (std::size_t n = 1; n <= 3; ++n) {
            const auto all = enumerate_invertible(Field(q), n);
            CHECK(all.size() == oracle::gl_order(q, n));
            CHECK(std::is_sorted(all.begin(), all.end()));
            CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
            CHECK(general_linear_order(q, n) == oracle::gl_order(q, n));
        }
    }
    CHECK_THROWS_AS(enumerate_invertible(Field(2), 5), CapExceeded);
}

TEST_CASE("invertibility probability") {
    CHECK(invertible_probability(2, 2) == doctest::Approx(0.375));
    CHECK(invertible_probability(2, 10) == doctest::Approx(0.289070).epsilon(1e-5));
    CHECK(invertible_probability_limit(2) == doctest::Approx(0.288788).epsilon(1e-5));
    // q^(n^2) * alpha equals the group order
    CHECK(invertible_probability(3, 2) * 81 == doctest::Approx(48));
}

TEST_CASE("LinearMapBuilder outcomes and completion") {
    const Field f2(2);
    LinearMapBuilder b(f2, 3);
    using O = LinearMapBuilder::Outcome;
    CHECK(b.add({1, 0, 0}, {0, 1, 0}) == O::Independent);
    CHECK(b.add({1, 0, 0}, {0, 1, 0}) == O::Consistent);
    CHECK(b.add({1, 0, 0}, {0, 0, 1}) == O::Inconsistent);
    CHECK(b.add({0, 1, 0}, {0, 1, 0}) == O::Singular);
    CHECK(b.add({1, 1, 0}, {0, 1, 1}) == O::Independent);
    CHECK(b.forced_image({0, 1, 0}) == Vector{0, 0, 1});
    CHECK_FALSE(b.forced_image({0, 0, 1}).has_value());
    CHECK_FALSE(b.determined());
    const Matrix k = b.complete();
    CHECK(is_invertible(f2, k));
    CHECK(multiply(f2, k, Vector{1, 0, 0}) == Vector{0, 1, 0});
    CHECK(multiply(f2, k, Vector{0, 1, 0}) == Vector{0, 0, 1});
}

}
