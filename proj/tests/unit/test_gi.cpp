#include <doctest.h>

#include <numeric>

#include "glowf/gi.hpp"

using namespace glowf;

namespace {

SimpleGraph path3() { return SimpleGraph(3, {{0, 1}, {1, 2}}); }
SimpleGraph triangle() { return SimpleGraph(3, {{0, 1}, {1, 2}, {0, 2}}); }

VertexMap random_permutation(std::size_t n, RandomSource& rng) {
    VertexMap p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng.engine());
    return p;
}

}  // namespace

TEST_SUITE("gi") {

TEST_CASE("graph validation") {
    CHECK_THROWS_AS(SimpleGraph(3, {{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(SimpleGraph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(SimpleGraph(3, {{0, 3}}), std::invalid_argument);
    CHECK(SimpleGraph(3, {{2, 0}}).edges() == std::vector<SimpleGraph::Edge>{{0, 2}});
}

TEST_CASE("encode_graph") {
    CHECK(encode_graph(path3(), 3) == std::vector<Vector>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 1, 1}});
    CHECK(encode_graph(SimpleGraph(4, {}), 2).size() == 4);
    auto tri = encode_graph(triangle(), 2);
    std::sort(tri.begin(), tri.end());
    CHECK(tri == std::vector<Vector>{{0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {1, 0, 0}, {1, 0, 1}, {1, 1, 0}});
}

TEST_CASE("reduce_pair") {
    const auto same = reduce_pair(path3(), path3(), 2);
    REQUIRE(same);
    CHECK(evaluate(same->key, Matrix::identity(3)) == same->image);
    CHECK_FALSE(reduce_pair(path3(), triangle(), 2));

    // Relabeling by pi is solved by the permutation matrix P with P e_u = e_pi(u).
    const VertexMap pi{2, 0, 1};
    const auto pair = reduce_pair(path3(), relabel(path3(), pi), 3);
    REQUIRE(pair);
    Matrix p(3, 3);
    for (std::size_t u = 0; u < 3; ++u) p(pi[u], u) = 1;
    CHECK(evaluate(pair->key, p) == pair->image);
}

TEST_CASE("extract_isomorphism") {
    CHECK(extract_isomorphism(Matrix::identity(3), path3(), path3(), 3) == VertexMap{0, 1, 2});
    SUBCASE("green/red recovery on the triangle") {
        const Matrix m = Matrix::from_columns(std::vector<Vector>{{0, 1, 1}, {1, 0, 1}, {0, 0, 1}}, 3);
        const Field f2(2);
        const auto pair = reduce_pair(triangle(), triangle(), 2);
        CHECK(evaluate(pair->key, m) == pair->image);
        const VertexMap pi = extract_isomorphism(m, triangle(), triangle(), 2);
        CHECK(pi == VertexMap{1, 0, 2});
        CHECK(is_isomorphism(triangle(), triangle(), pi));
    }
    SUBCASE("a weight-2 column at q = 3 is rejected") {
        const Matrix m = Matrix::from_columns(std::vector<Vector>{{0, 1, 1}, {1, 0, 1}, {0, 0, 1}}, 3);
        CHECK_THROWS_AS(extract_isomorphism(m, triangle(), triangle(), 3), InvalidWitness);
    }
    SUBCASE("a matrix that does not map V onto W is rejected") {
        CHECK_THROWS_AS(extract_isomorphism(Matrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}, path3(), path3(), 2),
                        InvalidWitness);
    }
}

TEST_CASE("brute_force_iso") {
    CHECK(brute_force_iso(path3(), path3()) == VertexMap{0, 1, 2});
    CHECK_FALSE(brute_force_iso(triangle(), path3()));
    RandomSource rng(1);
    const SimpleGraph g = random_graph(6, 0.5, rng);
    const SimpleGraph h = relabel(g, random_permutation(6, rng));
    const auto pi = brute_force_iso(g, h);
    REQUIRE(pi);
    CHECK(is_isomorphism(g, h, *pi));
}

TEST_CASE("decide_isomorphic examples") {
    RandomSource rng(2);
    const SimpleGraph g = random_graph(5, 0.5, rng);
    const SimpleGraph h = relabel(g, random_permutation(5, rng));
    for (unsigned q : {2u, 3u}) {
        const IsoDecision d = decide_isomorphic(g, h, q);
        REQUIRE(d.status == IsoStatus::Isomorphic);
        CHECK(is_isomorphism(g, h, d.pi));
    }
    const SimpleGraph path4(4, {{0, 1}, {1, 2}, {2, 3}});
    const SimpleGraph star4(4, {{0, 1}, {0, 2}, {0, 3}});
    CHECK(decide_isomorphic(path4, star4, 2).status == IsoStatus::NonIsomorphic);
    CHECK(decide_isomorphic(path4, star4, 3).status == IsoStatus::NonIsomorphic);
}

TEST_CASE("decide_isomorphic agrees with brute force on random pairs") {
    RandomSource rng(3);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + rng.uniform(5);
        const SimpleGraph g = random_graph(n, 0.5, rng);
        const SimpleGraph h = (t % 2 == 0) ? relabel(g, random_permutation(n, rng)) : random_graph(n, 0.5, rng);
        const bool expect = brute_force_iso(g, h).has_value();
        for (unsigned q : {2u, 3u}) {
            const IsoDecision d = decide_isomorphic(g, h, q);
            REQUIRE(d.status != IsoStatus::BudgetExceeded);
            CHECK((d.status == IsoStatus::Isomorphic) == expect);
            if (d.status == IsoStatus::Isomorphic) CHECK(is_isomorphism(g, h, d.pi));
        }
    }
}

TEST_CASE("at q = 3 every witness between small graphs is a permutation matrix") {
    const Field f3(3);
    auto is_permutation_matrix = [](const Matrix& m) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const Vector col = m.column(c);
            if (col.weight() != 1 || std::count(col.entries.begin(), col.entries.end(), 1) != 1) return false;
        }
        return true;
    };
    SUBCASE("three vertices, exhaustive over GL_3(F_3)") {
        const auto gl = enumerate_invertible(f3, 3);
        for (const SimpleGraph& g1 : all_graphs(3)) {
            for (const SimpleGraph& g2 : all_graphs(3)) {
                const auto pair = reduce_pair(g1, g2, 3);
                if (!pair) continue;
                for (const Matrix& m : gl) {
                    if (evaluate(pair->key, m) == pair->image) CHECK(is_permutation_matrix(m));
                }
            }
        }
    }
    SUBCASE("four vertices, all solutions by backtracking") {
        const auto graphs = all_graphs(4);
        std::size_t witnesses = 0;
        for (const SimpleGraph& g1 : graphs) {
            for (const SimpleGraph& g2 : graphs) {
                const auto pair = reduce_pair(g1, g2, 3);
                if (!pair) continue;
                for (const Matrix& m : all_preimages(pair->key, pair->image)) {
                    ++witnesses;
                    CHECK(is_permutation_matrix(m));
                }
            }
        }
        CHECK(witnesses > 0);
    }
}

TEST_CASE("q = 2 recovery holds for every witness between small graphs") {
    for (const SimpleGraph& g1 : all_graphs(4)) {
        for (const SimpleGraph& g2 : all_graphs(4)) {
            const auto pair = reduce_pair(g1, g2, 2);
            if (!pair) continue;
            for (const Matrix& m : all_preimages(pair->key, pair->image)) {
                CHECK(is_isomorphism(g1, g2, extract_isomorphism(m, g1, g2, 2)));
            }
        }
    }
}

}
