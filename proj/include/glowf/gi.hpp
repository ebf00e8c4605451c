#pragma once

// Graph isomorphism as an instance of inverting f_V: vertices become basis
// vectors, edges become sums of two basis vectors.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "glowf/owf.hpp"

namespace glowf {

/// Raised when a witness contradicts the structure the reduction relies on.
struct InvalidWitness : std::logic_error {
    using std::logic_error::logic_error;
};

/// Undirected simple graph on vertices 0..n-1. Edges are stored with u < v,
/// sorted and without duplicates.
class SimpleGraph {
public:
    using Edge = std::pair<std::size_t, std::size_t>;

    /// Throws std::invalid_argument on self-loops, duplicate or out-of-range edges.
    SimpleGraph(std::size_t vertices, std::vector<Edge> edges);

    std::size_t vertex_count() const noexcept { return vertices_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    bool has_edge(std::size_t u, std::size_t v) const;
    std::vector<std::size_t> neighbors(std::size_t u) const;

    bool operator==(const SimpleGraph&) const = default;

private:
    std::size_t vertices_;
    std::vector<Edge> edges_;
};

/// pi[u] is the image of vertex u.
using VertexMap = std::vector<std::size_t>;

/// Basis vectors in vertex order, then e_u + e_v for each edge in sorted order.
std::vector<Vector> encode_graph(const SimpleGraph& g, unsigned q);

struct ReducedPair {
    OwfKey key;      // V from g1
    OwfImage image;  // W from g2, sorted
};

/// std::nullopt when vertex or edge counts differ (trivially non-isomorphic).
std::optional<ReducedPair> reduce_pair(const SimpleGraph& g1, const SimpleGraph& g2, unsigned q);

bool is_isomorphism(const SimpleGraph& g1, const SimpleGraph& g2, const VertexMap& pi);

/// Reads a vertex bijection off a matrix with M V = W. Over F_2 this uses the
/// green/red recovery; otherwise M must be a permutation matrix.
VertexMap extract_isomorphism(const Matrix& m, const SimpleGraph& g1, const SimpleGraph& g2, unsigned q);

enum class IsoStatus { Isomorphic, NonIsomorphic, BudgetExceeded };

struct IsoDecision {
    IsoStatus status = IsoStatus::NonIsomorphic;
    VertexMap pi;
    Matrix witness;
};

IsoDecision decide_isomorphic(const SimpleGraph& g1, const SimpleGraph& g2, unsigned q,
                              std::uint64_t node_budget = kDefaultNodeBudget);

/// Tries all n! bijections in lexicographic order; n <= 8.
std::optional<VertexMap> brute_force_iso(const SimpleGraph& g1, const SimpleGraph& g2);

/// G(n, p) random graph.
SimpleGraph random_graph(std::size_t vertices, double edge_probability, RandomSource& rng);

/// Graph with edges {pi[u], pi[v]}.
SimpleGraph relabel(const SimpleGraph& g, const VertexMap& pi);

/// Every graph on `vertices` labelled vertices (2^(n choose 2) of them).
std::vector<SimpleGraph> all_graphs(std::size_t vertices);

}  // namespace glowf
