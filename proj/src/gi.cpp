#include "glowf/gi.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace glowf {

SimpleGraph::SimpleGraph(std::size_t vertices, std::vector<Edge> edges) : vertices_(vertices) {
    for (auto& [u, v] : edges) {
        if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
        if (u >= vertices || v >= vertices) throw std::invalid_argument("edge endpoint out of range");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw std::invalid_argument("duplicate edge");
    }
    edges_ = std::move(edges);
}

bool SimpleGraph::has_edge(std::size_t u, std::size_t v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

std::vector<std::size_t> SimpleGraph::neighbors(std::size_t u) const {
    std::vector<std::size_t> out;
    for (const auto& [a, b] : edges_) {
        if (a == u) out.push_back(b);
        if (b == u) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Vector> encode_graph(const SimpleGraph& g, unsigned q) {
    Field field(q);  // validates q
    const std::size_t n = g.vertex_count();
    std::vector<Vector> out;
    out.reserve(n + g.edge_count());
    for (std::size_t u = 0; u < n; ++u) out.push_back(Vector::unit(n, u));
    for (const auto& [u, v] : g.edges()) {
        Vector e(n);
        e[u] = 1;
        e[v] = 1;
        out.push_back(std::move(e));
    }
    return out;
}

std::optional<ReducedPair> reduce_pair(const SimpleGraph& g1, const SimpleGraph& g2, unsigned q) {
    if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count()) {
        return std::nullopt;
    }
    OwfKey key{Field(q), g1.vertex_count(), encode_graph(g1, q), std::nullopt};
    return ReducedPair{std::move(key), OwfImage::from_unsorted(encode_graph(g2, q))};
}

bool is_isomorphism(const SimpleGraph& g1, const SimpleGraph& g2, const VertexMap& pi) {
    const std::size_t n = g1.vertex_count();
    if (g2.vertex_count() != n || pi.size() != n || g1.edge_count() != g2.edge_count()) return false;
    std::vector<bool> hit(n, false);
    for (std::size_t p : pi) {
        if (p >= n || hit[p]) return false;
        hit[p] = true;
    }
    return std::all_of(g1.edges().begin(), g1.edges().end(),
                       [&](const SimpleGraph::Edge& e) { return g2.has_edge(pi[e.first], pi[e.second]); });
}

namespace {

std::optional<std::size_t> single_support(const Vector& v) {
    std::optional<std::size_t> at;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        if (v[i] != 1 || at) return std::nullopt;
        at = i;
    }
    return at;
}

VertexMap read_permutation_matrix(const Matrix& m) {
    const std::size_t n = m.rows();
    VertexMap pi(n);
    for (std::size_t u = 0; u < n; ++u) {
        const auto target = single_support(m.column(u));
        if (!target) {
            throw InvalidWitness("column " + std::to_string(u) + " is not a standard basis vector");
        }
        pi[u] = *target;
    }
    return pi;
}

VertexMap green_red_recovery(const Field& field, const Matrix& m, const SimpleGraph& g1) {
    const std::size_t n = g1.vertex_count();
    enum class Colour { Green, Red };
    std::vector<Colour> colour(n);
    std::vector<Vector> image(n);
    for (std::size_t u = 0; u < n; ++u) {
        image[u] = m.column(u);
        switch (image[u].weight()) {
            case 1: colour[u] = Colour::Green; break;
            case 2: colour[u] = Colour::Red; break;
            default: throw InvalidWitness("M e_" + std::to_string(u) + " has weight other than 1 or 2");
        }
    }

    // For a Red vertex: its unique Green neighbour and the image of the edge to it.
    std::vector<std::optional<std::size_t>> red_target(n);
    for (std::size_t u = 0; u < n; ++u) {
        if (colour[u] != Colour::Red) continue;
        std::optional<std::size_t> green;
        for (std::size_t v : g1.neighbors(u)) {
            if (colour[v] != Colour::Green) continue;
            if (green) throw InvalidWitness("red vertex " + std::to_string(u) + " has two green neighbours");
            green = v;
        }
        if (!green) throw InvalidWitness("red vertex " + std::to_string(u) + " has no green neighbour");
        Vector sum(n);
        for (std::size_t i = 0; i < n; ++i) sum[i] = field.add(image[u][i], image[*green][i]);
        red_target[u] = single_support(sum);
        if (!red_target[u]) {
            throw InvalidWitness("edge image at red vertex " + std::to_string(u) + " is not a basis vector");
        }
    }

    VertexMap pi(n);
    for (std::size_t w = 0; w < n; ++w) {
        std::optional<std::size_t> source;
        for (std::size_t u = 0; u < n; ++u) {
            const bool claims = colour[u] == Colour::Green ? single_support(image[u]) == w : red_target[u] == w;
            if (!claims) continue;
            if (source) throw InvalidWitness("two vertices claim target " + std::to_string(w));
            source = u;
        }
        if (!source) throw InvalidWitness("no vertex claims target " + std::to_string(w));
        pi[*source] = w;
    }
    return pi;
}

}  // namespace

VertexMap extract_isomorphism(const Matrix& m, const SimpleGraph& g1, const SimpleGraph& g2, unsigned q) {
    const auto pair = reduce_pair(g1, g2, q);
    if (!pair) throw InvalidWitness("graphs differ in size");
    if (m.rows() != g1.vertex_count() || m.cols() != g1.vertex_count()) {
        throw InvalidWitness("witness has the wrong shape");
    }
    const Field& field = pair->key.field;
    if (!is_invertible(field, m) || evaluate(pair->key, m) != pair->image) {
        throw InvalidWitness("witness does not satisfy M V = W");
    }
    VertexMap pi = field.is_binary() ? green_red_recovery(field, m, g1) : read_permutation_matrix(m);
    if (!is_isomorphism(g1, g2, pi)) throw InvalidWitness("recovered map is not an isomorphism");
    return pi;
}

IsoDecision decide_isomorphic(const SimpleGraph& g1, const SimpleGraph& g2, unsigned q,
                              std::uint64_t node_budget) {
    IsoDecision decision;
    const auto pair = reduce_pair(g1, g2, q);
    if (!pair) return decision;
    InvertResult inverted = invert_backtracking(pair->key, pair->image, node_budget);
    switch (inverted.status) {
        case InvertStatus::NotInImage: break;
        case InvertStatus::BudgetExceeded: decision.status = IsoStatus::BudgetExceeded; break;
        case InvertStatus::Found:
            decision.pi = extract_isomorphism(inverted.preimage, g1, g2, q);
            decision.witness = std::move(inverted.preimage);
            decision.status = IsoStatus::Isomorphic;
            break;
    }
    return decision;
}

std::optional<VertexMap> brute_force_iso(const SimpleGraph& g1, const SimpleGraph& g2) {
    const std::size_t n = g1.vertex_count();
    if (n > 8) throw CapExceeded("brute_force_iso supports at most 8 vertices");
    if (g2.vertex_count() != n || g1.edge_count() != g2.edge_count()) return std::nullopt;
    VertexMap pi(n);
    std::iota(pi.begin(), pi.end(), 0);
    do {
        if (is_isomorphism(g1, g2, pi)) return pi;
    } while (std::next_permutation(pi.begin(), pi.end()));
    return std::nullopt;
}

SimpleGraph random_graph(std::size_t vertices, double edge_probability, RandomSource& rng) {
    std::vector<SimpleGraph::Edge> edges;
    for (std::size_t u = 0; u < vertices; ++u) {
        for (std::size_t v = u + 1; v < vertices; ++v) {
            if (rng.uniform_real() < edge_probability) edges.emplace_back(u, v);
        }
    }
    return SimpleGraph(vertices, std::move(edges));
}

SimpleGraph relabel(const SimpleGraph& g, const VertexMap& pi) {
    std::vector<SimpleGraph::Edge> edges;
    edges.reserve(g.edge_count());
    for (const auto& [u, v] : g.edges()) edges.emplace_back(pi.at(u), pi.at(v));
    return SimpleGraph(g.vertex_count(), std::move(edges));
}

std::vector<SimpleGraph> all_graphs(std::size_t vertices) {
    std::vector<SimpleGraph::Edge> slots;
    for (std::size_t u = 0; u < vertices; ++u) {
        for (std::size_t v = u + 1; v < vertices; ++v) slots.emplace_back(u, v);
    }
    if (slots.size() > 20) throw CapExceeded("too many graphs to enumerate");
    std::vector<SimpleGraph> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
        std::vector<SimpleGraph::Edge> edges;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (mask >> i & 1) edges.push_back(slots[i]);
        }
        out.emplace_back(vertices, std::move(edges));
    }
    return out;
}

}  // namespace glowf
