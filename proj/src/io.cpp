#include "glowf/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace glowf::io {

using nlohmann::json;

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string t; in >> t;) out.push_back(t);
    return out;
}

std::uint64_t parse_unsigned(const std::string& token, const std::string& what) {
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || end != token.data() + token.size()) {
        throw ParseError(what + ": '" + token + "' is not a non-negative integer");
    }
    return value;
}

std::vector<std::string> content_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        out.push_back(line);
    }
    return out;
}

const json& require(const json& doc, const char* field) {
    if (!doc.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
    return doc.at(field);
}

std::uint64_t require_unsigned(const json& doc, const char* field) {
    const json& v = require(doc, field);
    if (!v.is_number_unsigned()) throw ParseError(std::string("field '") + field + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::vector<Vector> vector_list(const json& doc, const char* field, unsigned q, std::size_t n) {
    const json& list = require(doc, field);
    if (!list.is_array()) throw ParseError(std::string("field '") + field + "' must be an array");
    std::vector<Vector> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string what = std::string(field) + "[" + std::to_string(i) + "]";
        if (!list[i].is_string()) throw ParseError(what + " must be a string");
        out.push_back(parse_vector(list[i].get<std::string>(), q, n, what));
    }
    return out;
}

}  // namespace

std::string format_vector(const Vector& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(unsigned(v[i]));
    }
    return out;
}

Vector parse_vector(const std::string& text, unsigned q, std::size_t n, const std::string& what) {
    const auto parts = tokens(text);
    if (parts.size() != n) {
        throw ParseError(what + ": expected " + std::to_string(n) + " entries, found " + std::to_string(parts.size()));
    }
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t x = parse_unsigned(parts[i], what);
        if (x >= q) throw ParseError(what + ": entry " + parts[i] + " is out of range for q = " + std::to_string(q));
        v[i] = static_cast<Scalar>(x);
    }
    return v;
}

Instance parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("instance must be a JSON object");
    if (require(doc, "format") != "glowf-instance") throw ParseError("field 'format' must be \"glowf-instance\"");
    if (require_unsigned(doc, "version") != 1) throw ParseError("unsupported version");
    const auto q = require_unsigned(doc, "q");
    if (q > 255 || !is_prime(unsigned(q))) throw ParseError("field 'q' must be a prime below 256");
    const auto n = require_unsigned(doc, "n");
    if (n == 0) throw ParseError("field 'n' must be positive");
    const auto m = require_unsigned(doc, "m");

    Instance out{OwfKey{Field(unsigned(q)), n, vector_list(doc, "V", unsigned(q), n), std::nullopt}, std::nullopt};
    if (out.key.m() != m) throw ParseError("field 'm' does not match the length of V");
    if (doc.contains("W")) {
        auto w = vector_list(doc, "W", unsigned(q), n);
        if (w.size() != m) throw ParseError("field 'W' must hold m vectors");
        out.image = OwfImage::from_unsorted(std::move(w));
    }
    if (doc.contains("seed")) out.key.seed = require_unsigned(doc, "seed");
    return out;
}

std::string serialize_instance(const Instance& instance) {
    json doc;
    doc["format"] = "glowf-instance";
    doc["version"] = 1;
    doc["q"] = instance.key.q();
    doc["n"] = instance.key.n;
    doc["m"] = instance.key.m();
    json v = json::array();
    for (const Vector& x : instance.key.vectors) v.push_back(format_vector(x));
    doc["V"] = std::move(v);
    if (instance.image) {
        json w = json::array();
        for (const Vector& x : instance.image->vectors) w.push_back(format_vector(x));
        doc["W"] = std::move(w);
    }
    if (instance.key.seed) doc["seed"] = *instance.key.seed;
    return doc.dump(2) + "\n";
}

Matrix parse_matrix(const std::string& text, unsigned q) {
    const auto lines = content_lines(text);
    if (lines.empty()) throw ParseError("matrix: no rows");
    const std::size_t cols = tokens(lines.front()).size();
    std::vector<Vector> rows;
    for (std::size_t r = 0; r < lines.size(); ++r) {
        rows.push_back(parse_vector(lines[r], q, cols, "matrix row " + std::to_string(r)));
    }
    return Matrix::from_rows(rows, cols);
}

std::string format_matrix(const Matrix& m) {
    std::string out;
    for (std::size_t r = 0; r < m.rows(); ++r) out += format_vector(m.row_vector(r)) + "\n";
    return out;
}

SimpleGraph parse_graph(const std::string& text) {
    const auto lines = content_lines(text);
    if (lines.empty()) throw ParseError("graph: missing header");
    const auto header = tokens(lines.front());
    if (header.size() != 2) throw ParseError("graph header must be 'n_vertices n_edges'");
    const auto vertices = parse_unsigned(header[0], "graph header");
    const auto edge_count = parse_unsigned(header[1], "graph header");
    if (lines.size() - 1 != edge_count) {
        throw ParseError("graph: header announces " + std::to_string(edge_count) + " edges, found " +
                         std::to_string(lines.size() - 1));
    }
    std::vector<SimpleGraph::Edge> edges;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto parts = tokens(lines[i]);
        const std::string what = "graph edge line " + std::to_string(i);
        if (parts.size() != 2) throw ParseError(what + ": expected 'u v'");
        edges.emplace_back(parse_unsigned(parts[0], what), parse_unsigned(parts[1], what));
    }
    try {
        return SimpleGraph(vertices, std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("graph: ") + e.what());
    }
}

std::string format_graph(const SimpleGraph& g) {
    std::string out = std::to_string(g.vertex_count()) + " " + std::to_string(g.edge_count()) + "\n";
    for (const auto& [u, v] : g.edges()) out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << contents;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
}

}  // namespace glowf::io
