#pragma once

// Text formats: JSON instances, matrices as rows of tokens, edge-list graphs, CSV tables.

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "glowf/gi.hpp"
#include "glowf/owf.hpp"

namespace glowf::io {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Instance {
    OwfKey key;
    std::optional<OwfImage> image;
};

/// {"format": "glowf-instance", "version": 1, "q", "n", "m", "V": ["0 1 1", ...],
///  "W"?: [...], "seed"?: integer}. W is sorted on load.
Instance parse_instance(const std::string& text);
/// Canonical form: sorted keys, two-space indent, trailing newline.
std::string serialize_instance(const Instance& instance);

/// "0 1 1": entries separated by single spaces.
std::string format_vector(const Vector& v);
/// `what` names the vector in error messages.
Vector parse_vector(const std::string& text, unsigned q, std::size_t n, const std::string& what);

/// One row per line. Blank lines and lines starting with '#' are skipped.
Matrix parse_matrix(const std::string& text, unsigned q);
std::string format_matrix(const Matrix& m);

/// "n_vertices n_edges" header, then one "u v" line per edge, 0-indexed.
SimpleGraph parse_graph(const std::string& text);
std::string format_graph(const SimpleGraph& g);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Fixed six-decimal rendering used in every emitted table.
std::string format_double(double x);

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace glowf::io
