#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "gnnv/graph.hpp"

namespace gnnv {

/// Reads the JSON graph format:
///   {"n": int, "dim": int, "prop_names": [string]?, "labels": [[number|"p/q"]],
///    "edges": [[int,int]], "undirected": bool?}
/// Errors are InputError with a byte offset or a JSON path in the message.
LabelledGraph parse_graph(std::string_view text);

/// Canonical JSON form: rationals that are not integers print as "p/q"
/// strings, edges sorted, no "undirected" key.
std::string print_graph(const LabelledGraph& g);

/// Graphviz rendering; vertices show their true propositions. The point, if
/// given, is drawn with a double circle.
std::string graph_to_dot(const LabelledGraph& g, std::optional<Vertex> point = std::nullopt);

LabelledGraph load_graph_file(const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace gnnv
