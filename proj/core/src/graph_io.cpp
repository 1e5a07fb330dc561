#include "gnnv/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "gnnv/errors.hpp"
#include "json_util.hpp"

namespace gnnv {

LabelledGraph parse_graph(std::string_view text) {
  const json doc = parse_json_document(text);
  if (!doc.is_object()) throw InputError("graph: top-level value must be an object");
  const auto n = json_get_count(doc, "n", "graph");
  const auto dim = json_get_count(doc, "dim", "graph");

  std::vector<std::string> names;
  if (doc.contains("prop_names")) {
    const auto& arr = doc["prop_names"];
    if (!arr.is_array()) throw InputError("graph.prop_names: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) throw InputError("graph.prop_names[" + std::to_string(i) + "]: expected a string");
      names.push_back(arr[i].get<std::string>());
    }
  }

  if (!doc.contains("labels") || !doc["labels"].is_array()) throw InputError("graph.labels: expected an array");
  const auto& rows = doc["labels"];
  if (rows.size() != n) {
    throw InputError("graph.labels: expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()));
  }
  std::vector<Label> labels;
  for (std::size_t u = 0; u < rows.size(); ++u) {
    const std::string where = "graph.labels[" + std::to_string(u) + "]";
    labels.push_back(json_rational_vector(rows[u], where));
    if (labels.back().size() != dim) {
      throw InputError(where + ": label row of wrong length " + std::to_string(labels.back().size()) +
                       " (dim is " + std::to_string(dim) + ")");
    }
  }

  if (!doc.contains("edges") || !doc["edges"].is_array()) throw InputError("graph.edges: expected an array");
  const bool undirected = doc.contains("undirected") && doc["undirected"].is_boolean() && doc["undirected"].get<bool>();
  std::vector<Edge> edges;
  const auto& arr = doc["edges"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "graph.edges[" + std::to_string(i) + "]";
    const auto& e = arr[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw InputError(where + ": expected a pair of vertex indices");
    }
    const auto u = e[0].get<long long>();
    const auto v = e[1].get<long long>();
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n) {
      throw InputError(where + ": edge endpoint out of range");
    }
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    if (undirected) edges.emplace_back(static_cast<Vertex>(v), static_cast<Vertex>(u));
  }
  return LabelledGraph(n, dim, std::move(labels), std::move(edges), std::move(names));
}

std::string print_graph(const LabelledGraph& g) {
  json doc = json::object();
  doc["n"] = g.size();
  doc["dim"] = g.dim();
  if (g.has_explicit_prop_names()) doc["prop_names"] = g.prop_names();
  json rows = json::array();
  for (const auto& row : g.labels()) rows.push_back(rational_vector_to_json(row));
  doc["labels"] = rows;
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back(json::array({u, v}));
  doc["edges"] = edges;
  return doc.dump();
}

std::string graph_to_dot(const LabelledGraph& g, std::optional<Vertex> point) {
  std::ostringstream out;
  out << "digraph witness {\n";
  for (Vertex u = 0; u < g.size(); ++u) {
    std::string text;
    for (std::size_t i = 0; i < g.dim(); ++i) {
      const auto& x = g.label(u)[i];
      if (g.is_boolean()) {
        if (x == 1) text += (text.empty() ? "" : ",") + g.prop_names()[i];
      } else {
        text += (text.empty() ? "" : ",") + g.prop_names()[i] + "=" + to_string(x);
      }
    }
    out << "  v" << u << " [label=\"" << u << ": {" << text << "}\"";
    if (point && *point == u) out << ", shape=doublecircle";
    out << "];\n";
  }
  for (auto [u, v] : g.edges()) out << "  v" << u << " -> v" << v << ";\n";
  out << "}\n";
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

LabelledGraph load_graph_file(const std::string& path) {
  try {
    return parse_graph(read_text_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace gnnv
