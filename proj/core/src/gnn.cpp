#include "gnnv/gnn.hpp"

#include <random>

#include "gnnv/errors.hpp"
#include "gnnv/graph_io.hpp"
#include "json_util.hpp"

namespace gnnv {

std::vector<std::string> GnnModel::prop_names() const {
  if (!feature_names.empty()) return feature_names;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < input_dim; ++i) names.push_back(default_prop_name(i));
  return names;
}

void GnnModel::validate() const {
  std::size_t prev = input_dim;
  for (std::size_t t = 0; t < layers.size(); ++t) {
    const auto& L = layers[t];
    const std::string where = "gnn.layers[" + std::to_string(t) + "]";
    const std::size_t rows = L.b.size();
    auto check = [&](const Matrix& m, const char* name) {
      if (m.size() != rows) {
        throw InputError(where + "." + name + ": dimension mismatch, expected " + std::to_string(rows) +
                         " rows (length of b), got " + std::to_string(m.size()));
      }
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != prev) {
          throw InputError(where + "." + name + "[" + std::to_string(i) + "]: dimension mismatch, expected " +
                           std::to_string(prev) + " columns, got " + std::to_string(m[i].size()));
        }
      }
    };
    check(L.A, "A");
    check(L.B, "B");
    prev = rows;
  }
  if (readout_w.size() != prev) {
    throw InputError("gnn.readout.w: dimension mismatch, expected " + std::to_string(prev) + " entries, got " +
                     std::to_string(readout_w.size()));
  }
  if (!feature_names.empty() && feature_names.size() != input_dim) {
    throw InputError("gnn.feature_names: expected " + std::to_string(input_dim) + " names");
  }
}

GnnModel parse_gnn(std::string_view text) {
  const json doc = parse_json_document(text);
  if (!doc.is_object()) throw InputError("gnn: top-level value must be an object");
  GnnModel n;
  n.input_dim = json_get_count(doc, "input_dim", "gnn");
  if (doc.contains("activation")) {
    const auto& act = doc["activation"];
    if (!act.is_string()) throw InputError("gnn.activation: expected a string");
    std::string tag = act.get<std::string>();
    if (tag != "truncReLU") throw InputError("gnn.activation: unsupported activation '" + tag + "' (only truncReLU)");
  }
  if (doc.contains("feature_names")) {
    const auto& arr = doc["feature_names"];
    if (!arr.is_array()) throw InputError("gnn.feature_names: expected an array");
    for (const auto& s : arr) {
      if (!s.is_string()) throw InputError("gnn.feature_names: expected strings");
      n.feature_names.push_back(s.get<std::string>());
    }
  }
  if (!doc.contains("layers") || !doc["layers"].is_array()) throw InputError("gnn.layers: expected an array");
  for (std::size_t t = 0; t < doc["layers"].size(); ++t) {
    const auto& L = doc["layers"][t];
    const std::string where = "gnn.layers[" + std::to_string(t) + "]";
    if (!L.is_object() || !L.contains("A") || !L.contains("B") || !L.contains("b")) {
      throw InputError(where + ": expected an object with A, B and b");
    }
    n.layers.push_back(GnnLayer{json_rational_matrix(L["A"], where + ".A"), json_rational_matrix(L["B"], where + ".B"),
                                json_rational_vector(L["b"], where + ".b")});
  }
  if (!doc.contains("readout") || !doc["readout"].is_object()) throw InputError("gnn.readout: expected an object");
  const auto& r = doc["readout"];
  if (!r.contains("w") || !r.contains("b")) throw InputError("gnn.readout: expected w and b");
  n.readout_w = json_rational_vector(r["w"], "gnn.readout.w");
  n.readout_b = json_rational(r["b"], "gnn.readout.b");
  n.validate();
  return n;
}

std::string print_gnn(const GnnModel& n) {
  json doc = json::object();
  doc["input_dim"] = n.input_dim;
  doc["activation"] = "truncReLU";
  if (!n.feature_names.empty()) doc["feature_names"] = n.feature_names;
  json layers = json::array();
  for (const auto& L : n.layers) {
    json A = json::array(), B = json::array();
    for (const auto& row : L.A) A.push_back(rational_vector_to_json(row));
    for (const auto& row : L.B) B.push_back(rational_vector_to_json(row));
    layers.push_back(json{{"A", A}, {"B", B}, {"b", rational_vector_to_json(L.b)}});
  }
  doc["layers"] = layers;
  doc["readout"] = json{{"w", rational_vector_to_json(n.readout_w)}, {"b", rational_to_json(n.readout_b)}};
  return doc.dump();
}

GnnModel load_gnn_file(const std::string& path) {
  try {
    return parse_gnn(read_text_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Rational truncrelu(const Rational& x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  return x;
}

ForwardResult forward(const GnnModel& n, const LabelledGraph& g) {
  if (g.dim() != n.input_dim) {
    throw InputError("dimension mismatch: graph has " + std::to_string(g.dim()) + " features, model expects " +
                     std::to_string(n.input_dim));
  }
  ForwardResult r;
  r.layers.push_back(g.labels());
  for (const auto& L : n.layers) {
    const auto& prev = r.layers.back();
    const std::size_t din = prev.empty() ? 0 : prev[0].size();
    std::vector<Label> next(g.size(), Label(L.b.size()));
    for (Vertex u = 0; u < g.size(); ++u) {
      Label agg(din);
      for (Vertex v : g.successors(u)) {
        for (std::size_t j = 0; j < din; ++j) agg[j] += prev[v][j];
      }
      for (std::size_t i = 0; i < L.b.size(); ++i) {
        Rational x = L.b[i];
        for (std::size_t j = 0; j < din; ++j) x += L.A[i][j] * prev[u][j] + L.B[i][j] * agg[j];
        next[u][i] = truncrelu(x);
      }
    }
    r.layers.push_back(std::move(next));
  }
  for (Vertex u = 0; u < g.size(); ++u) {
    Rational y = n.readout_b;
    for (std::size_t i = 0; i < n.readout_w.size(); ++i) y += n.readout_w[i] * r.layers.back()[u][i];
    r.accept.push_back(y >= 0);
  }
  return r;
}

GnnModel random_gnn(std::size_t input_dim, const std::vector<std::size_t>& layer_dims, std::uint64_t denominator,
                    std::uint64_t seed) {
  if (denominator == 0) throw InputError("denominator must be positive");
  std::mt19937_64 rng(seed);
  const auto span = static_cast<long>(3 * denominator);
  std::uniform_int_distribution<long> pick(-span, span);
  auto draw = [&] {
    Rational q(BigInt(pick(rng)), BigInt(static_cast<unsigned long>(denominator)));
    q.canonicalize();
    return q;
  };
  GnnModel n;
  n.input_dim = input_dim;
  std::size_t prev = input_dim;
  for (std::size_t d : layer_dims) {
    GnnLayer L{Matrix(d, std::vector<Rational>(prev)), Matrix(d, std::vector<Rational>(prev)),
               std::vector<Rational>(d)};
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < prev; ++j) {
        L.A[i][j] = draw();
        L.B[i][j] = draw();
      }
      L.b[i] = draw();
    }
    n.layers.push_back(std::move(L));
    prev = d;
  }
  for (std::size_t i = 0; i < prev; ++i) n.readout_w.push_back(draw());
  n.readout_b = draw();
  return n;
}

BigInt common_denominator(const GnnModel& n) {
  BigInt m = 1;
  for (const auto& L : n.layers) {
    for (const auto& row : L.A) for (const auto& x : row) m = lcm(m, x.get_den());
    for (const auto& row : L.B) for (const auto& x : row) m = lcm(m, x.get_den());
    for (const auto& x : L.b) m = lcm(m, x.get_den());
  }
  return m;
}

}  // namespace gnnv
