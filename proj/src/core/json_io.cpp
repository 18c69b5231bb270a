#include "core/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/error.hpp"
#include "core/fraction.hpp"

namespace stodi {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw_io("write to '" + path + "' failed");
}

namespace {

double number_or_fraction(const json& v, const std::string& source, const std::string& field) {
  if (v.is_string()) return parse_probability(v.get<std::string>());
  if (v.is_number()) return v.get<double>();
  throw_parse(source + ": field '" + field + "' entries must be numbers or \"p/q\" strings");
}

}  // namespace

StochasticDigraph parse_graph_json(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw_parse(source + ": " + e.what());
  }
  if (!doc.is_object()) throw_parse(source + ": top level must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw_parse(source + ": field 'n' (vertex count) missing or not an integer");
  if (!doc.contains("edge_sets") || !doc["edge_sets"].is_array())
    throw_parse(source + ": field 'edge_sets' missing or not an array");
  if (!doc.contains("mu") || !doc["mu"].is_array())
    throw_parse(source + ": field 'mu' missing or not an array");

  int n = doc["n"].get<int>();
  std::vector<Digraph> layers;
  for (std::size_t s = 0; s < doc["edge_sets"].size(); ++s) {
    const json& es = doc["edge_sets"][s];
    if (!es.is_array()) throw_parse(source + ": edge_sets[" + std::to_string(s) + "] must be an array of [u,v] pairs");
    std::vector<Edge> edges;
    for (const json& e : es) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
        throw_parse(source + ": edge_sets[" + std::to_string(s) + "] contains a malformed edge (want [u,v])");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    try {
      layers.emplace_back(n, std::move(edges));
    } catch (const Error& err) {
      throw_parse(source + ": edge_sets[" + std::to_string(s) + "]: " + err.what());
    }
  }
  std::vector<double> mu;
  for (std::size_t s = 0; s < doc["mu"].size(); ++s) mu.push_back(number_or_fraction(doc["mu"][s], source, "mu"));
  try {
    return StochasticDigraph(n, std::move(layers), std::move(mu));
  } catch (const Error& err) {
    throw_parse(source + ": " + err.what());
  }
}

StochasticDigraph load_graph(const std::string& path) { return parse_graph_json(read_file(path), path); }

std::string graph_to_json(const StochasticDigraph& sd, bool decimal_mu) {
  json doc;
  doc["n"] = sd.n();
  json sets = json::array();
  for (int w = 1; w <= sd.h(); ++w) {
    json es = json::array();
    for (const auto& [u, v] : sd.layer(w).edges()) es.push_back({u, v});
    sets.push_back(std::move(es));
  }
  doc["edge_sets"] = std::move(sets);
  json mu = json::array();
  for (int w = 1; w <= sd.h(); ++w) {
    std::string repr = format_probability(sd.mu(w), decimal_mu);
    if (repr.find('/') != std::string::npos)
      mu.push_back(repr);
    else
      mu.push_back(sd.mu(w));
  }
  doc["mu"] = std::move(mu);
  return doc.dump(2) + "\n";
}

}  // namespace stodi
