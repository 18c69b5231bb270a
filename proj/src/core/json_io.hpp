#pragma once

#include <string>

#include "core/digraph.hpp"

namespace stodi {

// Graph JSON: {"n": 4, "edge_sets": [[[1,2],[1,3]], ...], "mu": ["2/3","1/3"]}.
// mu entries may be "p/q" strings or plain numbers.
StochasticDigraph parse_graph_json(const std::string& text, const std::string& source = "<string>");
StochasticDigraph load_graph(const std::string& path);

// Canonical serialization: edges sorted, mu printed as reduced fractions when
// one fits within 1e-9 (q <= 1e6) unless decimal_mu; loading the output and
// saving again is byte-stable.
std::string graph_to_json(const StochasticDigraph& sd, bool decimal_mu = false);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace stodi
