#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "core/digraph.hpp"
#include "core/rng.hpp"

namespace stodi::testutil {

// The running four-node example used throughout: two edge sets drawn with
// probabilities 2/3 and 1/3.
inline StochasticDigraph example_graph() {
  Digraph g1(4, {{1, 2}, {1, 3}, {2, 1}, {3, 1}, {3, 4}, {4, 2}, {4, 3}});
  Digraph g2(4, {{1, 3}, {1, 4}, {2, 4}, {3, 4}, {4, 3}});
  return StochasticDigraph(4, {g1, g2}, {2.0 / 3.0, 1.0 / 3.0});
}

// Random graph whose every (node, edge set) pair keeps at least one out-edge,
// so the standing assumption holds by construction.
inline StochasticDigraph random_sa1_graph(std::mt19937_64& rng, int max_n = 8, int max_h = 4,
                                          int max_out_degree = 3) {
  int n = 2 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(max_n - 1)));
  int h = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(max_h)));
  std::vector<Digraph> layers;
  layers.reserve(static_cast<std::size_t>(h));
  for (int w = 0; w < h; ++w) {
    std::vector<Edge> edges;
    for (int x = 1; x <= n; ++x) {
      int cap = std::min(max_out_degree, n);  // can't have more distinct successors than nodes
      int degree = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(cap)));
      std::set<int> succ;
      while (static_cast<int>(succ.size()) < degree)
        succ.insert(1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n))));
      for (int y : succ) edges.push_back({x, y});
    }
    layers.emplace_back(n, std::move(edges));
  }
  std::vector<double> mu(static_cast<std::size_t>(h));
  double total = 0.0;
  std::vector<int> weights(static_cast<std::size_t>(h));
  for (auto& w : weights) {
    w = 1 + static_cast<int>(uniform_below(rng, 5));
    total += w;
  }
  for (std::size_t s = 0; s < mu.size(); ++s) mu[s] = weights[s] / total;
  return StochasticDigraph(n, std::move(layers), std::move(mu));
}

// Nonempty random target subset of {1, ..., n}.
inline std::set<NodeId> random_target(std::mt19937_64& rng, int n) {
  std::set<NodeId> Q;
  int size = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
  while (static_cast<int>(Q.size()) < size)
    Q.insert(1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n))));
  return Q;
}

}  // namespace stodi::testutil
