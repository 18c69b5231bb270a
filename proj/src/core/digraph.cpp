#include "core/digraph.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace stodi {

Digraph::Digraph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 0) throw_invalid("vertex count must be nonnegative");
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& [u, v] : edges) {
    if (u < 1 || u > n || v < 1 || v > n)
      throw_invalid("edge (" + std::to_string(u) + "," + std::to_string(v) +
                    ") out of range for n=" + std::to_string(n));
  }
  edges_ = std::move(edges);
  adj_.assign(static_cast<std::size_t>(n) + 1, {});
  for (const auto& [u, v] : edges_) adj_[static_cast<std::size_t>(u)].push_back(v);
}

const std::vector<NodeId>& Digraph::out_neighborhood(NodeId x) const {
  if (x < 1 || x > n_) throw_invalid("node " + std::to_string(x) + " out of range");
  return adj_[static_cast<std::size_t>(x)];
}

bool Digraph::has_edge(NodeId u, NodeId v) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

bool Digraph::one_regular() const {
  for (int x = 1; x <= n_; ++x)
    if (adj_[static_cast<std::size_t>(x)].size() != 1) return false;
  return true;
}

Digraph graph_union(const Digraph& a, const Digraph& b) {
  if (a.n() != b.n()) throw_invalid("union requires equal vertex counts");
  std::vector<Edge> edges = a.edges();
  edges.insert(edges.end(), b.edges().begin(), b.edges().end());
  return Digraph(a.n(), std::move(edges));
}

StochasticDigraph::StochasticDigraph(int n, std::vector<Digraph> edge_sets, std::vector<double> mu)
    : n_(n), layers_(std::move(edge_sets)), mu_(std::move(mu)) {
  if (layers_.empty()) throw_invalid("a stochastic digraph needs at least one edge set");
  if (layers_.size() != mu_.size())
    throw_invalid("mu length " + std::to_string(mu_.size()) + " does not match edge-set count " +
                  std::to_string(layers_.size()));
  double total = 0.0;
  for (double p : mu_) {
    if (!(p >= 0.0)) throw_invalid("mu entries must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw_invalid("mu must sum to 1 (got " + std::to_string(total) + "); fix the input rather than renormalizing");
  for (const auto& g : layers_)
    if (g.n() != n_) throw_invalid("edge set vertex count differs from n");
}

double StochasticDigraph::mu(int w) const {
  if (w < 1 || w > h()) throw_invalid("edge-set index " + std::to_string(w) + " out of range");
  return mu_[static_cast<std::size_t>(w - 1)];
}

const Digraph& StochasticDigraph::layer(int w) const {
  if (w < 1 || w > h()) throw_invalid("edge-set index " + std::to_string(w) + " out of range");
  return layers_[static_cast<std::size_t>(w - 1)];
}

const std::vector<NodeId>& StochasticDigraph::H(NodeId x, int w) const {
  return layer(w).out_neighborhood(x);
}

std::vector<std::pair<NodeId, int>> StochasticDigraph::check_standing_assumption() const {
  std::vector<std::pair<NodeId, int>> violations;
  for (int x = 1; x <= n_; ++x)
    for (int w = 1; w <= h(); ++w)
      if (mu_[static_cast<std::size_t>(w - 1)] > 0.0 && H(x, w).empty()) violations.emplace_back(x, w);
  return violations;
}

StochasticDigraph augment_sink(const StochasticDigraph& sd) {
  int n = sd.n();
  int sink = n + 1;
  auto violations = sd.check_standing_assumption();
  std::vector<Digraph> layers;
  layers.reserve(static_cast<std::size_t>(sd.h()));
  for (int w = 1; w <= sd.h(); ++w) {
    std::vector<Edge> edges = sd.layer(w).edges();
    for (const auto& [x, vw] : violations)
      if (vw == w) edges.emplace_back(x, sink);
    edges.emplace_back(sink, sink);
    layers.emplace_back(n + 1, std::move(edges));
  }
  return StochasticDigraph(n + 1, std::move(layers), sd.mu_all());
}

AugmentedDigraph augment_for_target(const StochasticDigraph& sd, const std::set<NodeId>& Q) {
  if (Q.empty()) throw_invalid("target set must be nonempty");
  for (NodeId q : Q)
    if (q < 1 || q > sd.n()) throw_invalid("target node " + std::to_string(q) + " out of range");
  if (!sd.standing_assumption_holds())
    throw_precondition("graph has stranded nodes under positive-probability topologies; apply sink augmentation first");

  int n = sd.n();
  NodeId proxy = n + 1, terminal = n + 2;
  std::vector<Digraph> layers;
  layers.reserve(static_cast<std::size_t>(sd.h()));
  for (int w = 1; w <= sd.h(); ++w) {
    std::vector<Edge> edges;
    for (const auto& [u, v] : sd.layer(w).edges()) edges.emplace_back(u, Q.count(v) ? proxy : v);
    edges.emplace_back(proxy, terminal);
    edges.emplace_back(terminal, terminal);
    layers.emplace_back(n + 2, std::move(edges));
  }
  AugmentedDigraph out;
  out.graph = StochasticDigraph(n + 2, std::move(layers), sd.mu_all());
  out.target_proxy = proxy;
  out.terminal = terminal;
  out.target = Q;
  return out;
}

}  // namespace stodi
