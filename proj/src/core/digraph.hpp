#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace stodi {

using NodeId = int;  // 1-based at every interface
using Edge = std::pair<NodeId, NodeId>;

// Plain digraph: n nodes, sorted deduplicated edge list.
class Digraph {
public:
  Digraph() = default;
  Digraph(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  // Out-neighborhood of x, sorted ascending.
  const std::vector<NodeId>& out_neighborhood(NodeId x) const;
  bool has_edge(NodeId u, NodeId v) const;
  bool one_regular() const;

private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adj_;  // adj_[x] for x in 1..n; index 0 unused
};

Digraph graph_union(const Digraph& a, const Digraph& b);

// Time-varying digraph whose edge set is drawn i.i.d. each step from
// edge_sets with distribution mu.
class StochasticDigraph {
public:
  StochasticDigraph() = default;
  StochasticDigraph(int n, std::vector<Digraph> edge_sets, std::vector<double> mu);

  int n() const { return n_; }
  int h() const { return static_cast<int>(layers_.size()); }
  double mu(int w) const;                     // w in 1..h
  const Digraph& layer(int w) const;          // w in 1..h
  const std::vector<double>& mu_all() const { return mu_; }

  // H(x,w): successors of x when topology w is drawn. Sorted ascending.
  const std::vector<NodeId>& H(NodeId x, int w) const;

  // All (i,w) with mu(w) > 0 and H(i,w) empty; empty result means that every
  // positive-probability topology can always advance (no stranded node).
  std::vector<std::pair<NodeId, int>> check_standing_assumption() const;
  bool standing_assumption_holds() const { return check_standing_assumption().empty(); }

private:
  int n_ = 0;
  std::vector<Digraph> layers_;
  std::vector<double> mu_;
};

// Repairs stranded nodes by adding an absorbing node n+1 and routing every
// violating (i,w) to it. Valid pairs are untouched; the result always passes
// check_standing_assumption.
StochasticDigraph augment_sink(const StochasticDigraph& sd);

// Target-augmented graph for reach analyses over target set Q:
//  - node n+1 absorbs every edge that pointed into Q,
//  - node n+2 is terminal: (n+1,n+2) and (n+2,n+2) are in every edge set.
// Hitting Q within k steps becomes "collect reward entering n+1".
struct AugmentedDigraph {
  StochasticDigraph graph;     // over n+2 nodes
  NodeId target_proxy = 0;     // n+1
  NodeId terminal = 0;         // n+2
  std::set<NodeId> target;     // original Q
};

AugmentedDigraph augment_for_target(const StochasticDigraph& sd, const std::set<NodeId>& Q);

}  // namespace stodi
