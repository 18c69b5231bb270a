#pragma once

#include <set>

#include "core/digraph.hpp"
#include "core/matrix.hpp"

namespace stodi {

// Entrywise transition-probability envelope: L[i][j] accumulates the topology
// mass that forces i -> j (H(i,w) = {j}), M[i][j] the mass that allows it
// (j in H(i,w)). Every realizable one-step matrix P satisfies L <= P <= M.
struct BoundMatrices {
  Matrix L;
  Matrix M;
};

BoundMatrices compute_bound_matrices(const StochasticDigraph& sd);

enum class RecursionKind { Upper, Lower };

// values(k, x-1) = best/worst probability of visiting Q within steps 1..k
// starting at x; row 0 is all zero (no steps taken means no visit counted).
struct ReachRecursionTable {
  Matrix values;  // (K+1) x n
  std::set<NodeId> target;
  RecursionKind kind = RecursionKind::Upper;
  double at(int k, NodeId x) const { return values.at(static_cast<std::size_t>(k), static_cast<std::size_t>(x - 1)); }
};

// Dynamic program over the out-neighborhood map: a visit scores 1 the moment a
// successor lands in Q; otherwise the successor's previous-depth value carries
// over. Upper takes the best successor per topology, lower the worst, weighted
// by mu. Requires the standing assumption so every positive-mass topology has
// a successor to pick.
ReachRecursionTable reach_recursion(const StochasticDigraph& sd, const std::set<NodeId>& Q, int K,
                                    RecursionKind kind);

}  // namespace stodi
