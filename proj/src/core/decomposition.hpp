#pragma once

#include <cstdint>
#include <vector>

#include "core/digraph.hpp"
#include "core/matrix.hpp"

namespace stodi {

// All ways of keeping exactly one out-edge per node. Pieces are ordered
// lexicographically by the per-node choice tuple (node 1 most significant,
// choices within a node in ascending successor order).
struct OneRegularDecomposition {
  std::vector<Digraph> pieces;
};

OneRegularDecomposition decompose_one_regular(const Digraph& g);

// One-step transition matrix of a stochastic digraph whose every layer is
// 1-regular (the only case where the dynamics are a Markov chain).
Matrix markov_matrix(const StochasticDigraph& sd);

struct TransitionMatrixSet {
  std::vector<Matrix> matrices;
  std::uint64_t nu = 0;  // tuple count before any deduplication
};

// Enumerates every combination of 1-regular pieces across layers (last layer
// varying fastest) and the right-stochastic matrix each induces. Duplicate
// matrices are kept unless dedup; nu always reports the raw tuple count.
// Fails with a capacity error naming the per-state MDP construction when the
// tuple count exceeds cap.
TransitionMatrixSet enumerate_P_set(const StochasticDigraph& sd, std::uint64_t cap = 1000000,
                                    bool dedup = false);

}  // namespace stodi
