#include "core/bounds.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace stodi {

BoundMatrices compute_bound_matrices(const StochasticDigraph& sd) {
  auto n = static_cast<std::size_t>(sd.n());
  BoundMatrices out{Matrix(n, n), Matrix(n, n)};
  for (int i = 1; i <= sd.n(); ++i) {
    for (int w = 1; w <= sd.h(); ++w) {
      const auto& succ = sd.H(i, w);
      double p = sd.mu(w);
      if (succ.size() == 1) out.L.at(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(succ[0] - 1)) += p;
      for (NodeId j : succ) out.M.at(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) += p;
    }
  }
  return out;
}

ReachRecursionTable reach_recursion(const StochasticDigraph& sd, const std::set<NodeId>& Q, int K,
                                    RecursionKind kind) {
  if (Q.empty()) throw_invalid("target set must be nonempty");
  for (NodeId q : Q)
    if (q < 1 || q > sd.n()) throw_invalid("target node " + std::to_string(q) + " out of range");
  if (K < 0) throw_invalid("horizon must be nonnegative");
  if (!sd.standing_assumption_holds())
    throw_precondition(
        "graph has stranded nodes under positive-probability topologies; apply sink augmentation first");

  auto n = static_cast<std::size_t>(sd.n());
  ReachRecursionTable table;
  table.target = Q;
  table.kind = kind;
  table.values = Matrix(static_cast<std::size_t>(K) + 1, n);
  const bool upper = kind == RecursionKind::Upper;

  for (int k = 0; k < K; ++k) {
    for (int x = 1; x <= sd.n(); ++x) {
      double total = 0.0;
      for (int w = 1; w <= sd.h(); ++w) {
        double p = sd.mu(w);
        if (p == 0.0) continue;
        double best = upper ? 0.0 : 2.0;
        for (NodeId g : sd.H(x, w)) {
          double v = Q.count(g) ? 1.0 : table.values.at(static_cast<std::size_t>(k), static_cast<std::size_t>(g - 1));
          best = upper ? std::max(best, v) : std::min(best, v);
        }
        total += p * best;
      }
      table.values.at(static_cast<std::size_t>(k) + 1, static_cast<std::size_t>(x - 1)) = total;
    }
  }
  return table;
}

}  // namespace stodi
