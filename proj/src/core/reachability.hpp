#pragma once

#include <functional>
#include <set>
#include <vector>

#include "core/bounds.hpp"
#include "core/digraph.hpp"
#include "core/matrix.hpp"
#include "core/mdp.hpp"

namespace stodi {

// Finite-horizon optimal values: values(k, x-1) is the best achievable
// expected return over k remaining steps from state x. greedy(k, x) is the
// maximizing action used to produce that entry (ties -> smallest index);
// defined for k >= 1.
struct ValueTable {
  Matrix values;                        // (K+1) x states, row 0 all zero
  std::vector<std::vector<int>> greedy; // greedy[k][x-1], k in 1..K
  double at(int k, int x) const { return values.at(static_cast<std::size_t>(k), static_cast<std::size_t>(x - 1)); }
  int greedy_action(int k, int x) const { return greedy[static_cast<std::size_t>(k)][static_cast<std::size_t>(x - 1)]; }
  int horizon() const { return static_cast<int>(values.rows) - 1; }
};

ValueTable value_iteration(const MdpModel& m, int K);

struct InfiniteHorizonResult {
  std::vector<double> values;  // per state, index x-1
  std::vector<int> greedy;     // stationary greedy action per state
  int iterations = 0;
  bool converged = false;
};

// Repeats the backup until the max-norm step change drops below tol (or the
// iteration cap). Suited to absorbing problems where values stabilize.
InfiniteHorizonResult infinite_horizon_value_iteration(const MdpModel& m, double tol = 1e-9,
                                                       int max_iterations = 100000);

// pi(k, x) -> distribution over actions (probabilities sum to 1). k is steps
// remaining, so time-varying policies extracted from finite-horizon tables can
// be evaluated exactly.
using PolicyFn = std::function<std::vector<std::pair<int, double>>(int k, int x)>;

PolicyFn uniform_policy(const MdpModel& m);
PolicyFn stationary_policy(std::vector<int> action_per_state);
PolicyFn greedy_policy(const ValueTable& table);

Matrix policy_evaluation(const MdpModel& m, const PolicyFn& pi, int K);

// Probability envelope for visiting Q within steps 1..k. Both run value
// iteration on the target-augmented graph (reward collected on entering the
// proxy node) and restrict the result to the original nodes; the pessimistic
// variant maximizes the negated reward and flips the sign back, so both
// tables read as probabilities.
struct ReachResult {
  Matrix values;  // (K+1) x n, original nodes only
  ValueTable full_table;  // over the augmented graph, for policy extraction
  AugmentedDigraph augmented;
  double at(int k, int x) const { return values.at(static_cast<std::size_t>(k), static_cast<std::size_t>(x - 1)); }
};

ReachResult weak_reachability(const StochasticDigraph& sd, const std::set<NodeId>& Q, int K);
ReachResult strong_recurrence(const StochasticDigraph& sd, const std::set<NodeId>& Q, int K);

// Infinite-horizon limits of the same objectives, per original node.
struct ReachLimit {
  std::vector<double> values;  // index x-1, original nodes only
  int iterations = 0;
  bool converged = false;
};

ReachLimit weak_reachability_limit(const StochasticDigraph& sd, const std::set<NodeId>& Q,
                                   double tol = 1e-9, int max_iterations = 100000);
ReachLimit strong_recurrence_limit(const StochasticDigraph& sd, const std::set<NodeId>& Q,
                                   double tol = 1e-9, int max_iterations = 100000);

// Reward used by both reach objectives: 1 exactly when the step enters the
// proxy node (sign applied by the caller).
RewardFn proxy_entry_reward(NodeId proxy, double sign);

}  // namespace stodi
