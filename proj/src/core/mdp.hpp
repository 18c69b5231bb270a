#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "core/decomposition.hpp"
#include "core/digraph.hpp"

namespace stodi {

struct TransitionEntry {
  int next = 0;     // 1-based state
  double prob = 0;  // in (0,1]
};
using TransitionDistribution = std::vector<TransitionEntry>;  // sorted by next

// Dynamics of a finite MDP with 1-based states and actions. Transition
// distributions are computed on demand and memoized behind a mutex, so models
// whose action spaces are huge in aggregate stay cheap until queried.
class MdpDynamics {
public:
  virtual ~MdpDynamics() = default;
  virtual int state_count() const = 0;
  virtual int action_count(int state) const = 0;
  const TransitionDistribution& transition(int state, int action) const;

protected:
  virtual TransitionDistribution compute_transition(int state, int action) const = 0;

private:
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<std::uint64_t, std::unique_ptr<TransitionDistribution>> memo_;
};

using RewardFn = std::function<double(int state, int action, int next)>;

// Value-semantics pairing of shared dynamics with a reward.
struct MdpModel {
  std::shared_ptr<const MdpDynamics> dynamics;
  RewardFn reward;  // null means identically zero

  int state_count() const { return dynamics->state_count(); }
  int action_count(int i) const { return dynamics->action_count(i); }
  const TransitionDistribution& transition(int i, int a) const { return dynamics->transition(i, a); }
  double reward_at(int i, int a, int j) const { return reward ? reward(i, a, j) : 0.0; }
};

MdpModel attach_reward(MdpModel m, RewardFn r);

// Per-state action space of a stochastic digraph: an action at node i picks
// one successor for every possible topology draw, so a tuple has one entry per
// edge set. Tuples are ordered lexicographically (edge set 1 most significant,
// successor candidates ascending).
struct LocalActionSpace {
  NodeId node = 0;
  std::vector<std::vector<NodeId>> tuples;
};

LocalActionSpace local_actions(const StochasticDigraph& sd, NodeId i);
std::uint64_t local_action_count(const StochasticDigraph& sd, NodeId i);
std::vector<NodeId> local_action_tuple(const StochasticDigraph& sd, NodeId i, int action);

// MDP whose action at node i is a successor-per-topology tuple; the induced
// distribution aggregates mu over tuple coordinates.
MdpModel local_mdp(const StochasticDigraph& sd);

// MDP whose action a applies the a-th enumerated one-step matrix at every
// state. Only sensible for graphs small enough to enumerate; used as an
// oracle against the per-state construction.
MdpModel global_mdp_from_pset(const TransitionMatrixSet& pset, int n);

// Collapses actions with identical induced distributions (exact comparison),
// keeping the lowest original action index of each group. Off by default
// everywhere; counts are part of the construction's contract.
MdpModel dedup_actions_by_distribution(const MdpModel& m);

}  // namespace stodi
