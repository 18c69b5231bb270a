#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "core/mdp.hpp"
#include "core/reachability.hpp"
#include "core/rng.hpp"

namespace stodi {

struct RlParams {
  double learning_rate = 0.1;
  double epsilon = 0.1;
  long episodes = 10000;
  long horizon_cap = 1000;  // truncates episodes that never reach a terminal state
  std::uint64_t seed = 0;
  double discount = 1.0;
};

struct QTable {
  std::vector<std::vector<double>> q;       // q[x-1][a-1]
  std::vector<std::vector<long>> visits;    // update counts, same shape
  double value(int x) const {               // max over actions
    double best = 0.0;
    const auto& row = q[static_cast<std::size_t>(x - 1)];
    for (std::size_t a = 0; a < row.size(); ++a)
      if (a == 0 || row[a] > best) best = row[a];
    return best;
  }
};

enum class RlAlgo { Sarsa, QLearning };

using TerminalFn = std::function<bool(int state)>;

struct RlResult {
  QTable table;
  double estimate = 0.0;       // max_a Q(start, a) after training
  std::vector<double> trace;   // estimate after each episode (only if requested)
};

// Tabular on-policy (SARSA) / off-policy (Q-learning) learning with constant
// epsilon-greedy exploration and zero-initialized Q. Greedy ties break toward
// the smallest action index; identical seeds give bitwise-identical tables.
RlResult run_rl(const MdpModel& m, int start, const TerminalFn& terminal, RlAlgo algo, const RlParams& params,
                bool record_trace = false);

struct EpisodeStep {
  int state = 0;
  int action = 0;
  double reward = 0.0;
  int next = 0;
};

// Rolls out one episode under an arbitrary (stationary) policy; stops at a
// terminal state or after horizon_cap steps.
std::vector<EpisodeStep> sample_episode(const MdpModel& m, int start, const PolicyFn& policy,
                                        const TerminalFn& terminal, std::mt19937_64& rng, long horizon_cap);

// Draws a successor from the model's transition distribution.
int sample_transition(const MdpModel& m, int state, int action, std::mt19937_64& rng);

}  // namespace stodi
