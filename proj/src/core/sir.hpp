#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/digraph.hpp"
#include "core/mdp.hpp"

namespace stodi {

// Epidemic status: 1 susceptible, 2 infected, 3 recovered.
struct AgentState {
  int sigma = 1;
  int pos = 1;
  bool operator==(const AgentState&) const = default;
  auto operator<=>(const AgentState&) const = default;
};

using SirState = std::vector<AgentState>;

struct SirConfig {
  int N = 0;
  double alpha = 0.0;  // infection probability per colocated infected contact
  double beta = 0.0;   // recovery probability per step
  Digraph motion;      // positions 1..kappa
  SirState x0;

  int kappa() const { return motion.n(); }
};

SirConfig parse_sir_json(const std::string& text, const std::string& source = "<string>");
SirConfig load_sir(const std::string& path);

// Mixed-radix state codec: agent 1 most significant, each agent contributing
// the digit (sigma-1)*kappa + (pos-1) in base 3*kappa. Index 1 is the
// all-susceptible, all-at-position-1 state; the range is 1..(3*kappa)^N.
std::uint64_t sir_encode(const SirState& s, const SirConfig& cfg);
SirState sir_decode(std::uint64_t index, const SirConfig& cfg);
std::uint64_t sir_state_space_size(const SirConfig& cfg);

// Number of agents ever infected (currently infected or recovered).
int sir_theta(const SirState& s);

// Joint motion choices: Cartesian product over agents of the out-neighborhood
// of their current position, agent 1 most significant.
std::vector<std::vector<int>> sir_actions(const SirState& s, const SirConfig& cfg);

// One analysis step: positions move deterministically per the action while
// statuses update independently per agent from the CURRENT colocation pattern
// (a susceptible sharing a position with c infected agents turns infected with
// probability 1-(1-alpha)^c; infected recover with probability beta).
// Returned as (successor state, probability), successors distinct and sorted.
std::vector<std::pair<SirState, double>> sir_transition(const SirState& s, const std::vector<int>& action,
                                                        const SirConfig& cfg);

// All states reachable from x0; ordinal 1 is x0 itself, the rest follow in
// breadth-first discovery order. The MDP view indexes states by ordinal.
class SirModel {
public:
  explicit SirModel(SirConfig cfg);

  const SirConfig& config() const { return cfg_; }
  int closure_size() const { return static_cast<int>(states_.size()); }
  const SirState& state(int ordinal) const { return states_[static_cast<std::size_t>(ordinal - 1)]; }
  int ordinal_of(const SirState& s) const;  // 0 if not reachable
  int theta(int ordinal) const { return theta_[static_cast<std::size_t>(ordinal - 1)]; }
  bool terminal(int ordinal) const;  // no infected agent remains

  // MDP over closure ordinals; attach a reward to use with the solvers.
  MdpModel mdp() const;
  // Cumulative-infected increment reward, sign +1 for the upper objective
  // (theta(next)-theta(cur)) and -1 for the lower one.
  RewardFn increment_reward(double sign) const;

  // Expected theta under uniform random motion, steps 0..K.
  std::vector<double> expected_infected_uniform(int K) const;

  struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
    int iterations_lower = 0;
    int iterations_upper = 0;
  };
  // theta(x0) -/+ the optimal total-increment values from infinite-horizon
  // value iteration; brackets every expected trajectory of theta.
  Bounds infected_bounds(double tol = 1e-12, int max_iterations = 100000) const;

  struct MonteCarloResult {
    std::vector<double> mean;    // steps 0..K
    std::vector<double> stderr_; // matching standard errors
  };
  // Uniform-motion simulation. Sample j always uses RNG stream j derived from
  // seed, and the per-step statistics are exact integer sums, so results are
  // byte-identical for any thread count.
  MonteCarloResult monte_carlo(int K, long samples, std::uint64_t seed, int threads = 1) const;

private:
  SirConfig cfg_;
  std::vector<SirState> states_;
  std::vector<int> theta_;
  std::map<SirState, int> ordinal_;
};

}  // namespace stodi
