#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "core/digraph.hpp"
#include "core/error.hpp"
#include "core/mdp.hpp"
#include "core/reachability.hpp"
#include "core/rl.hpp"
#include "core/rng.hpp"
#include "testutil.hpp"

using namespace stodi;
using testutil::example_graph;

namespace {

struct ReachSetup {
  AugmentedDigraph aug;
  MdpModel model;
  TerminalFn terminal;
};

ReachSetup reach_setup(const StochasticDigraph& sd, const std::set<NodeId>& Q, double sign = 1.0) {
  ReachSetup s;
  s.aug = augment_for_target(sd, Q);
  s.model = attach_reward(local_mdp(s.aug.graph), proxy_entry_reward(s.aug.target_proxy, sign));
  NodeId proxy = s.aug.target_proxy, term = s.aug.terminal;
  s.terminal = [proxy, term](int x) { return x == proxy || x == term; };
  return s;
}

RlParams params_with_seed(std::uint64_t seed, long episodes = 10000) {
  RlParams p;
  p.seed = seed;
  p.episodes = episodes;
  return p;
}

}  // namespace

TEST_CASE("learning on a zero-reward model stays at zero") {
  ReachSetup s = reach_setup(example_graph(), {4});
  MdpModel zero = s.model;
  zero.reward = nullptr;
  RlResult r = run_rl(zero, 1, s.terminal, RlAlgo::Sarsa, params_with_seed(1, 500));
  CHECK(r.estimate == 0.0);
}

TEST_CASE("a one-step certain reward is learned to machine-level accuracy") {
  StochasticDigraph sd(2, {Digraph(2, {{1, 2}, {2, 2}})}, {1.0});
  ReachSetup s = reach_setup(sd, {2});
  for (RlAlgo algo : {RlAlgo::Sarsa, RlAlgo::QLearning}) {
    RlResult r = run_rl(s.model, 1, s.terminal, algo, params_with_seed(2));
    CHECK(std::abs(r.estimate - 1.0) <= 1e-6);
    CHECK(r.table.visits[0][0] > 0);
  }
}

TEST_CASE("greedy-only learning masters a deterministic chain") {
  StochasticDigraph sd(3, {Digraph(3, {{1, 2}, {2, 3}, {3, 3}})}, {1.0});
  ReachSetup s = reach_setup(sd, {3});
  RlParams p = params_with_seed(3);
  p.epsilon = 0.0;
  for (RlAlgo algo : {RlAlgo::Sarsa, RlAlgo::QLearning}) {
    RlResult r = run_rl(s.model, 1, s.terminal, algo, p);
    CHECK(std::abs(r.estimate - 1.0) <= 1e-5);
  }
}

TEST_CASE("both algorithms approach the exact visit probability on the four-node example") {
  StochasticDigraph sd = example_graph();
  ReachSetup s = reach_setup(sd, {4});
  ReachLimit limit = weak_reachability_limit(sd, {4});
  double target = limit.values[0];  // node 1; equals 1 here
  for (RlAlgo algo : {RlAlgo::Sarsa, RlAlgo::QLearning}) {
    RlResult r = run_rl(s.model, 1, s.terminal, algo, params_with_seed(5));
    CHECK(std::abs(r.estimate - target) <= 0.05);
  }
}

TEST_CASE("identical seeds give bitwise-identical runs") {
  ReachSetup s = reach_setup(example_graph(), {4});
  RlResult a = run_rl(s.model, 1, s.terminal, RlAlgo::QLearning, params_with_seed(7, 2000), true);
  RlResult b = run_rl(s.model, 1, s.terminal, RlAlgo::QLearning, params_with_seed(7, 2000), true);
  CHECK(a.estimate == b.estimate);
  REQUIRE(a.trace.size() == 2000);
  CHECK(a.trace == b.trace);
  CHECK(a.table.q == b.table.q);

  // A different seed must produce a different run. The final estimates can
  // coincide (both saturate at the certain-visit value), so compare the
  // per-episode traces, which record the whole trajectory of the run.
  RlResult c = run_rl(s.model, 1, s.terminal, RlAlgo::QLearning, params_with_seed(8, 2000), true);
  CHECK(a.trace != c.trace);
}

TEST_CASE("estimates stay inside the probability bracket for visit problems") {
  std::mt19937_64 rng = make_engine(13);
  for (int trial = 0; trial < 8; ++trial) {
    StochasticDigraph sd = testutil::random_sa1_graph(rng);
    std::set<NodeId> Q = testutil::random_target(rng, sd.n());
    ReachSetup s = reach_setup(sd, Q);
    RlResult r = run_rl(s.model, 1, s.terminal, trial % 2 ? RlAlgo::Sarsa : RlAlgo::QLearning,
                        params_with_seed(100 + static_cast<std::uint64_t>(trial), 3000));
    CHECK(r.estimate >= 0.0);
    CHECK(r.estimate <= 1.0 + 1e-9);
  }
}

TEST_CASE("parameter validation") {
  ReachSetup s = reach_setup(example_graph(), {4});
  RlParams p;
  p.learning_rate = 0.0;
  CHECK_THROWS_AS(run_rl(s.model, 1, s.terminal, RlAlgo::Sarsa, p), Error);
  p = RlParams{};
  p.epsilon = 1.5;
  CHECK_THROWS_AS(run_rl(s.model, 1, s.terminal, RlAlgo::Sarsa, p), Error);
  p = RlParams{};
  p.episodes = 0;
  CHECK_THROWS_AS(run_rl(s.model, 1, s.terminal, RlAlgo::Sarsa, p), Error);
  p = RlParams{};
  p.horizon_cap = 0;
  CHECK_THROWS_AS(run_rl(s.model, 1, s.terminal, RlAlgo::Sarsa, p), Error);
  p = RlParams{};
  CHECK_THROWS_AS(run_rl(s.model, 0, s.terminal, RlAlgo::Sarsa, p), Error);
}

TEST_CASE("episode sampling: terminal start, determinism, and hit frequency") {
  ReachSetup s = reach_setup(example_graph(), {4});

  std::mt19937_64 rng = make_engine(19);
  CHECK(sample_episode(s.model, s.aug.target_proxy, uniform_policy(s.model), s.terminal, rng, 100).empty());

  // A deterministic chain yields the same trajectory every time.
  StochasticDigraph chain(3, {Digraph(3, {{1, 2}, {2, 3}, {3, 3}})}, {1.0});
  ReachSetup cs = reach_setup(chain, {3});
  for (int rep = 0; rep < 3; ++rep) {
    auto traj = sample_episode(cs.model, 1, uniform_policy(cs.model), cs.terminal, rng, 100);
    REQUIRE(traj.size() == 2);
    CHECK(traj[0].state == 1);
    CHECK(traj[0].next == 2);
    CHECK(traj[0].reward == 0.0);
    CHECK(traj[1].state == 2);
    CHECK(traj[1].next == cs.aug.target_proxy);
    CHECK(traj[1].reward == 1.0);
  }

  // Empirical visit frequency under the uniform policy matches its exact
  // K-step evaluation within three standard errors.
  const int K = 6;
  Matrix v = policy_evaluation(s.model, uniform_policy(s.model), K);
  double p = v.at(K, 0);  // start node 1
  const int M = 100000;
  int hits = 0;
  std::mt19937_64 sim = make_engine(23);
  for (int i = 0; i < M; ++i) {
    auto traj = sample_episode(s.model, 1, uniform_policy(s.model), s.terminal, sim, K);
    for (const auto& step : traj)
      if (step.next == s.aug.target_proxy) {
        ++hits;
        break;
      }
  }
  double phat = static_cast<double>(hits) / M;
  double sigma = std::sqrt(p * (1.0 - p) / M);
  CHECK(std::abs(phat - p) <= 3.0 * sigma + 1e-12);
}
