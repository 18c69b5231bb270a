#include "core/reachability.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace stodi {

ValueTable value_iteration(const MdpModel& m, int K) {
  if (K < 0) throw_invalid("horizon must be nonnegative");
  int S = m.state_count();
  ValueTable table;
  table.values = Matrix(static_cast<std::size_t>(K) + 1, static_cast<std::size_t>(S));
  table.greedy.assign(static_cast<std::size_t>(K) + 1, std::vector<int>(static_cast<std::size_t>(S), 0));
  for (int k = 1; k <= K; ++k) {
    for (int x = 1; x <= S; ++x) {
      double best = 0.0;
      int best_a = 1;
      for (int a = 1; a <= m.action_count(x); ++a) {
        double total = 0.0;
        for (const auto& t : m.transition(x, a))
          total += t.prob * (m.reward_at(x, a, t.next) +
                             table.values.at(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(t.next - 1)));
        if (a == 1 || total > best) {
          best = total;
          best_a = a;
        }
      }
      table.values.at(static_cast<std::size_t>(k), static_cast<std::size_t>(x - 1)) = best;
      table.greedy[static_cast<std::size_t>(k)][static_cast<std::size_t>(x - 1)] = best_a;
    }
  }
  return table;
}

InfiniteHorizonResult infinite_horizon_value_iteration(const MdpModel& m, double tol, int max_iterations) {
  int S = m.state_count();
  InfiniteHorizonResult res;
  res.values.assign(static_cast<std::size_t>(S), 0.0);
  res.greedy.assign(static_cast<std::size_t>(S), 1);
  std::vector<double> next(static_cast<std::size_t>(S), 0.0);
  for (int it = 1; it <= max_iterations; ++it) {
    double delta = 0.0;
    for (int x = 1; x <= S; ++x) {
      double best = 0.0;
      int best_a = 1;
      for (int a = 1; a <= m.action_count(x); ++a) {
        double total = 0.0;
        for (const auto& t : m.transition(x, a))
          total += t.prob * (m.reward_at(x, a, t.next) + res.values[static_cast<std::size_t>(t.next - 1)]);
        if (a == 1 || total > best) {
          best = total;
          best_a = a;
        }
      }
      next[static_cast<std::size_t>(x - 1)] = best;
      res.greedy[static_cast<std::size_t>(x - 1)] = best_a;
      delta = std::max(delta, std::abs(best - res.values[static_cast<std::size_t>(x - 1)]));
    }
    res.values.swap(next);
    res.iterations = it;
    if (delta < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

PolicyFn uniform_policy(const MdpModel& m) {
  auto dyn = m.dynamics;
  return [dyn](int, int x) {
    int count = dyn->action_count(x);
    std::vector<std::pair<int, double>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int a = 1; a <= count; ++a) out.emplace_back(a, 1.0 / count);
    return out;
  };
}

PolicyFn stationary_policy(std::vector<int> action_per_state) {
  return [acts = std::move(action_per_state)](int, int x) {
    return std::vector<std::pair<int, double>>{{acts[static_cast<std::size_t>(x - 1)], 1.0}};
  };
}

PolicyFn greedy_policy(const ValueTable& table) {
  return [greedy = table.greedy](int k, int x) {
    int kk = std::clamp(k, 1, static_cast<int>(greedy.size()) - 1);
    return std::vector<std::pair<int, double>>{{greedy[static_cast<std::size_t>(kk)][static_cast<std::size_t>(x - 1)], 1.0}};
  };
}

Matrix policy_evaluation(const MdpModel& m, const PolicyFn& pi, int K) {
  if (K < 0) throw_invalid("horizon must be nonnegative");
  int S = m.state_count();
  Matrix v(static_cast<std::size_t>(K) + 1, static_cast<std::size_t>(S));
  for (int k = 1; k <= K; ++k)
    for (int x = 1; x <= S; ++x) {
      double total = 0.0;
      for (const auto& [a, pa] : pi(k, x)) {
        if (pa == 0.0) continue;
        double inner = 0.0;
        for (const auto& t : m.transition(x, a))
          inner += t.prob *
                   (m.reward_at(x, a, t.next) + v.at(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(t.next - 1)));
        total += pa * inner;
      }
      v.at(static_cast<std::size_t>(k), static_cast<std::size_t>(x - 1)) = total;
    }
  return v;
}

RewardFn proxy_entry_reward(NodeId proxy, double sign) {
  return [proxy, sign](int, int, int j) { return j == proxy ? sign : 0.0; };
}

namespace {

ReachResult reach_objective(const StochasticDigraph& sd, const std::set<NodeId>& Q, int K, bool pessimistic) {
  ReachResult res;
  res.augmented = augment_for_target(sd, Q);
  MdpModel model = attach_reward(local_mdp(res.augmented.graph),
                                 proxy_entry_reward(res.augmented.target_proxy, pessimistic ? -1.0 : 1.0));
  res.full_table = value_iteration(model, K);
  auto n = static_cast<std::size_t>(sd.n());
  res.values = Matrix(static_cast<std::size_t>(K) + 1, n);
  for (int k = 0; k <= K; ++k)
    for (std::size_t x = 0; x < n; ++x) {
      double raw = res.full_table.values.at(static_cast<std::size_t>(k), x);
      res.values.at(static_cast<std::size_t>(k), x) = pessimistic ? 0.0 - raw : raw;
    }
  return res;
}

ReachLimit reach_limit(const StochasticDigraph& sd, const std::set<NodeId>& Q, double tol,
                       int max_iterations, bool pessimistic) {
  AugmentedDigraph aug = augment_for_target(sd, Q);
  MdpModel model =
      attach_reward(local_mdp(aug.graph), proxy_entry_reward(aug.target_proxy, pessimistic ? -1.0 : 1.0));
  auto res = infinite_horizon_value_iteration(model, tol, max_iterations);
  ReachLimit out;
  out.values.resize(static_cast<std::size_t>(sd.n()));
  for (std::size_t x = 0; x < out.values.size(); ++x)
    out.values[x] = pessimistic ? 0.0 - res.values[x] : res.values[x];
  out.iterations = res.iterations;
  out.converged = res.converged;
  return out;
}

}  // namespace

ReachResult weak_reachability(const StochasticDigraph& sd, const std::set<NodeId>& Q, int K) {
  return reach_objective(sd, Q, K, false);
}

ReachResult strong_recurrence(const StochasticDigraph& sd, const std::set<NodeId>& Q, int K) {
  return reach_objective(sd, Q, K, true);
}

ReachLimit weak_reachability_limit(const StochasticDigraph& sd, const std::set<NodeId>& Q, double tol,
                                   int max_iterations) {
  return reach_limit(sd, Q, tol, max_iterations, false);
}

ReachLimit strong_recurrence_limit(const StochasticDigraph& sd, const std::set<NodeId>& Q, double tol,
                                   int max_iterations) {
  return reach_limit(sd, Q, tol, max_iterations, true);
}

}  // namespace stodi
