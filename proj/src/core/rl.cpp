#include "core/rl.hpp"

#include "core/error.hpp"

namespace stodi {

int sample_transition(const MdpModel& m, int state, int action, std::mt19937_64& rng) {
  const auto& dist = m.transition(state, action);
  double u = uniform01(rng);
  double acc = 0.0;
  for (const auto& t : dist) {
    acc += t.prob;
    if (u < acc) return t.next;
  }
  return dist.back().next;  // guard against rounding at u ~ 1
}

namespace {

int greedy_action(const std::vector<double>& row) {
  int best = 1;
  for (std::size_t a = 1; a < row.size(); ++a)
    if (row[a] > row[static_cast<std::size_t>(best - 1)]) best = static_cast<int>(a) + 1;
  return best;
}

int epsilon_greedy(const std::vector<double>& row, double epsilon, std::mt19937_64& rng) {
  if (epsilon > 0.0 && uniform01(rng) < epsilon)
    return static_cast<int>(uniform_below(rng, row.size())) + 1;
  return greedy_action(row);
}

}  // namespace

RlResult run_rl(const MdpModel& m, int start, const TerminalFn& terminal, RlAlgo algo, const RlParams& params,
                bool record_trace) {
  if (start < 1 || start > m.state_count()) throw_invalid("start state out of range");
  if (params.learning_rate <= 0.0 || params.learning_rate > 1.0) throw_invalid("learning rate must be in (0,1]");
  if (params.epsilon < 0.0 || params.epsilon > 1.0) throw_invalid("epsilon must be in [0,1]");
  if (params.episodes <= 0) throw_invalid("episode count must be positive");
  if (params.horizon_cap <= 0) throw_invalid("horizon cap must be positive");
  if (params.discount <= 0.0 || params.discount > 1.0) throw_invalid("discount must be in (0,1]");

  RlResult res;
  auto S = static_cast<std::size_t>(m.state_count());
  res.table.q.resize(S);
  res.table.visits.resize(S);
  for (std::size_t x = 0; x < S; ++x) {
    auto count = static_cast<std::size_t>(m.action_count(static_cast<int>(x) + 1));
    res.table.q[x].assign(count, 0.0);
    res.table.visits[x].assign(count, 0);
  }
  if (record_trace) res.trace.reserve(static_cast<std::size_t>(params.episodes));

  std::mt19937_64 rng = make_engine(params.seed);
  const double lr = params.learning_rate;
  const double gamma = params.discount;

  for (long ep = 0; ep < params.episodes; ++ep) {
    int state = start;
    int action = 0;  // 0 = not chosen yet; SARSA carries the next action over
    if (!terminal(state)) {
      for (long step = 0; step < params.horizon_cap; ++step) {
        if (action == 0)
          action = epsilon_greedy(res.table.q[static_cast<std::size_t>(state - 1)], params.epsilon, rng);
        int next = sample_transition(m, state, action, rng);
        double r = m.reward_at(state, action, next);
        double& qsa = res.table.q[static_cast<std::size_t>(state - 1)][static_cast<std::size_t>(action - 1)];
        ++res.table.visits[static_cast<std::size_t>(state - 1)][static_cast<std::size_t>(action - 1)];
        if (terminal(next)) {
          qsa += lr * (r - qsa);
          break;
        }
        if (algo == RlAlgo::Sarsa) {
          // On-policy: the successor action is drawn before the update and is
          // both the bootstrap target and the action actually taken next.
          int next_action =
              epsilon_greedy(res.table.q[static_cast<std::size_t>(next - 1)], params.epsilon, rng);
          double bootstrap = res.table.q[static_cast<std::size_t>(next - 1)][static_cast<std::size_t>(next_action - 1)];
          qsa += lr * (r + gamma * bootstrap - qsa);
          action = next_action;
        } else {
          // Off-policy: bootstrap on the greedy value; the behavior action for
          // the next step is drawn fresh after this update takes effect.
          const auto& row = res.table.q[static_cast<std::size_t>(next - 1)];
          double bootstrap = row[static_cast<std::size_t>(greedy_action(row) - 1)];
          qsa += lr * (r + gamma * bootstrap - qsa);
          action = 0;
        }
        state = next;
      }
    }
    if (record_trace) res.trace.push_back(res.table.value(start));
  }
  res.estimate = res.table.value(start);
  return res;
}

std::vector<EpisodeStep> sample_episode(const MdpModel& m, int start, const PolicyFn& policy,
                                        const TerminalFn& terminal, std::mt19937_64& rng, long horizon_cap) {
  std::vector<EpisodeStep> traj;
  int state = start;
  for (long step = 0; step < horizon_cap && !terminal(state); ++step) {
    auto dist = policy(0, state);
    double u = uniform01(rng);
    double acc = 0.0;
    int action = dist.back().first;
    for (const auto& [a, pa] : dist) {
      acc += pa;
      if (u < acc) {
        action = a;
        break;
      }
    }
    int next = sample_transition(m, state, action, rng);
    traj.push_back({state, action, m.reward_at(state, action, next), next});
    state = next;
  }
  return traj;
}

}  // namespace stodi
