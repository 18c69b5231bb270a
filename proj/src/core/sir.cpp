#include "core/sir.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "core/error.hpp"
#include "core/fraction.hpp"
#include "core/json_io.hpp"
#include "core/reachability.hpp"
#include "core/rng.hpp"

namespace stodi {

using nlohmann::json;

namespace {

double probability_field(const json& doc, const char* field, const std::string& source) {
  if (!doc.contains(field)) throw_parse(source + ": field '" + std::string(field) + "' missing");
  const json& v = doc[field];
  double p;
  if (v.is_string())
    p = parse_probability(v.get<std::string>());
  else if (v.is_number())
    p = v.get<double>();
  else
    throw_parse(source + ": field '" + std::string(field) + "' must be a number or \"p/q\" string");
  if (p < 0.0 || p > 1.0) throw_parse(source + ": field '" + std::string(field) + "' must lie in [0,1]");
  return p;
}

}  // namespace

SirConfig parse_sir_json(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw_parse(source + ": " + e.what());
  }
  if (!doc.is_object()) throw_parse(source + ": top level must be an object");
  if (!doc.contains("N") || !doc["N"].is_number_integer())
    throw_parse(source + ": field 'N' (agent count) missing or not an integer");

  SirConfig cfg;
  cfg.N = doc["N"].get<int>();
  if (cfg.N < 1) throw_parse(source + ": field 'N' must be at least 1");
  cfg.alpha = probability_field(doc, "alpha", source);
  cfg.beta = probability_field(doc, "beta", source);

  if (!doc.contains("motion") || !doc["motion"].is_object())
    throw_parse(source + ": field 'motion' missing or not an object");
  const json& motion = doc["motion"];
  if (!motion.contains("kappa") || !motion["kappa"].is_number_integer())
    throw_parse(source + ": field 'motion.kappa' missing or not an integer");
  int kappa = motion["kappa"].get<int>();
  if (!motion.contains("edges") || !motion["edges"].is_array())
    throw_parse(source + ": field 'motion.edges' missing or not an array");
  bool directed = motion.value("directed", false);
  std::vector<Edge> edges;
  for (const json& e : motion["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw_parse(source + ": field 'motion.edges' contains a malformed edge (want [u,v])");
    int u = e[0].get<int>(), v = e[1].get<int>();
    edges.emplace_back(u, v);
    if (!directed) edges.emplace_back(v, u);
  }
  try {
    cfg.motion = Digraph(kappa, std::move(edges));
  } catch (const Error& err) {
    throw_parse(source + ": motion: " + err.what());
  }
  for (int x = 1; x <= kappa; ++x)
    if (cfg.motion.out_neighborhood(x).empty())
      throw_parse(source + ": motion node " + std::to_string(x) +
                  " has no outgoing edge; agents there could never move");

  if (!doc.contains("x0") || !doc["x0"].is_array())
    throw_parse(source + ": field 'x0' missing or not an array");
  if (doc["x0"].size() != static_cast<std::size_t>(cfg.N))
    throw_parse(source + ": field 'x0' must list exactly N agent states");
  for (const json& a : doc["x0"]) {
    if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() || !a[1].is_number_integer())
      throw_parse(source + ": field 'x0' entries must be [status, position] pairs");
    AgentState st{a[0].get<int>(), a[1].get<int>()};
    if (st.sigma < 1 || st.sigma > 3)
      throw_parse(source + ": agent status must be 1 (susceptible), 2 (infected) or 3 (recovered)");
    if (st.pos < 1 || st.pos > kappa) throw_parse(source + ": agent position out of range 1.." + std::to_string(kappa));
    cfg.x0.push_back(st);
  }
  return cfg;
}

SirConfig load_sir(const std::string& path) { return parse_sir_json(read_file(path), path); }

std::uint64_t sir_state_space_size(const SirConfig& cfg) {
  std::uint64_t base = static_cast<std::uint64_t>(3) * static_cast<std::uint64_t>(cfg.kappa());
  std::uint64_t total = 1;
  for (int i = 0; i < cfg.N; ++i) {
    if (total > (std::uint64_t{1} << 62) / base) throw_capacity("state space exceeds 2^62 indices");
    total *= base;
  }
  return total;
}

std::uint64_t sir_encode(const SirState& s, const SirConfig& cfg) {
  if (static_cast<int>(s.size()) != cfg.N) throw_invalid("state has wrong agent count");
  std::uint64_t base = static_cast<std::uint64_t>(3) * static_cast<std::uint64_t>(cfg.kappa());
  std::uint64_t index = 0;
  for (const AgentState& a : s) {
    if (a.sigma < 1 || a.sigma > 3) throw_invalid("agent status out of range");
    if (a.pos < 1 || a.pos > cfg.kappa()) throw_invalid("agent position out of range");
    std::uint64_t digit =
        static_cast<std::uint64_t>(a.sigma - 1) * static_cast<std::uint64_t>(cfg.kappa()) + static_cast<std::uint64_t>(a.pos - 1);
    index = index * base + digit;
  }
  return index + 1;
}

SirState sir_decode(std::uint64_t index, const SirConfig& cfg) {
  std::uint64_t total = sir_state_space_size(cfg);
  if (index < 1 || index > total) throw_invalid("state index out of range");
  std::uint64_t base = static_cast<std::uint64_t>(3) * static_cast<std::uint64_t>(cfg.kappa());
  std::uint64_t rest = index - 1;
  SirState s(static_cast<std::size_t>(cfg.N));
  for (int i = cfg.N - 1; i >= 0; --i) {
    std::uint64_t digit = rest % base;
    rest /= base;
    s[static_cast<std::size_t>(i)].sigma = static_cast<int>(digit / static_cast<std::uint64_t>(cfg.kappa())) + 1;
    s[static_cast<std::size_t>(i)].pos = static_cast<int>(digit % static_cast<std::uint64_t>(cfg.kappa())) + 1;
  }
  return s;
}

int sir_theta(const SirState& s) {
  int count = 0;
  for (const AgentState& a : s)
    if (a.sigma != 1) ++count;
  return count;
}

std::vector<std::vector<int>> sir_actions(const SirState& s, const SirConfig& cfg) {
  std::uint64_t count = 1;
  for (const AgentState& a : s) {
    std::size_t deg = cfg.motion.out_neighborhood(a.pos).size();
    if (deg == 0) throw_precondition("motion node " + std::to_string(a.pos) + " has no outgoing edge");
    if (count > (std::uint64_t{1} << 31) / deg) throw_capacity("joint motion action space exceeds 2^31 tuples");
    count *= deg;
  }
  std::vector<std::vector<int>> actions;
  actions.reserve(count);
  std::vector<std::size_t> choice(s.size(), 0);
  for (;;) {
    std::vector<int> act(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) act[i] = cfg.motion.out_neighborhood(s[i].pos)[choice[i]];
    actions.push_back(std::move(act));
    auto pos = static_cast<int>(s.size()) - 1;
    while (pos >= 0) {
      auto& c = choice[static_cast<std::size_t>(pos)];
      if (++c < cfg.motion.out_neighborhood(s[static_cast<std::size_t>(pos)].pos).size()) break;
      c = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return actions;
}

std::vector<std::pair<SirState, double>> sir_transition(const SirState& s, const std::vector<int>& action,
                                                        const SirConfig& cfg) {
  if (action.size() != s.size()) throw_invalid("action has wrong agent count");
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& nbrs = cfg.motion.out_neighborhood(s[i].pos);
    if (!std::binary_search(nbrs.begin(), nbrs.end(), action[i]))
      throw_invalid("action moves agent " + std::to_string(i + 1) + " along a missing edge");
  }

  // Per-agent status branches from the current colocation pattern.
  std::vector<std::vector<std::pair<int, double>>> branches(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const AgentState& a = s[i];
    if (a.sigma == 1) {
      int contacts = 0;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != i && s[j].pos == a.pos && s[j].sigma == 2) ++contacts;
      double stay = std::pow(1.0 - cfg.alpha, contacts);
      if (stay > 0.0) branches[i].push_back({1, stay});
      if (stay < 1.0) branches[i].push_back({2, 1.0 - stay});
    } else if (a.sigma == 2) {
      if (cfg.beta < 1.0) branches[i].push_back({2, 1.0 - cfg.beta});
      if (cfg.beta > 0.0) branches[i].push_back({3, cfg.beta});
    } else {
      branches[i].push_back({3, 1.0});
    }
  }

  std::map<SirState, double> agg;
  SirState succ(s.size());
  std::vector<std::size_t> choice(s.size(), 0);
  for (;;) {
    double prob = 1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      succ[i].sigma = branches[i][choice[i]].first;
      succ[i].pos = action[i];
      prob *= branches[i][choice[i]].second;
    }
    agg[succ] += prob;
    auto pos = static_cast<int>(s.size()) - 1;
    while (pos >= 0) {
      auto& c = choice[static_cast<std::size_t>(pos)];
      if (++c < branches[static_cast<std::size_t>(pos)].size()) break;
      c = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return {agg.begin(), agg.end()};
}

SirModel::SirModel(SirConfig cfg) : cfg_(std::move(cfg)) {
  if (static_cast<int>(cfg_.x0.size()) != cfg_.N) throw_invalid("config is missing the initial state x0");
  states_.push_back(cfg_.x0);
  ordinal_[cfg_.x0] = 1;
  for (std::size_t head = 0; head < states_.size(); ++head) {
    SirState current = states_[head];  // copy: states_ may reallocate below
    for (const auto& act : sir_actions(current, cfg_)) {
      for (const auto& [succ, prob] : sir_transition(current, act, cfg_)) {
        (void)prob;
        if (ordinal_.emplace(succ, static_cast<int>(states_.size()) + 1).second) states_.push_back(succ);
      }
    }
  }
  theta_.reserve(states_.size());
  for (const auto& st : states_) theta_.push_back(sir_theta(st));
}

int SirModel::ordinal_of(const SirState& s) const {
  auto it = ordinal_.find(s);
  return it == ordinal_.end() ? 0 : it->second;
}

bool SirModel::terminal(int ordinal) const {
  for (const AgentState& a : state(ordinal))
    if (a.sigma == 2) return false;
  return true;
}

namespace {

class SirMdpDynamics final : public MdpDynamics {
public:
  explicit SirMdpDynamics(const SirModel* model) : model_(model) {}
  int state_count() const override { return model_->closure_size(); }
  int action_count(int state) const override {
    return static_cast<int>(sir_actions(model_->state(state), model_->config()).size());
  }

protected:
  TransitionDistribution compute_transition(int state, int action) const override {
    auto actions = sir_actions(model_->state(state), model_->config());
    auto raw = sir_transition(model_->state(state), actions[static_cast<std::size_t>(action - 1)], model_->config());
    TransitionDistribution dist;
    dist.reserve(raw.size());
    for (const auto& [succ, prob] : raw) dist.push_back({model_->ordinal_of(succ), prob});
    std::sort(dist.begin(), dist.end(), [](const auto& a, const auto& b) { return a.next < b.next; });
    return dist;
  }

private:
  const SirModel* model_;
};

}  // namespace

MdpModel SirModel::mdp() const { return MdpModel{std::make_shared<SirMdpDynamics>(this), nullptr}; }

RewardFn SirModel::increment_reward(double sign) const {
  return [this, sign](int i, int, int j) { return sign * (theta(j) - theta(i)); };
}

std::vector<double> SirModel::expected_infected_uniform(int K) const {
  auto S = static_cast<std::size_t>(closure_size());
  // Sparse uniform-motion chain rows over closure ordinals.
  std::vector<std::vector<std::pair<int, double>>> rows(S);
  MdpModel model = mdp();
  for (int i = 1; i <= closure_size(); ++i) {
    std::map<int, double> agg;
    int count = model.action_count(i);
    double weight = 1.0 / count;
    for (int a = 1; a <= count; ++a)
      for (const auto& t : model.transition(i, a)) agg[t.next] += weight * t.prob;
    rows[static_cast<std::size_t>(i - 1)] = {agg.begin(), agg.end()};
  }

  std::vector<double> rho(S, 0.0), next(S);
  rho[0] = 1.0;  // ordinal 1 is x0
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(K) + 1);
  for (int k = 0;; ++k) {
    double expect = 0.0;
    for (std::size_t i = 0; i < S; ++i) expect += rho[i] * theta_[i];
    out.push_back(expect);
    if (k == K) break;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < S; ++i)
      if (rho[i] != 0.0)
        for (const auto& [j, p] : rows[i]) next[static_cast<std::size_t>(j - 1)] += rho[i] * p;
    rho.swap(next);
  }
  return out;
}

SirModel::Bounds SirModel::infected_bounds(double tol, int max_iterations) const {
  Bounds b;
  double theta0 = theta_[0];
  {
    auto res = infinite_horizon_value_iteration(attach_reward(mdp(), increment_reward(+1.0)), tol, max_iterations);
    if (!res.converged)
      throw Error(ErrorKind::NoConvergence,
                  "value iteration for the upper bound did not converge within " + std::to_string(max_iterations) +
                      " iterations");
    b.upper = theta0 + res.values[0];
    b.iterations_upper = res.iterations;
  }
  {
    auto res = infinite_horizon_value_iteration(attach_reward(mdp(), increment_reward(-1.0)), tol, max_iterations);
    if (!res.converged)
      throw Error(ErrorKind::NoConvergence,
                  "value iteration for the lower bound did not converge within " + std::to_string(max_iterations) +
                      " iterations");
    b.lower = theta0 - res.values[0];
    b.iterations_lower = res.iterations;
  }
  return b;
}

SirModel::MonteCarloResult SirModel::monte_carlo(int K, long samples, std::uint64_t seed, int threads) const {
  if (samples < 1) throw_invalid("sample count must be positive");
  if (K < 0) throw_invalid("horizon must be nonnegative");
  if (threads < 1) threads = 1;

  auto steps = static_cast<std::size_t>(K) + 1;
  // theta is integer-valued, so per-step sums of theta and theta^2 are exact
  // 64-bit integers; any partition of the sample range yields the same totals.
  auto simulate_range = [&](long lo, long hi, std::vector<std::int64_t>& sum, std::vector<std::int64_t>& sumsq) {
    for (long sample = lo; sample < hi; ++sample) {
      std::mt19937_64 rng = make_engine(seed, static_cast<std::uint64_t>(sample));
      SirState state = cfg_.x0;
      for (std::size_t k = 0; k < steps; ++k) {
        int th = sir_theta(state);
        sum[k] += th;
        sumsq[k] += static_cast<std::int64_t>(th) * th;
        if (k + 1 == steps) break;
        SirState nxt(state.size());
        for (std::size_t i = 0; i < state.size(); ++i) {
          const AgentState& a = state[i];
          if (a.sigma == 1) {
            int contacts = 0;
            for (std::size_t j = 0; j < state.size(); ++j)
              if (j != i && state[j].pos == a.pos && state[j].sigma == 2) ++contacts;
            if (contacts > 0) {
              double infect = 1.0 - std::pow(1.0 - cfg_.alpha, contacts);
              nxt[i].sigma = uniform01(rng) < infect ? 2 : 1;
            } else {
              nxt[i].sigma = 1;
            }
          } else if (a.sigma == 2) {
            nxt[i].sigma = uniform01(rng) < cfg_.beta ? 3 : 2;
          } else {
            nxt[i].sigma = 3;
          }
        }
        for (std::size_t i = 0; i < state.size(); ++i) {
          const auto& nbrs = cfg_.motion.out_neighborhood(state[i].pos);
          nxt[i].pos = nbrs[static_cast<std::size_t>(uniform_below(rng, nbrs.size()))];
        }
        state = std::move(nxt);
      }
    }
  };

  std::vector<std::int64_t> sum(steps, 0), sumsq(steps, 0);
  if (threads == 1) {
    simulate_range(0, samples, sum, sumsq);
  } else {
    std::vector<std::vector<std::int64_t>> sums(static_cast<std::size_t>(threads), std::vector<std::int64_t>(steps, 0));
    std::vector<std::vector<std::int64_t>> sumsqs(static_cast<std::size_t>(threads), std::vector<std::int64_t>(steps, 0));
    std::vector<std::thread> pool;
    long chunk = (samples + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      long lo = t * chunk, hi = std::min(samples, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, t, lo, hi] { simulate_range(lo, hi, sums[static_cast<std::size_t>(t)], sumsqs[static_cast<std::size_t>(t)]); });
    }
    for (auto& th : pool) th.join();
    for (std::size_t t = 0; t < sums.size(); ++t)
      for (std::size_t k = 0; k < steps; ++k) {
        sum[k] += sums[t][k];
        sumsq[k] += sumsqs[t][k];
      }
  }

  MonteCarloResult res;
  res.mean.resize(steps);
  res.stderr_.resize(steps);
  auto M = static_cast<double>(samples);
  for (std::size_t k = 0; k < steps; ++k) {
    double mean = static_cast<double>(sum[k]) / M;
    res.mean[k] = mean;
    if (samples > 1) {
      double variance = (static_cast<double>(sumsq[k]) - M * mean * mean) / (M - 1.0);
      if (variance < 0.0) variance = 0.0;
      res.stderr_[k] = std::sqrt(variance / M);
    } else {
      res.stderr_[k] = 0.0;
    }
  }
  return res;
}

}  // namespace stodi
