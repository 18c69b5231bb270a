#include "stodi/stodi.h"

#include <cstring>
#include <exception>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/bounds.hpp"
#include "core/decomposition.hpp"
#include "core/digraph.hpp"
#include "core/error.hpp"
#include "core/fraction.hpp"
#include "core/json_io.hpp"
#include "core/mdp.hpp"
#include "core/reachability.hpp"
#include "core/rl.hpp"
#include "core/rng.hpp"
#include "core/sir.hpp"

using namespace stodi;

namespace {

thread_local std::string g_last_error;

stodi_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return STODI_ERR_INVALID_ARGUMENT;
    case ErrorKind::Parse: return STODI_ERR_PARSE;
    case ErrorKind::Io: return STODI_ERR_IO;
    case ErrorKind::Precondition: return STODI_ERR_PRECONDITION;
    case ErrorKind::Capacity: return STODI_ERR_CAPACITY;
    case ErrorKind::NoConvergence: return STODI_ERR_NO_CONVERGENCE;
  }
  return STODI_ERR_INTERNAL;
}

stodi_status fail(stodi_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs fn, translating exceptions into status codes + the thread-local
// message. A successful call clears the message.
template <typename Fn>
stodi_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return STODI_OK;
  } catch (const Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(STODI_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(STODI_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::set<NodeId> target_set(const int* target, int target_len) {
  if (target == nullptr || target_len <= 0) throw_invalid("target set must name at least one node");
  return std::set<NodeId>(target, target + target_len);
}

}  // namespace

struct stodi_graph {
  StochasticDigraph sd;
  std::vector<std::pair<NodeId, int>> violations;
};

struct stodi_table {
  ReachRecursionTable table;
  int n = 0;
};

struct stodi_pset {
  TransitionMatrixSet set;
  int n = 0;
};

struct stodi_mdp {
  StochasticDigraph sd;  // kept for action-tuple decoding
  MdpModel model;
};

struct stodi_reach {
  ReachResult result;
  int mode = STODI_MODE_WEAK;
  int n = 0;
};

struct stodi_rl {
  double estimate = 0.0;
  std::vector<double> trace;
};

struct stodi_sir {
  std::unique_ptr<SirModel> model;
};

extern "C" {

const char* stodi_version(void) { return "1.0.0"; }

const char* stodi_rng_name(void) { return rng_algorithm_name(); }

const char* stodi_last_error(void) { return g_last_error.c_str(); }

void stodi_string_free(char* s) { delete[] s; }

stodi_status stodi_format_probability(double value, int force_decimal, char* buf, size_t cap) {
  return guarded([&] {
    if (buf == nullptr) throw_invalid("null output buffer");
    std::string text = format_probability(value, force_decimal != 0);
    if (text.size() + 1 > cap) throw_invalid("output buffer too small");
    std::memcpy(buf, text.c_str(), text.size() + 1);
  });
}

/* ---- graphs ---- */

stodi_status stodi_graph_parse(const char* json_text, const char* source_name, stodi_graph** out) {
  return guarded([&] {
    if (json_text == nullptr || out == nullptr) throw_invalid("null argument");
    auto g = std::make_unique<stodi_graph>();
    g->sd = parse_graph_json(json_text, source_name ? source_name : "<string>");
    g->violations = g->sd.check_standing_assumption();
    *out = g.release();
  });
}

stodi_status stodi_graph_load(const char* path, stodi_graph** out) {
  return guarded([&] {
    if (path == nullptr || out == nullptr) throw_invalid("null argument");
    auto g = std::make_unique<stodi_graph>();
    g->sd = load_graph(path);
    g->violations = g->sd.check_standing_assumption();
    *out = g.release();
  });
}

void stodi_graph_free(stodi_graph* g) { delete g; }

int stodi_graph_n(const stodi_graph* g) { return g ? g->sd.n() : 0; }

int stodi_graph_layer_count(const stodi_graph* g) { return g ? g->sd.h() : 0; }

stodi_status stodi_graph_mu(const stodi_graph* g, int w, double* out) {
  return guarded([&] {
    if (g == nullptr || out == nullptr) throw_invalid("null argument");
    if (w < 1 || w > g->sd.h()) throw_invalid("edge-set index out of range");
    *out = g->sd.mu(w);
  });
}

stodi_status stodi_graph_edge_count(const stodi_graph* g, int w, int* out) {
  return guarded([&] {
    if (g == nullptr || out == nullptr) throw_invalid("null argument");
    if (w < 1 || w > g->sd.h()) throw_invalid("edge-set index out of range");
    *out = static_cast<int>(g->sd.layer(w).edges().size());
  });
}

stodi_status stodi_graph_edge(const stodi_graph* g, int w, int index, int* u, int* v) {
  return guarded([&] {
    if (g == nullptr || u == nullptr || v == nullptr) throw_invalid("null argument");
    if (w < 1 || w > g->sd.h()) throw_invalid("edge-set index out of range");
    const auto& edges = g->sd.layer(w).edges();
    if (index < 1 || static_cast<std::size_t>(index) > edges.size()) throw_invalid("edge index out of range");
    *u = edges[static_cast<std::size_t>(index - 1)].first;
    *v = edges[static_cast<std::size_t>(index - 1)].second;
  });
}

stodi_status stodi_graph_to_json(const stodi_graph* g, char** out) {
  return guarded([&] {
    if (g == nullptr || out == nullptr) throw_invalid("null argument");
    *out = copy_string(graph_to_json(g->sd));
  });
}

stodi_status stodi_graph_violation_count(const stodi_graph* g, int* out) {
  return guarded([&] {
    if (g == nullptr || out == nullptr) throw_invalid("null argument");
    *out = static_cast<int>(g->violations.size());
  });
}

stodi_status stodi_graph_violation(const stodi_graph* g, int index, int* node, int* layer) {
  return guarded([&] {
    if (g == nullptr || node == nullptr || layer == nullptr) throw_invalid("null argument");
    if (index < 1 || static_cast<std::size_t>(index) > g->violations.size())
      throw_invalid("violation index out of range");
    *node = g->violations[static_cast<std::size_t>(index - 1)].first;
    *layer = g->violations[static_cast<std::size_t>(index - 1)].second;
  });
}

stodi_status stodi_graph_augment_sink(const stodi_graph* g, stodi_graph** out) {
  return guarded([&] {
    if (g == nullptr || out == nullptr) throw_invalid("null argument");
    auto a = std::make_unique<stodi_graph>();
    a->sd = augment_sink(g->sd);
    a->violations = a->sd.check_standing_assumption();
    *out = a.release();
  });
}

stodi_status stodi_graph_bounds(const stodi_graph* g, double* lower, double* upper) {
  return guarded([&] {
    if (g == nullptr || lower == nullptr || upper == nullptr) throw_invalid("null argument");
    BoundMatrices b = compute_bound_matrices(g->sd);
    std::memcpy(lower, b.L.data.data(), b.L.data.size() * sizeof(double));
    std::memcpy(upper, b.M.data.data(), b.M.data.size() * sizeof(double));
  });
}

/* ---- reach recursion table ---- */

stodi_status stodi_reach_recursion(const stodi_graph* g, const int* target, int target_len, int horizon,
                                   int upper, stodi_table** out) {
  return guarded([&] {
    if (g == nullptr || out == nullptr) throw_invalid("null argument");
    auto t = std::make_unique<stodi_table>();
    t->table = reach_recursion(g->sd, target_set(target, target_len), horizon,
                               upper ? RecursionKind::Upper : RecursionKind::Lower);
    t->n = g->sd.n();
    *out = t.release();
  });
}

void stodi_table_free(stodi_table* t) { delete t; }

int stodi_table_horizon(const stodi_table* t) {
  return t ? static_cast<int>(t->table.values.rows) - 1 : 0;
}

int stodi_table_state_count(const stodi_table* t) { return t ? t->n : 0; }

stodi_status stodi_table_value(const stodi_table* t, int k, int node, double* out) {
  return guarded([&] {
    if (t == nullptr || out == nullptr) throw_invalid("null argument");
    if (k < 0 || static_cast<std::size_t>(k) >= t->table.values.rows) throw_invalid("step index out of range");
    if (node < 1 || node > t->n) throw_invalid("node out of range");
    *out = t->table.at(k, node);
  });
}

/* ---- transition-matrix family ---- */

stodi_status stodi_pset_enumerate(const stodi_graph* g, uint64_t cap, int dedup, stodi_pset** out) {
  return guarded([&] {
    if (g == nullptr || out == nullptr) throw_invalid("null argument");
    auto p = std::make_unique<stodi_pset>();
    p->set = enumerate_P_set(g->sd, cap, dedup != 0);
    p->n = g->sd.n();
    *out = p.release();
  });
}

void stodi_pset_free(stodi_pset* p) { delete p; }

uint64_t stodi_pset_family_size(const stodi_pset* p) { return p ? p->set.nu : 0; }

int stodi_pset_count(const stodi_pset* p) { return p ? static_cast<int>(p->set.matrices.size()) : 0; }

int stodi_pset_n(const stodi_pset* p) { return p ? p->n : 0; }

stodi_status stodi_pset_matrix(const stodi_pset* p, int index, double* buf) {
  return guarded([&] {
    if (p == nullptr || buf == nullptr) throw_invalid("null argument");
    if (index < 1 || static_cast<std::size_t>(index) > p->set.matrices.size())
      throw_invalid("matrix index out of range");
    const Matrix& m = p->set.matrices[static_cast<std::size_t>(index - 1)];
    std::memcpy(buf, m.data.data(), m.data.size() * sizeof(double));
  });
}

/* ---- per-state action MDP ---- */

stodi_status stodi_mdp_local(const stodi_graph* g, stodi_mdp** out) {
  return guarded([&] {
    if (g == nullptr || out == nullptr) throw_invalid("null argument");
    auto m = std::make_unique<stodi_mdp>();
    m->sd = g->sd;
    m->model = local_mdp(m->sd);
    *out = m.release();
  });
}

void stodi_mdp_free(stodi_mdp* m) { delete m; }

int stodi_mdp_state_count(const stodi_mdp* m) { return m ? m->model.state_count() : 0; }

stodi_status stodi_mdp_action_count(const stodi_mdp* m, int state, int* out) {
  return guarded([&] {
    if (m == nullptr || out == nullptr) throw_invalid("null argument");
    if (state < 1 || state > m->model.state_count()) throw_invalid("state out of range");
    *out = m->model.action_count(state);
  });
}

stodi_status stodi_mdp_action_tuple(const stodi_mdp* m, int state, int action, int* buf) {
  return guarded([&] {
    if (m == nullptr || buf == nullptr) throw_invalid("null argument");
    if (state < 1 || state > m->model.state_count()) throw_invalid("state out of range");
    std::vector<NodeId> tuple = local_action_tuple(m->sd, state, action);
    for (std::size_t w = 0; w < tuple.size(); ++w) buf[w] = tuple[w];
  });
}

stodi_status stodi_mdp_transition_count(const stodi_mdp* m, int state, int action, int* out) {
  return guarded([&] {
    if (m == nullptr || out == nullptr) throw_invalid("null argument");
    if (state < 1 || state > m->model.state_count()) throw_invalid("state out of range");
    if (action < 1 || action > m->model.action_count(state)) throw_invalid("action out of range");
    *out = static_cast<int>(m->model.transition(state, action).size());
  });
}

stodi_status stodi_mdp_transition(const stodi_mdp* m, int state, int action, int index, int* next,
                                  double* prob) {
  return guarded([&] {
    if (m == nullptr || next == nullptr || prob == nullptr) throw_invalid("null argument");
    if (state < 1 || state > m->model.state_count()) throw_invalid("state out of range");
    if (action < 1 || action > m->model.action_count(state)) throw_invalid("action out of range");
    const TransitionDistribution& dist = m->model.transition(state, action);
    if (index < 1 || static_cast<std::size_t>(index) > dist.size()) throw_invalid("entry index out of range");
    *next = dist[static_cast<std::size_t>(index - 1)].next;
    *prob = dist[static_cast<std::size_t>(index - 1)].prob;
  });
}

/* ---- reachability objectives ---- */

stodi_status stodi_reach_compute(const stodi_graph* g, const int* target, int target_len, int horizon,
                                 int mode, stodi_reach** out) {
  return guarded([&] {
    if (g == nullptr || out == nullptr) throw_invalid("null argument");
    if (horizon < 0) throw_invalid("horizon must be nonnegative");
    if (mode != STODI_MODE_WEAK && mode != STODI_MODE_STRONG) throw_invalid("unknown mode");
    auto r = std::make_unique<stodi_reach>();
    std::set<NodeId> Q = target_set(target, target_len);
    r->result = mode == STODI_MODE_WEAK ? weak_reachability(g->sd, Q, horizon)
                                        : strong_recurrence(g->sd, Q, horizon);
    r->mode = mode;
    r->n = g->sd.n();
    *out = r.release();
  });
}

void stodi_reach_free(stodi_reach* r) { delete r; }

int stodi_reach_horizon(const stodi_reach* r) {
  return r ? static_cast<int>(r->result.values.rows) - 1 : 0;
}

int stodi_reach_state_count(const stodi_reach* r) { return r ? r->n : 0; }

stodi_status stodi_reach_value(const stodi_reach* r, int k, int node, double* out) {
  return guarded([&] {
    if (r == nullptr || out == nullptr) throw_invalid("null argument");
    if (k < 0 || static_cast<std::size_t>(k) >= r->result.values.rows) throw_invalid("step index out of range");
    if (node < 1 || node > r->n) throw_invalid("node out of range");
    *out = r->result.at(k, node);
  });
}

stodi_status stodi_reach_policy_json(const stodi_reach* r, char** out) {
  return guarded([&] {
    if (r == nullptr || out == nullptr) throw_invalid("null argument");
    nlohmann::json doc;
    doc["mode"] = r->mode == STODI_MODE_WEAK ? "weak" : "strong";
    doc["horizon"] = static_cast<int>(r->result.values.rows) - 1;
    doc["target"] = r->result.augmented.target;
    doc["note"] = "choices lists the successor picked in each edge set; the value n+1 stands for "
                  "entering the target set";
    nlohmann::json steps = nlohmann::json::array();
    const StochasticDigraph& aug = r->result.augmented.graph;
    for (std::size_t k = 1; k < r->result.values.rows; ++k) {
      nlohmann::json level;
      level["steps_remaining"] = k;
      nlohmann::json nodes = nlohmann::json::array();
      for (int x = 1; x <= r->n; ++x) {
        int action = r->result.full_table.greedy_action(static_cast<int>(k), x);
        nlohmann::json entry;
        entry["node"] = x;
        entry["action"] = action;
        entry["choices"] = local_action_tuple(aug, x, action);
        nodes.push_back(std::move(entry));
      }
      level["nodes"] = std::move(nodes);
      steps.push_back(std::move(level));
    }
    doc["steps"] = std::move(steps);
    *out = copy_string(doc.dump(2) + "\n");
  });
}

stodi_status stodi_reach_limit(const stodi_graph* g, const int* target, int target_len, int mode,
                               double tolerance, int max_iterations, double* values, int* iterations) {
  return guarded([&] {
    if (g == nullptr || values == nullptr) throw_invalid("null argument");
    if (mode != STODI_MODE_WEAK && mode != STODI_MODE_STRONG) throw_invalid("unknown mode");
    std::set<NodeId> Q = target_set(target, target_len);
    ReachLimit limit = mode == STODI_MODE_WEAK
                           ? weak_reachability_limit(g->sd, Q, tolerance, max_iterations)
                           : strong_recurrence_limit(g->sd, Q, tolerance, max_iterations);
    if (!limit.converged)
      throw Error(ErrorKind::NoConvergence, "value iteration did not converge within " +
                                                std::to_string(max_iterations) + " iterations");
    for (std::size_t x = 0; x < limit.values.size(); ++x) values[x] = limit.values[x];
    if (iterations != nullptr) *iterations = limit.iterations;
  });
}

/* ---- reinforcement learning ---- */

namespace {

stodi_rl* run_rl_handle(const MdpModel& model, int start, const TerminalFn& terminal, int algo,
                        long long episodes, double learning_rate, double epsilon, int horizon_cap,
                        uint64_t seed, double sign) {
  if (algo != STODI_ALGO_SARSA && algo != STODI_ALGO_QLEARNING) throw_invalid("unknown algorithm");
  RlParams params;
  params.learning_rate = learning_rate;
  params.epsilon = epsilon;
  params.episodes = static_cast<long>(episodes);
  params.horizon_cap = horizon_cap;
  params.seed = seed;
  RlResult res = run_rl(model, start, terminal, algo == STODI_ALGO_SARSA ? RlAlgo::Sarsa : RlAlgo::QLearning,
                        params, /*record_trace=*/true);
  auto handle = std::make_unique<stodi_rl>();
  handle->estimate = sign * res.estimate;
  handle->trace.reserve(res.trace.size());
  for (double v : res.trace) handle->trace.push_back(sign * v);
  return handle.release();
}

}  // namespace

stodi_status stodi_rl_reach(const stodi_graph* g, const int* target, int target_len, int mode, int start,
                            int algo, long long episodes, double learning_rate, double epsilon,
                            int horizon_cap, uint64_t seed, stodi_rl** out) {
  return guarded([&] {
    if (g == nullptr || out == nullptr) throw_invalid("null argument");
    if (mode != STODI_MODE_WEAK && mode != STODI_MODE_STRONG) throw_invalid("unknown mode");
    if (start < 1 || start > g->sd.n()) throw_invalid("start node out of range");
    std::set<NodeId> Q = target_set(target, target_len);
    AugmentedDigraph aug = augment_for_target(g->sd, Q);
    double sign = mode == STODI_MODE_WEAK ? 1.0 : -1.0;
    MdpModel model = attach_reward(local_mdp(aug.graph), proxy_entry_reward(aug.target_proxy, sign));
    NodeId proxy = aug.target_proxy, terminal_node = aug.terminal;
    TerminalFn terminal = [proxy, terminal_node](int x) { return x == proxy || x == terminal_node; };
    // Strong mode maximizes the negated reward; flip back so the estimate
    // reads as a probability either way.
    *out = run_rl_handle(model, start, terminal, algo, episodes, learning_rate, epsilon, horizon_cap,
                         seed, sign);
  });
}

void stodi_rl_free(stodi_rl* r) { delete r; }

stodi_status stodi_rl_estimate(const stodi_rl* r, double* out) {
  return guarded([&] {
    if (r == nullptr || out == nullptr) throw_invalid("null argument");
    *out = r->estimate;
  });
}

long long stodi_rl_episode_count(const stodi_rl* r) {
  return r ? static_cast<long long>(r->trace.size()) : 0;
}

stodi_status stodi_rl_trace(const stodi_rl* r, double* buf) {
  return guarded([&] {
    if (r == nullptr || buf == nullptr) throw_invalid("null argument");
    for (std::size_t i = 0; i < r->trace.size(); ++i) buf[i] = r->trace[i];
  });
}

/* ---- epidemic model ---- */

stodi_status stodi_sir_parse(const char* json_text, const char* source_name, stodi_sir** out) {
  return guarded([&] {
    if (json_text == nullptr || out == nullptr) throw_invalid("null argument");
    auto s = std::make_unique<stodi_sir>();
    s->model = std::make_unique<SirModel>(parse_sir_json(json_text, source_name ? source_name : "<string>"));
    *out = s.release();
  });
}

stodi_status stodi_sir_load(const char* path, stodi_sir** out) {
  return guarded([&] {
    if (path == nullptr || out == nullptr) throw_invalid("null argument");
    auto s = std::make_unique<stodi_sir>();
    s->model = std::make_unique<SirModel>(load_sir(path));
    *out = s.release();
  });
}

void stodi_sir_free(stodi_sir* s) { delete s; }

int stodi_sir_agent_count(const stodi_sir* s) { return s ? s->model->config().N : 0; }

int stodi_sir_position_count(const stodi_sir* s) { return s ? s->model->config().kappa() : 0; }

stodi_status stodi_sir_alpha(const stodi_sir* s, double* out) {
  return guarded([&] {
    if (s == nullptr || out == nullptr) throw_invalid("null argument");
    *out = s->model->config().alpha;
  });
}

stodi_status stodi_sir_beta(const stodi_sir* s, double* out) {
  return guarded([&] {
    if (s == nullptr || out == nullptr) throw_invalid("null argument");
    *out = s->model->config().beta;
  });
}

int stodi_sir_closure_size(const stodi_sir* s) { return s ? s->model->closure_size() : 0; }

uint64_t stodi_sir_state_space_size(const stodi_sir* s) {
  return s ? sir_state_space_size(s->model->config()) : 0;
}

int stodi_sir_initial_infected(const stodi_sir* s) { return s ? s->model->theta(1) : 0; }

stodi_status stodi_sir_expected_curve(const stodi_sir* s, int horizon, double* buf) {
  return guarded([&] {
    if (s == nullptr || buf == nullptr) throw_invalid("null argument");
    if (horizon < 0) throw_invalid("horizon must be nonnegative");
    std::vector<double> curve = s->model->expected_infected_uniform(horizon);
    for (std::size_t k = 0; k < curve.size(); ++k) buf[k] = curve[k];
  });
}

stodi_status stodi_sir_bounds(const stodi_sir* s, double tolerance, int max_iterations, double* lower,
                              double* upper, int* iterations_lower, int* iterations_upper) {
  return guarded([&] {
    if (s == nullptr || lower == nullptr || upper == nullptr) throw_invalid("null argument");
    SirModel::Bounds b = s->model->infected_bounds(tolerance, max_iterations);
    *lower = b.lower;
    *upper = b.upper;
    if (iterations_lower != nullptr) *iterations_lower = b.iterations_lower;
    if (iterations_upper != nullptr) *iterations_upper = b.iterations_upper;
  });
}

stodi_status stodi_sir_monte_carlo(const stodi_sir* s, int horizon, long long samples, uint64_t seed,
                                   int threads, double* mean, double* stderr_out) {
  return guarded([&] {
    if (s == nullptr || mean == nullptr || stderr_out == nullptr) throw_invalid("null argument");
    SirModel::MonteCarloResult res = s->model->monte_carlo(horizon, static_cast<long>(samples), seed, threads);
    for (std::size_t k = 0; k < res.mean.size(); ++k) {
      mean[k] = res.mean[k];
      stderr_out[k] = res.stderr_[k];
    }
  });
}

stodi_status stodi_sir_rl(const stodi_sir* s, int sign, int algo, long long episodes, double learning_rate,
                          double epsilon, int horizon_cap, uint64_t seed, stodi_rl** out) {
  return guarded([&] {
    if (s == nullptr || out == nullptr) throw_invalid("null argument");
    if (sign != 1 && sign != -1) throw_invalid("sign must be +1 or -1");
    const SirModel* model = s->model.get();
    MdpModel mdp = attach_reward(model->mdp(), model->increment_reward(static_cast<double>(sign)));
    TerminalFn terminal = [model](int ordinal) { return model->terminal(ordinal); };
    // Estimates are reported raw (the optimal total increment, negated for the
    // lower side), matching stodi_sir_rl's documentation.
    *out = run_rl_handle(mdp, 1, terminal, algo, episodes, learning_rate, epsilon, horizon_cap, seed, 1.0);
  });
}

} /* extern "C" */
