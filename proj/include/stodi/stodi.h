/* stodi — stochastic-digraph reachability and epidemic analysis.
 *
 * C interface to the analysis core. All objects are opaque handles created
 * and destroyed by the library; every fallible call returns a stodi_status
 * and reports detail through stodi_last_error(). Handles are immutable once
 * created and may be shared across threads; the last-error buffer is
 * thread-local.
 *
 * Conventions: nodes, topology layers, MDP states and actions are 1-based,
 * matching the input format. Matrix buffers are row-major double arrays
 * sized by the caller from the advertised dimensions.
 */
#ifndef STODI_H
#define STODI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stodi_status {
  STODI_OK = 0,
  STODI_ERR_INVALID_ARGUMENT = 1, /* bad parameter or out-of-range index   */
  STODI_ERR_PARSE = 2,            /* malformed input text                  */
  STODI_ERR_IO = 3,               /* file could not be read or written     */
  STODI_ERR_PRECONDITION = 4,     /* input violates a documented precondition */
  STODI_ERR_CAPACITY = 5,         /* result would exceed a stated size cap */
  STODI_ERR_NO_CONVERGENCE = 6,   /* iteration hit its limit before the tolerance */
  STODI_ERR_INTERNAL = 7          /* unexpected failure inside the library */
} stodi_status;

/* Library version ("major.minor.patch") and the RNG algorithm name recorded
 * in run manifests. Static storage; do not free. */
const char* stodi_version(void);
const char* stodi_rng_name(void);

/* Message for the most recent failing call on this thread ("" if none). */
const char* stodi_last_error(void);

/* Frees any char* the library allocated for the caller. */
void stodi_string_free(char* s);

/* Formats a probability the way the reports do: as the simplest fraction
 * "p/q" with q <= 10^6 when one lies within 1e-9, otherwise (or when
 * force_decimal is nonzero) as the shortest decimal that round-trips.
 * Writes a NUL-terminated string into buf (capacity cap bytes). */
stodi_status stodi_format_probability(double value, int force_decimal, char* buf, size_t cap);

/* ------------------------------------------------------------------ *
 *  Stochastic digraphs                                               *
 * ------------------------------------------------------------------ */

typedef struct stodi_graph stodi_graph;

/* Input format: {"n": 4, "edge_sets": [[[1,2],[2,1]], ...], "mu": ["2/3","1/3"]}
 * with mu entries either "p/q" strings or numbers. source_name labels the
 * input in error messages (pass the file path or a logical name). */
stodi_status stodi_graph_parse(const char* json_text, const char* source_name, stodi_graph** out);
stodi_status stodi_graph_load(const char* path, stodi_graph** out);
void stodi_graph_free(stodi_graph* g);

int stodi_graph_n(const stodi_graph* g);           /* node count */
int stodi_graph_layer_count(const stodi_graph* g); /* number of edge sets */
stodi_status stodi_graph_mu(const stodi_graph* g, int w, double* out);
stodi_status stodi_graph_edge_count(const stodi_graph* g, int w, int* out);
stodi_status stodi_graph_edge(const stodi_graph* g, int w, int index, int* u, int* v);

/* Canonical JSON (sorted edges, fractions where exact). Free with
 * stodi_string_free. */
stodi_status stodi_graph_to_json(const stodi_graph* g, char** out);

/* Dead-end check: a (node, layer) pair violates the standing assumption when
 * the layer has positive probability but the node has no outgoing edge in it.
 * stodi_graph_violation retrieves pair number `index` (1-based). */
stodi_status stodi_graph_violation_count(const stodi_graph* g, int* out);
stodi_status stodi_graph_violation(const stodi_graph* g, int index, int* node, int* layer);

/* Repairs violations by adding node n+1: each violating (node, layer) gains
 * the edge (node, n+1) in that layer, and n+1 loops to itself everywhere. */
stodi_status stodi_graph_augment_sink(const stodi_graph* g, stodi_graph** out);

/* Entrywise transition-probability bounds: lower[i][j] accumulates the
 * probability mass of layers whose edges force i -> j (out-neighborhood
 * exactly {j}), upper[i][j] the mass of layers merely allowing it. Both
 * buffers hold n*n doubles, row-major, 0-based. */
stodi_status stodi_graph_bounds(const stodi_graph* g, double* lower, double* upper);

/* ------------------------------------------------------------------ *
 *  Finite-horizon reach recursion (closed-form table)                *
 * ------------------------------------------------------------------ */

typedef struct stodi_table stodi_table;

/* Best-case (upper, nonzero `upper`) or worst-case (lower) probability of
 * hitting the target set within k steps, tabulated for k = 0..horizon and
 * every start node. Requires the standing assumption (no positive-probability
 * dead ends). */
stodi_status stodi_reach_recursion(const stodi_graph* g, const int* target, int target_len,
                                   int horizon, int upper, stodi_table** out);
void stodi_table_free(stodi_table* t);
int stodi_table_horizon(const stodi_table* t);
int stodi_table_state_count(const stodi_table* t);
stodi_status stodi_table_value(const stodi_table* t, int k, int node, double* out);

/* ------------------------------------------------------------------ *
 *  Transition-matrix family                                          *
 * ------------------------------------------------------------------ */

typedef struct stodi_pset stodi_pset;

/* Enumerates every transition matrix realizable by resolving each layer to a
 * deterministic (1-regular) subgraph. Fails with STODI_ERR_CAPACITY when the
 * family has more than `cap` members. With dedup nonzero, exactly equal
 * matrices collapse to their first occurrence. */
stodi_status stodi_pset_enumerate(const stodi_graph* g, uint64_t cap, int dedup, stodi_pset** out);
void stodi_pset_free(stodi_pset* p);
uint64_t stodi_pset_family_size(const stodi_pset* p); /* member count before dedup */
int stodi_pset_count(const stodi_pset* p);            /* matrices retained */
int stodi_pset_n(const stodi_pset* p);
/* Copies matrix `index` (1-based) into buf (n*n doubles, row-major). */
stodi_status stodi_pset_matrix(const stodi_pset* p, int index, double* buf);

/* ------------------------------------------------------------------ *
 *  Per-state action MDP                                              *
 * ------------------------------------------------------------------ */

typedef struct stodi_mdp stodi_mdp;

/* The MDP whose action at node i picks one successor from each layer's
 * out-neighborhood; transition probabilities aggregate the layer masses.
 * Requires the standing assumption. */
stodi_status stodi_mdp_local(const stodi_graph* g, stodi_mdp** out);
void stodi_mdp_free(stodi_mdp* m);
int stodi_mdp_state_count(const stodi_mdp* m);
stodi_status stodi_mdp_action_count(const stodi_mdp* m, int state, int* out);
/* The successor chosen in each layer by action a at `state`; buf holds one
 * int per layer. */
stodi_status stodi_mdp_action_tuple(const stodi_mdp* m, int state, int action, int* buf);
stodi_status stodi_mdp_transition_count(const stodi_mdp* m, int state, int action, int* out);
/* Entry `index` (1-based) of the transition distribution, ascending in the
 * successor node. */
stodi_status stodi_mdp_transition(const stodi_mdp* m, int state, int action, int index,
                                  int* next, double* prob);

/* ------------------------------------------------------------------ *
 *  Reachability objectives                                           *
 * ------------------------------------------------------------------ */

#define STODI_MODE_WEAK 0   /* best-case hit probability (maximize)  */
#define STODI_MODE_STRONG 1 /* worst-case hit probability (minimize) */

typedef struct stodi_reach stodi_reach;

/* Probability of hitting the target within k steps under the best (weak) or
 * worst (strong) resolution of the topology randomness, for k = 0..horizon
 * and every original node, with the optimizing policy recorded. */
stodi_status stodi_reach_compute(const stodi_graph* g, const int* target, int target_len,
                                 int horizon, int mode, stodi_reach** out);
void stodi_reach_free(stodi_reach* r);
int stodi_reach_horizon(const stodi_reach* r);
int stodi_reach_state_count(const stodi_reach* r);
stodi_status stodi_reach_value(const stodi_reach* r, int k, int node, double* out);
/* Greedy policy as JSON: for each step-to-go k >= 1 and each node, the chosen
 * action index and its per-layer successor choices. Free with
 * stodi_string_free. */
stodi_status stodi_reach_policy_json(const stodi_reach* r, char** out);

/* Long-run (horizon -> infinity) values for every original node. values
 * holds n doubles; iterations receives the sweep count used. */
stodi_status stodi_reach_limit(const stodi_graph* g, const int* target, int target_len, int mode,
                               double tolerance, int max_iterations, double* values,
                               int* iterations);

/* ------------------------------------------------------------------ *
 *  Tabular reinforcement learning                                    *
 * ------------------------------------------------------------------ */

#define STODI_ALGO_SARSA 0
#define STODI_ALGO_QLEARNING 1

typedef struct stodi_rl stodi_rl;

/* Model-free estimate of the long-run reach value at `start` (weak mode
 * estimates the best case; strong mode the worst case, reported as a
 * probability like stodi_reach_compute). Fully determined by the seed. */
stodi_status stodi_rl_reach(const stodi_graph* g, const int* target, int target_len, int mode,
                            int start, int algo, long long episodes, double learning_rate,
                            double epsilon, int horizon_cap, uint64_t seed, stodi_rl** out);
void stodi_rl_free(stodi_rl* r);
stodi_status stodi_rl_estimate(const stodi_rl* r, double* out);
long long stodi_rl_episode_count(const stodi_rl* r);
/* Estimate recorded after each episode; buf holds episode_count doubles. */
stodi_status stodi_rl_trace(const stodi_rl* r, double* buf);

/* ------------------------------------------------------------------ *
 *  Agent-based epidemic on a motion graph                            *
 * ------------------------------------------------------------------ */

typedef struct stodi_sir stodi_sir;

/* Input format: {"N":3, "alpha":0.7, "beta":0.3,
 *   "motion":{"kappa":5, "edges":[[1,2],...], "directed":false},
 *   "x0":[[2,1],[1,1],[1,2]]}
 * where x0 lists [status, position] per agent (status 1 susceptible,
 * 2 infected, 3 recovered). Building the handle explores every state
 * reachable from x0. */
stodi_status stodi_sir_parse(const char* json_text, const char* source_name, stodi_sir** out);
stodi_status stodi_sir_load(const char* path, stodi_sir** out);
void stodi_sir_free(stodi_sir* s);

int stodi_sir_agent_count(const stodi_sir* s);
int stodi_sir_position_count(const stodi_sir* s);
stodi_status stodi_sir_alpha(const stodi_sir* s, double* out);
stodi_status stodi_sir_beta(const stodi_sir* s, double* out);
int stodi_sir_closure_size(const stodi_sir* s);         /* states reachable from x0 */
uint64_t stodi_sir_state_space_size(const stodi_sir* s); /* (3*kappa)^N */
int stodi_sir_initial_infected(const stodi_sir* s);      /* agents ever infected in x0 */

/* Expected ever-infected count after k steps under uniformly random motion,
 * k = 0..horizon; buf holds horizon+1 doubles. */
stodi_status stodi_sir_expected_curve(const stodi_sir* s, int horizon, double* buf);

/* Envelope for the expected ever-infected count under ANY motion behavior:
 * lower <= E[count at step k] <= upper for every policy once k is large.
 * Computed by value iteration to the given tolerance. */
stodi_status stodi_sir_bounds(const stodi_sir* s, double tolerance, int max_iterations,
                              double* lower, double* upper, int* iterations_lower,
                              int* iterations_upper);

/* Monte Carlo of the uniform-motion epidemic: mean and standard error of the
 * ever-infected count at each step 0..horizon (buffers hold horizon+1
 * doubles). Results are identical for any thread count. */
stodi_status stodi_sir_monte_carlo(const stodi_sir* s, int horizon, long long samples,
                                   uint64_t seed, int threads, double* mean, double* stderr_out);

/* RL estimate of the optimal total change in the ever-infected count from x0;
 * sign +1 maximizes the increments (upper envelope side), -1 maximizes their
 * negation (lower side, so the estimate is <= 0). Add theta(x0) respectively
 * subtract the negated estimate to recover the envelope values. */
stodi_status stodi_sir_rl(const stodi_sir* s, int sign, int algo, long long episodes,
                          double learning_rate, double epsilon, int horizon_cap, uint64_t seed,
                          stodi_rl** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STODI_H */
