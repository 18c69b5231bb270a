// Command-line front end for the stodi analysis library. Every run prints its
// results to stdout (or --out) and a reproduction manifest to stderr (or
// --manifest): the subcommand, input hashes, all parameters and the seed.
// Rerunning with the same parameters and seed reproduces the output byte for
// byte.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "stodi/stodi.h"

using nlohmann::json;

namespace {

[[noreturn]] void die(stodi_status status) {
  std::cerr << "error: " << stodi_last_error() << "\n";
  // Unreadable inputs are usage-level problems; everything else the library
  // rejects is a domain error.
  std::exit(status == STODI_ERR_IO ? 1 : 2);
}

void check(stodi_status status) {
  if (status != STODI_OK) die(status);
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  explicit Handle(T* p) : ptr(p) {}
  ~Handle() { Free(ptr); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
  Handle& operator=(Handle&& other) noexcept {
    if (this != &other) {
      Free(ptr);
      ptr = other.ptr;
      other.ptr = nullptr;
    }
    return *this;
  }
  T* get() const { return ptr; }
  T** slot() { return &ptr; }
};

using GraphHandle = Handle<stodi_graph, stodi_graph_free>;
using TableHandle = Handle<stodi_table, stodi_table_free>;
using PsetHandle = Handle<stodi_pset, stodi_pset_free>;
using MdpHandle = Handle<stodi_mdp, stodi_mdp_free>;
using ReachHandle = Handle<stodi_reach, stodi_reach_free>;
using RlHandle = Handle<stodi_rl, stodi_rl_free>;
using SirHandle = Handle<stodi_sir, stodi_sir_free>;

std::string owned_string(char* s) {
  std::string out = s ? s : "";
  stodi_string_free(s);
  return out;
}

// Probability rendering: fraction when close enough to p/q (q <= 1e6), else
// shortest round-trip decimal; --decimal forces the latter.
std::string fmt_prob(double value, bool decimal) {
  char buf[64];
  check(stodi_format_probability(value, decimal ? 1 : 0, buf, sizeof buf));
  return buf;
}

// Plain numeric rendering (counts, estimates): always decimal.
std::string fmt_num(double value) { return fmt_prob(value, true); }

// Probabilities inside JSON documents: fraction strings stay strings, numbers
// stay numbers, mirroring the graph file format.
json prob_json(double value, bool decimal) {
  std::string text = fmt_prob(value, decimal);
  if (text.find('/') != std::string::npos) return text;
  return value;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) return "unavailable";
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

std::string hash_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "unavailable";
  std::ostringstream buf;
  buf << in.rdbuf();
  return "sha256:" + sha256_hex(buf.str());
}

struct Manifest {
  std::string subcommand;
  json inputs = json::object();
  json parameters = json::object();
  json seed;  // number when the run consumed randomness, null otherwise
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void add_input(const std::string& path) { inputs[path] = hash_file(path); }

  json document() const {
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    char stamp[32];
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    json doc;
    doc["subcommand"] = subcommand;
    doc["inputs"] = inputs;
    doc["parameters"] = parameters;
    doc["seed"] = seed;
    doc["version"] = stodi_version();
    doc["rng"] = stodi_rng_name();
    doc["finished"] = stamp;
    doc["wall_clock_seconds"] = elapsed;
    return doc;
  }
};

void emit_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open output file " << out_path << "\n";
    std::exit(1);
  }
  f << content;
}

void emit_manifest(const std::string& manifest_path, const Manifest& manifest) {
  json doc = manifest.document();
  if (manifest_path.empty()) {
    std::cerr << doc.dump() << "\n";
    return;
  }
  std::ofstream f(manifest_path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open manifest file " << manifest_path << "\n";
    std::exit(1);
  }
  f << doc.dump(2) << "\n";
}

std::uint64_t choose_seed(bool seed_given, std::uint64_t seed) {
  if (seed_given) return seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

GraphHandle load_graph_or_die(const std::string& path) {
  GraphHandle g;
  check(stodi_graph_load(path.c_str(), g.slot()));
  return g;
}

SirHandle load_sir_or_die(const std::string& path) {
  SirHandle s;
  check(stodi_sir_load(path.c_str(), s.slot()));
  return s;
}

json matrix_json(const std::vector<double>& buf, int n, bool decimal) {
  json rows = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(prob_json(buf[static_cast<std::size_t>(i * n + j)], decimal));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stodi: reachability and epidemic analysis on stochastic digraphs"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path, manifest_path;
  bool decimal = false;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
  app.add_option("--out", out_path, "Write results here instead of stdout");
  app.add_option("--manifest", manifest_path, "Write the run manifest here instead of stderr");
  app.add_flag("--decimal", decimal, "Print probabilities as decimals, never fractions");
  app.add_option("--seed", seed, "RNG seed; omitted = random, reported in the manifest")
      ->each([&](const std::string&) { seed_given = true; });
  app.add_option("--threads", threads, "Worker threads for Monte Carlo (default 1)")
      ->check(CLI::PositiveNumber);

  std::string graph_path, sir_path;
  std::vector<int> target;
  int horizon = 0;

  // validate
  auto* cmd_validate = app.add_subcommand(
      "validate", "Check a graph for positive-probability dead ends; JSON report, --augment adds "
                  "the repaired graph");
  bool do_augment = false;
  cmd_validate->add_option("--graph", graph_path, "Stochastic-digraph JSON file")->required();
  cmd_validate->add_flag("--augment", do_augment, "Include the sink-augmented graph in the report");

  // bounds
  auto* cmd_bounds = app.add_subcommand(
      "bounds", "Entrywise transition-probability bound matrices; JSON {n, lower, upper} or CSV "
                "with header matrix,i,j,value");
  std::string bounds_format = "json";
  cmd_bounds->add_option("--graph", graph_path, "Stochastic-digraph JSON file")->required();
  cmd_bounds->add_option("--format", bounds_format, "json or csv (default json)")
      ->check(CLI::IsMember({"json", "csv"}));

  // recursion
  auto* cmd_recursion = app.add_subcommand(
      "recursion", "Best/worst-case probability of hitting the target within k steps; CSV with "
                   "header k,node,value");
  std::string kind = "upper";
  cmd_recursion->add_option("--graph", graph_path, "Stochastic-digraph JSON file")->required();
  cmd_recursion->add_option("--target", target, "Target node(s), comma separated")
      ->required()
      ->delimiter(',');
  cmd_recursion->add_option("--horizon", horizon, "Largest step count k")->required()
      ->check(CLI::NonNegativeNumber);
  cmd_recursion->add_option("--kind", kind, "upper (best case) or lower (worst case)")
      ->check(CLI::IsMember({"upper", "lower"}));

  // pset
  auto* cmd_pset = app.add_subcommand(
      "pset", "Enumerate the family of realizable one-step transition matrices; JSON {n, "
              "family_size, count, matrices}");
  std::uint64_t cap = 1000000;
  bool dedup = false;
  cmd_pset->add_option("--graph", graph_path, "Stochastic-digraph JSON file")->required();
  cmd_pset->add_option("--cap", cap, "Refuse to enumerate more members than this (default 10^6)");
  cmd_pset->add_flag("--dedup", dedup, "Collapse exactly equal matrices");

  // mdp
  auto* cmd_mdp = app.add_subcommand(
      "mdp", "Per-state action decision process; CSV with header i,a,j,p listing every "
             "transition probability");
  cmd_mdp->add_option("--graph", graph_path, "Stochastic-digraph JSON file")->required();

  // reach
  auto* cmd_reach = app.add_subcommand(
      "reach", "Optimal probability of visiting the target within k steps, k = 0..horizon; CSV "
               "with header k,node,value");
  std::string mode = "weak";
  std::string policy_out;
  cmd_reach->add_option("--graph", graph_path, "Stochastic-digraph JSON file")->required();
  cmd_reach->add_option("--target", target, "Target node(s), comma separated")
      ->required()
      ->delimiter(',');
  cmd_reach->add_option("--horizon", horizon, "Largest step count k")->required()
      ->check(CLI::NonNegativeNumber);
  cmd_reach->add_option("--mode", mode, "weak (best case) or strong (worst case)")
      ->check(CLI::IsMember({"weak", "strong"}));
  cmd_reach->add_option("--policy-out", policy_out, "Also write the optimizing policy as JSON here");

  // rl
  auto* cmd_rl = app.add_subcommand(
      "rl", "Model-free (SARSA / Q-learning) estimate of the long-run reach value; JSON with "
            "estimate, episodes, seed, algo");
  std::string algo = "sarsa";
  long long episodes = 10000;
  double learning_rate = 0.1, epsilon = 0.1;
  int start = 1, horizon_cap = 1000;
  std::string trace_path;
  cmd_rl->add_option("--graph", graph_path, "Stochastic-digraph JSON file")->required();
  cmd_rl->add_option("--target", target, "Target node(s), comma separated")
      ->required()
      ->delimiter(',');
  cmd_rl->add_option("--mode", mode, "weak (best case) or strong (worst case)")
      ->check(CLI::IsMember({"weak", "strong"}));
  cmd_rl->add_option("--algo", algo, "sarsa or qlearning")
      ->check(CLI::IsMember({"sarsa", "qlearning"}));
  cmd_rl->add_option("--episodes", episodes, "Training episodes (default 10000)")
      ->check(CLI::PositiveNumber);
  cmd_rl->add_option("--lr", learning_rate, "Learning rate (default 0.1)");
  cmd_rl->add_option("--epsilon", epsilon, "Exploration rate (default 0.1)");
  cmd_rl->add_option("--start", start, "Start node the estimate refers to (default 1)");
  cmd_rl->add_option("--horizon-cap", horizon_cap, "Step cap per episode (default 1000)")
      ->check(CLI::PositiveNumber);
  cmd_rl->add_option("--trace", trace_path, "Write per-episode estimates as CSV episode,estimate");

  // sir
  auto* cmd_sir = app.add_subcommand("sir", "Agent-based epidemic on a motion graph");
  cmd_sir->require_subcommand(1);
  cmd_sir->fallthrough();

  auto* cmd_sir_analyze = cmd_sir->add_subcommand(
      "analyze", "Expected ever-infected count under uniform motion plus its policy-free "
                 "envelope; CSV with header k,expected,lower,upper");
  double tol = 1e-12;
  int max_iterations = 100000;
  int sir_horizon = 50;
  cmd_sir_analyze->add_option("--sir", sir_path, "Epidemic JSON file")->required();
  cmd_sir_analyze->add_option("--horizon", sir_horizon, "Largest step count k (default 50)")
      ->check(CLI::NonNegativeNumber);
  cmd_sir_analyze->add_option("--tol", tol, "Envelope value-iteration tolerance (default 1e-12)");
  cmd_sir_analyze->add_option("--max-iterations", max_iterations,
                              "Envelope value-iteration cap (default 100000)");

  auto* cmd_sir_simulate = cmd_sir->add_subcommand(
      "simulate", "Monte Carlo of the uniform-motion epidemic; CSV with header k,mean,stderr");
  long long samples = 100000;
  cmd_sir_simulate->add_option("--sir", sir_path, "Epidemic JSON file")->required();
  cmd_sir_simulate->add_option("--horizon", sir_horizon, "Largest step count k (default 50)")
      ->check(CLI::NonNegativeNumber);
  cmd_sir_simulate->add_option("--samples", samples, "Trajectories to draw (default 100000)")
      ->check(CLI::PositiveNumber);

  auto* cmd_sir_rl = cmd_sir->add_subcommand(
      "rl", "SARSA / Q-learning estimates of the envelope around the ever-infected count; JSON "
            "report (the lower-side run uses seed+1)");
  cmd_sir_rl->add_option("--sir", sir_path, "Epidemic JSON file")->required();
  cmd_sir_rl->add_option("--algo", algo, "sarsa or qlearning")
      ->check(CLI::IsMember({"sarsa", "qlearning"}));
  cmd_sir_rl->add_option("--episodes", episodes, "Training episodes per side (default 10000)")
      ->check(CLI::PositiveNumber);
  cmd_sir_rl->add_option("--lr", learning_rate, "Learning rate (default 0.1)");
  cmd_sir_rl->add_option("--epsilon", epsilon, "Exploration rate (default 0.1)");
  cmd_sir_rl->add_option("--horizon-cap", horizon_cap, "Step cap per episode (default 1000)")
      ->check(CLI::PositiveNumber);
  cmd_sir_rl->add_option("--trace", trace_path,
                         "Write per-episode estimates as CSV episode,upper,lower");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Manifest manifest;
  std::string output;

  if (*cmd_validate) {
    manifest.subcommand = "validate";
    manifest.add_input(graph_path);
    manifest.parameters = {{"graph", graph_path}, {"augment", do_augment}};
    GraphHandle g = load_graph_or_die(graph_path);
    int count = 0;
    check(stodi_graph_violation_count(g.get(), &count));
    json report;
    report["nodes"] = stodi_graph_n(g.get());
    report["edge_sets"] = stodi_graph_layer_count(g.get());
    report["satisfied"] = count == 0;
    json violations = json::array();
    for (int i = 1; i <= count; ++i) {
      int node = 0, layer = 0;
      check(stodi_graph_violation(g.get(), i, &node, &layer));
      violations.push_back({{"node", node}, {"edge_set", layer}});
    }
    report["violations"] = std::move(violations);
    if (do_augment) {
      GraphHandle a;
      check(stodi_graph_augment_sink(g.get(), a.slot()));
      char* text = nullptr;
      check(stodi_graph_to_json(a.get(), &text));
      report["augmented"] = json::parse(owned_string(text));
    }
    output = report.dump(2) + "\n";
  } else if (*cmd_bounds) {
    manifest.subcommand = "bounds";
    manifest.add_input(graph_path);
    manifest.parameters = {{"graph", graph_path}, {"format", bounds_format}, {"decimal", decimal}};
    GraphHandle g = load_graph_or_die(graph_path);
    int n = stodi_graph_n(g.get());
    std::vector<double> lower(static_cast<std::size_t>(n) * n), upper(lower.size());
    check(stodi_graph_bounds(g.get(), lower.data(), upper.data()));
    if (bounds_format == "json") {
      json doc;
      doc["n"] = n;
      doc["lower"] = matrix_json(lower, n, decimal);
      doc["upper"] = matrix_json(upper, n, decimal);
      output = doc.dump(2) + "\n";
    } else {
      std::string csv = "matrix,i,j,value\n";
      for (const char* name : {"lower", "upper"}) {
        const std::vector<double>& m = name == std::string("lower") ? lower : upper;
        for (int i = 1; i <= n; ++i)
          for (int j = 1; j <= n; ++j)
            csv += std::string(name) + "," + std::to_string(i) + "," + std::to_string(j) + "," +
                   fmt_prob(m[static_cast<std::size_t>((i - 1) * n + (j - 1))], decimal) + "\n";
      }
      output = csv;
    }
  } else if (*cmd_recursion) {
    manifest.subcommand = "recursion";
    manifest.add_input(graph_path);
    manifest.parameters = {{"graph", graph_path},
                           {"target", target},
                           {"horizon", horizon},
                           {"kind", kind},
                           {"decimal", decimal}};
    GraphHandle g = load_graph_or_die(graph_path);
    TableHandle t;
    check(stodi_reach_recursion(g.get(), target.data(), static_cast<int>(target.size()), horizon,
                                kind == "upper" ? 1 : 0, t.slot()));
    std::string csv = "k,node,value\n";
    for (int k = 0; k <= stodi_table_horizon(t.get()); ++k)
      for (int x = 1; x <= stodi_table_state_count(t.get()); ++x) {
        double value = 0;
        check(stodi_table_value(t.get(), k, x, &value));
        csv += std::to_string(k) + "," + std::to_string(x) + "," + fmt_prob(value, decimal) + "\n";
      }
    output = csv;
  } else if (*cmd_pset) {
    manifest.subcommand = "pset";
    manifest.add_input(graph_path);
    manifest.parameters = {{"graph", graph_path}, {"cap", cap}, {"dedup", dedup}, {"decimal", decimal}};
    GraphHandle g = load_graph_or_die(graph_path);
    PsetHandle p;
    check(stodi_pset_enumerate(g.get(), cap, dedup ? 1 : 0, p.slot()));
    int n = stodi_pset_n(p.get());
    json doc;
    doc["n"] = n;
    doc["family_size"] = stodi_pset_family_size(p.get());
    doc["count"] = stodi_pset_count(p.get());
    json matrices = json::array();
    std::vector<double> buf(static_cast<std::size_t>(n) * n);
    for (int m = 1; m <= stodi_pset_count(p.get()); ++m) {
      check(stodi_pset_matrix(p.get(), m, buf.data()));
      matrices.push_back(matrix_json(buf, n, decimal));
    }
    doc["matrices"] = std::move(matrices);
    output = doc.dump(2) + "\n";
  } else if (*cmd_mdp) {
    manifest.subcommand = "mdp";
    manifest.add_input(graph_path);
    manifest.parameters = {{"graph", graph_path}, {"decimal", decimal}};
    GraphHandle g = load_graph_or_die(graph_path);
    MdpHandle m;
    check(stodi_mdp_local(g.get(), m.slot()));
    std::string csv = "i,a,j,p\n";
    for (int i = 1; i <= stodi_mdp_state_count(m.get()); ++i) {
      int actions = 0;
      check(stodi_mdp_action_count(m.get(), i, &actions));
      for (int a = 1; a <= actions; ++a) {
        int entries = 0;
        check(stodi_mdp_transition_count(m.get(), i, a, &entries));
        for (int e = 1; e <= entries; ++e) {
          int j = 0;
          double p = 0;
          check(stodi_mdp_transition(m.get(), i, a, e, &j, &p));
          csv += std::to_string(i) + "," + std::to_string(a) + "," + std::to_string(j) + "," +
                 fmt_prob(p, decimal) + "\n";
        }
      }
    }
    output = csv;
  } else if (*cmd_reach) {
    manifest.subcommand = "reach";
    manifest.add_input(graph_path);
    manifest.parameters = {{"graph", graph_path}, {"target", target},       {"horizon", horizon},
                           {"mode", mode},        {"policy_out", policy_out}, {"decimal", decimal}};
    GraphHandle g = load_graph_or_die(graph_path);
    ReachHandle r;
    check(stodi_reach_compute(g.get(), target.data(), static_cast<int>(target.size()), horizon,
                              mode == "weak" ? STODI_MODE_WEAK : STODI_MODE_STRONG, r.slot()));
    std::string csv = "k,node,value\n";
    for (int k = 0; k <= stodi_reach_horizon(r.get()); ++k)
      for (int x = 1; x <= stodi_reach_state_count(r.get()); ++x) {
        double value = 0;
        check(stodi_reach_value(r.get(), k, x, &value));
        csv += std::to_string(k) + "," + std::to_string(x) + "," + fmt_prob(value, decimal) + "\n";
      }
    output = csv;
    if (!policy_out.empty()) {
      char* text = nullptr;
      check(stodi_reach_policy_json(r.get(), &text));
      std::ofstream f(policy_out, std::ios::binary);
      if (!f) {
        std::cerr << "error: cannot open policy file " << policy_out << "\n";
        return 1;
      }
      f << owned_string(text);
    }
  } else if (*cmd_rl) {
    std::uint64_t run_seed = choose_seed(seed_given, seed);
    manifest.subcommand = "rl";
    manifest.add_input(graph_path);
    manifest.parameters = {{"graph", graph_path},
                           {"target", target},
                           {"mode", mode},
                           {"algo", algo},
                           {"episodes", episodes},
                           {"lr", learning_rate},
                           {"epsilon", epsilon},
                           {"start", start},
                           {"horizon_cap", horizon_cap},
                           {"trace", trace_path},
                           {"decimal", decimal}};
    manifest.seed = run_seed;
    GraphHandle g = load_graph_or_die(graph_path);
    RlHandle r;
    check(stodi_rl_reach(g.get(), target.data(), static_cast<int>(target.size()),
                         mode == "weak" ? STODI_MODE_WEAK : STODI_MODE_STRONG, start,
                         algo == "sarsa" ? STODI_ALGO_SARSA : STODI_ALGO_QLEARNING, episodes,
                         learning_rate, epsilon, horizon_cap, run_seed, r.slot()));
    double estimate = 0;
    check(stodi_rl_estimate(r.get(), &estimate));
    json doc;
    doc["algo"] = algo;
    doc["episodes"] = episodes;
    doc["estimate"] = prob_json(estimate, decimal);
    doc["mode"] = mode;
    doc["seed"] = run_seed;
    doc["start"] = start;
    output = doc.dump(2) + "\n";
    if (!trace_path.empty()) {
      std::vector<double> trace(static_cast<std::size_t>(stodi_rl_episode_count(r.get())));
      check(stodi_rl_trace(r.get(), trace.data()));
      std::ofstream f(trace_path, std::ios::binary);
      if (!f) {
        std::cerr << "error: cannot open trace file " << trace_path << "\n";
        return 1;
      }
      f << "episode,estimate\n";
      for (std::size_t e = 0; e < trace.size(); ++e)
        f << (e + 1) << "," << fmt_num(trace[e]) << "\n";
    }
  } else if (*cmd_sir_analyze) {
    manifest.subcommand = "sir analyze";
    manifest.add_input(sir_path);
    manifest.parameters = {{"sir", sir_path},
                           {"horizon", sir_horizon},
                           {"tol", tol},
                           {"max_iterations", max_iterations}};
    SirHandle s = load_sir_or_die(sir_path);
    std::vector<double> curve(static_cast<std::size_t>(sir_horizon) + 1);
    check(stodi_sir_expected_curve(s.get(), sir_horizon, curve.data()));
    double lower = 0, upper = 0;
    check(stodi_sir_bounds(s.get(), tol, max_iterations, &lower, &upper, nullptr, nullptr));
    std::string csv = "k,expected,lower,upper\n";
    for (int k = 0; k <= sir_horizon; ++k)
      csv += std::to_string(k) + "," + fmt_num(curve[static_cast<std::size_t>(k)]) + "," +
             fmt_num(lower) + "," + fmt_num(upper) + "\n";
    output = csv;
  } else if (*cmd_sir_simulate) {
    std::uint64_t run_seed = choose_seed(seed_given, seed);
    manifest.subcommand = "sir simulate";
    manifest.add_input(sir_path);
    manifest.parameters = {{"sir", sir_path},
                           {"horizon", sir_horizon},
                           {"samples", samples},
                           {"threads", threads}};
    manifest.seed = run_seed;
    SirHandle s = load_sir_or_die(sir_path);
    std::vector<double> mean(static_cast<std::size_t>(sir_horizon) + 1), se(mean.size());
    check(stodi_sir_monte_carlo(s.get(), sir_horizon, samples, run_seed, threads, mean.data(),
                                se.data()));
    std::string csv = "k,mean,stderr\n";
    for (int k = 0; k <= sir_horizon; ++k)
      csv += std::to_string(k) + "," + fmt_num(mean[static_cast<std::size_t>(k)]) + "," +
             fmt_num(se[static_cast<std::size_t>(k)]) + "\n";
    output = csv;
  } else if (*cmd_sir_rl) {
    std::uint64_t run_seed = choose_seed(seed_given, seed);
    manifest.subcommand = "sir rl";
    manifest.add_input(sir_path);
    manifest.parameters = {{"sir", sir_path},     {"algo", algo},
                           {"episodes", episodes}, {"lr", learning_rate},
                           {"epsilon", epsilon},   {"horizon_cap", horizon_cap},
                           {"trace", trace_path}};
    manifest.seed = run_seed;
    SirHandle s = load_sir_or_die(sir_path);
    int algo_code = algo == "sarsa" ? STODI_ALGO_SARSA : STODI_ALGO_QLEARNING;
    RlHandle up, down;
    check(stodi_sir_rl(s.get(), +1, algo_code, episodes, learning_rate, epsilon, horizon_cap,
                       run_seed, up.slot()));
    check(stodi_sir_rl(s.get(), -1, algo_code, episodes, learning_rate, epsilon, horizon_cap,
                       run_seed + 1, down.slot()));
    double est_up = 0, est_down = 0;
    check(stodi_rl_estimate(up.get(), &est_up));
    check(stodi_rl_estimate(down.get(), &est_down));
    int theta0 = stodi_sir_initial_infected(s.get());
    json doc;
    doc["algo"] = algo;
    doc["bound_lower"] = theta0 - est_down;
    doc["bound_upper"] = theta0 + est_up;
    doc["episodes"] = episodes;
    doc["estimate_lower"] = est_down;
    doc["estimate_upper"] = est_up;
    doc["initial_infected"] = theta0;
    doc["seed"] = run_seed;
    output = doc.dump(2) + "\n";
    if (!trace_path.empty()) {
      std::vector<double> upper_trace(static_cast<std::size_t>(stodi_rl_episode_count(up.get())));
      std::vector<double> lower_trace(static_cast<std::size_t>(stodi_rl_episode_count(down.get())));
      check(stodi_rl_trace(up.get(), upper_trace.data()));
      check(stodi_rl_trace(down.get(), lower_trace.data()));
      std::ofstream f(trace_path, std::ios::binary);
      if (!f) {
        std::cerr << "error: cannot open trace file " << trace_path << "\n";
        return 1;
      }
      f << "episode,upper,lower\n";
      for (std::size_t e = 0; e < upper_trace.size(); ++e)
        f << (e + 1) << "," << fmt_num(upper_trace[e]) << "," << fmt_num(lower_trace[e]) << "\n";
    }
  }

  emit_output(out_path, output);
  emit_manifest(manifest_path, manifest);
  return 0;
}
