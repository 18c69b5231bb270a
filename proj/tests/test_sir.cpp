#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/json_io.hpp"
#include "core/sir.hpp"
#include "testutil.hpp"

using namespace stodi;

namespace {

SirConfig three_agent_config() { return load_sir(std::string(STODI_DATA_DIR) + "/sir_3agents.json"); }

const SirModel& three_agent_model() {
  static SirModel model(three_agent_config());
  return model;
}

SirConfig small_config(int N, double alpha, double beta, SirState x0) {
  SirConfig cfg;
  cfg.N = N;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.motion = Digraph(2, {{1, 1}, {1, 2}, {2, 1}, {2, 2}});
  cfg.x0 = std::move(x0);
  return cfg;
}

}  // namespace

TEST_CASE("the bundled three-agent scenario parses with a symmetrized motion graph") {
  SirConfig cfg = three_agent_config();
  CHECK(cfg.N == 3);
  CHECK(cfg.alpha == 0.7);
  CHECK(cfg.beta == 0.3);
  CHECK(cfg.kappa() == 5);
  CHECK(cfg.motion.edges() ==
        std::vector<Edge>{{1, 2}, {1, 3}, {2, 1}, {2, 4}, {3, 1}, {3, 5}, {4, 2}, {4, 5}, {5, 3}, {5, 4}});
  REQUIRE(cfg.x0.size() == 3);
  CHECK(cfg.x0[0] == AgentState{2, 1});
  CHECK(cfg.x0[1] == AgentState{1, 1});
  CHECK(cfg.x0[2] == AgentState{1, 2});
}

TEST_CASE("scenario validation errors") {
  auto bad = [](const std::string& text) {
    try {
      parse_sir_json(text, "cfg.json");
      FAIL("expected a parse error for ", text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(std::string(e.what()).find("cfg.json") != std::string::npos);
    }
  };
  const std::string motion = R"("motion": {"kappa": 2, "edges": [[1,2],[2,2]], "directed": true})";
  bad(R"({"N":0, "alpha":0.5, "beta":0.5, )" + motion + R"(, "x0":[]})");
  bad(R"({"N":1, "alpha":1.5, "beta":0.5, )" + motion + R"(, "x0":[[1,1]]})");
  bad(R"({"N":1, "alpha":0.5, "beta":0.5, )" + motion + R"(, "x0":[[1,1],[1,1]]})");
  bad(R"({"N":1, "alpha":0.5, "beta":0.5, )" + motion + R"(, "x0":[[4,1]]})");
  bad(R"({"N":1, "alpha":0.5, "beta":0.5, )" + motion + R"(, "x0":[[1,9]]})");
  bad(R"({"N":1, "alpha":0.5, "beta":0.5, "x0":[[1,1]]})");
  // A motion node with no way out strands any agent placed there.
  bad(R"({"N":1, "alpha":0.5, "beta":0.5,
          "motion": {"kappa": 2, "edges": [[1,2]], "directed": true}, "x0":[[1,1]]})");
}

TEST_CASE("state index codec") {
  SirConfig cfg = small_config(2, 0.5, 0.5, {{1, 1}, {1, 1}});
  CHECK(sir_state_space_size(cfg) == 36);
  CHECK(sir_encode({{1, 1}, {1, 1}}, cfg) == 1);
  CHECK(sir_encode({{3, 2}, {3, 2}}, cfg) == 36);
  for (std::uint64_t idx = 1; idx <= 36; ++idx) CHECK(sir_encode(sir_decode(idx, cfg), cfg) == idx);
  CHECK_THROWS_AS(sir_decode(0, cfg), Error);
  CHECK_THROWS_AS(sir_decode(37, cfg), Error);
  CHECK_THROWS_AS(sir_encode({{1, 1}}, cfg), Error);

  CHECK(sir_state_space_size(three_agent_config()) == 3375);

  SirConfig huge = small_config(2, 0.5, 0.5, {{1, 1}, {1, 1}});
  huge.N = 50;
  try {
    sir_state_space_size(huge);
    FAIL("expected a capacity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Capacity);
  }
}

TEST_CASE("cumulative-infected count") {
  CHECK(sir_theta({{1, 1}, {1, 2}}) == 0);
  CHECK(sir_theta({{2, 1}, {1, 2}}) == 1);
  CHECK(sir_theta({{2, 1}, {3, 2}}) == 2);
  CHECK(sir_theta({{3, 1}, {3, 2}, {2, 1}}) == 3);
}

TEST_CASE("joint motion actions enumerate the per-agent neighborhood product") {
  SirConfig cfg = three_agent_config();
  auto acts = sir_actions(cfg.x0, cfg);
  REQUIRE(acts.size() == 8);  // agents at positions 1,1,2 with two options each
  CHECK(acts[0] == std::vector<int>{2, 2, 1});
  CHECK(acts[1] == std::vector<int>{2, 2, 4});
  CHECK(acts[2] == std::vector<int>{2, 3, 1});
  CHECK(acts[7] == std::vector<int>{3, 3, 4});

  SirConfig pin = small_config(1, 0.5, 0.5, {{2, 1}});
  pin.motion = Digraph(1, {{1, 1}});
  pin.x0 = {{2, 1}};
  CHECK(sir_actions(pin.x0, pin) == std::vector<std::vector<int>>{{1}});
}

TEST_CASE("one-step transitions: infection from current colocation, recovery, absorption") {
  SirConfig cfg = small_config(2, 0.7, 0.3, {{1, 1}, {2, 1}});
  auto out = sir_transition(cfg.x0, {1, 1}, cfg);
  REQUIRE(out.size() == 4);
  CHECK(out[0].first == SirState{{1, 1}, {2, 1}});
  CHECK(out[0].second == doctest::Approx(0.21).epsilon(1e-12));
  CHECK(out[1].first == SirState{{1, 1}, {3, 1}});
  CHECK(out[1].second == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(out[2].first == SirState{{2, 1}, {2, 1}});
  CHECK(out[2].second == doctest::Approx(0.49).epsilon(1e-12));
  CHECK(out[3].first == SirState{{2, 1}, {3, 1}});
  CHECK(out[3].second == doctest::Approx(0.21).epsilon(1e-12));

  // Positions follow the action; statuses were decided by the old colocation.
  auto moved = sir_transition(cfg.x0, {2, 1}, cfg);
  for (const auto& [succ, prob] : moved) {
    CHECK(succ[0].pos == 2);
    CHECK(succ[1].pos == 1);
  }

  // Two infected contacts compound: 1 - (1-0.7)^2 = 0.91.
  SirConfig trio = small_config(3, 0.7, 0.0, {{1, 1}, {2, 1}, {2, 1}});
  double infected_mass = 0.0;
  for (const auto& [succ, prob] : sir_transition(trio.x0, {1, 1, 1}, trio))
    if (succ[0].sigma == 2) infected_mass += prob;
  CHECK(infected_mass == doctest::Approx(0.91).epsilon(1e-12));

  // A susceptible alone with no infected contact cannot convert.
  SirConfig lone = small_config(2, 0.9, 0.0, {{1, 1}, {2, 2}});
  for (const auto& [succ, prob] : sir_transition(lone.x0, {1, 2}, lone)) CHECK(succ[0].sigma == 1);

  // Recovered agents never change status.
  SirConfig done = small_config(1, 0.9, 0.9, {{3, 1}});
  auto abs = sir_transition(done.x0, {2}, done);
  REQUIRE(abs.size() == 1);
  CHECK(abs[0].first == SirState{{3, 2}});
  CHECK(abs[0].second == 1.0);

  CHECK_THROWS_AS(sir_transition(cfg.x0, {1}, cfg), Error);       // wrong arity
  SirConfig line = cfg;
  line.motion = Digraph(2, {{1, 2}, {2, 1}});
  CHECK_THROWS_AS(sir_transition(line.x0, {1, 1}, line), Error);  // edge (1,1) absent
}

TEST_CASE("transition probabilities always sum to one and never lose infections") {
  SirConfig cfg = three_agent_config();
  const SirModel& model = three_agent_model();
  for (int ordinal : {1, 2, 10, 100, 1000, 2250}) {
    const SirState& s = model.state(ordinal);
    for (const auto& act : sir_actions(s, cfg)) {
      double total = 0.0;
      auto out = sir_transition(s, act, cfg);
      for (std::size_t t = 0; t < out.size(); ++t) {
        total += out[t].second;
        CHECK(sir_theta(out[t].first) >= sir_theta(s));
        if (t > 0) CHECK(out[t - 1].first < out[t].first);
      }
      CHECK(std::abs(total - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("reachable closure of the three-agent scenario") {
  const SirModel& model = three_agent_model();
  CHECK(model.closure_size() == 2250);
  CHECK(model.state(1) == three_agent_config().x0);
  CHECK(model.ordinal_of(three_agent_config().x0) == 1);
  CHECK(model.theta(1) == 1);
  CHECK_FALSE(model.terminal(1));
  // theta never decreases, so the infection-free state is unreachable.
  CHECK(model.ordinal_of({{1, 1}, {1, 1}, {1, 2}}) == 0);
  for (int i = 1; i <= model.closure_size(); ++i) CHECK(model.theta(i) >= 1);
}

TEST_CASE("closure MDP view") {
  const SirModel& model = three_agent_model();
  MdpModel m = model.mdp();
  CHECK(m.state_count() == 2250);
  CHECK(m.action_count(1) == 8);
  for (int a = 1; a <= 8; ++a) {
    double total = 0.0;
    for (const auto& t : m.transition(1, a)) {
      CHECK(t.next >= 1);
      CHECK(t.next <= 2250);
      total += t.prob;
    }
    CHECK(std::abs(total - 1.0) <= 1e-10);
  }

  MdpModel up = attach_reward(m, model.increment_reward(+1.0));
  MdpModel down = attach_reward(m, model.increment_reward(-1.0));
  bool saw_increase = false;
  for (const auto& t : up.transition(1, 1)) {
    double di = model.theta(t.next) - model.theta(1);
    CHECK(up.reward_at(1, 1, t.next) == di);
    CHECK(down.reward_at(1, 1, t.next) == -di);
    if (di > 0) saw_increase = true;
  }
  CHECK(saw_increase);
}

TEST_CASE("expected infections under uniform motion match the frozen trajectory") {
  const SirModel& model = three_agent_model();
  std::vector<double> curve = model.expected_infected_uniform(50);
  REQUIRE(curve.size() == 51);
  CHECK(curve[0] == 1.0);
  CHECK(curve[1] == doctest::Approx(1.7).epsilon(1e-9));
  CHECK(curve[2] == doctest::Approx(1.7735).epsilon(1e-9));
  CHECK(curve[5] == doctest::Approx(1.9247412923284795).epsilon(1e-9));
  CHECK(curve[20] == doctest::Approx(1.9956701703611104).epsilon(1e-9));
  CHECK(curve[50] == doctest::Approx(1.99577267929108).epsilon(1e-9));
  for (std::size_t k = 1; k < curve.size(); ++k) CHECK(curve[k] >= curve[k - 1] - 1e-12);
}

TEST_CASE("with no infection chance the expected count stays put") {
  SirConfig cfg = three_agent_config();
  cfg.alpha = 0.0;
  SirModel model(cfg);
  for (double v : model.expected_infected_uniform(10)) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("worst- and best-case envelopes for the three-agent scenario") {
  const SirModel& model = three_agent_model();
  SirModel::Bounds b = model.infected_bounds();
  CHECK(b.lower == doctest::Approx(1.7).epsilon(1e-9));
  CHECK(b.upper == doctest::Approx(2.6220351577348662).epsilon(1e-9));
  CHECK(b.iterations_lower > 0);
  CHECK(b.iterations_upper > 0);
  CHECK(b.iterations_lower < 1000);
  CHECK(b.iterations_upper < 1000);

  std::vector<double> curve = model.expected_infected_uniform(50);
  for (std::size_t k = 1; k < curve.size(); ++k) {
    CHECK(curve[k] >= b.lower - 1e-9);
    CHECK(curve[k] <= b.upper + 1e-9);
  }
}

TEST_CASE("degenerate scenarios pin both envelopes") {
  SirConfig done = small_config(2, 0.5, 0.5, {{3, 1}, {3, 2}});
  SirModel dm(done);
  SirModel::Bounds db = dm.infected_bounds();
  CHECK(db.lower == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(db.upper == doctest::Approx(2.0).epsilon(1e-12));

  SirConfig pin;
  pin.N = 1;
  pin.alpha = 0.5;
  pin.beta = 1.0;
  pin.motion = Digraph(1, {{1, 1}});
  pin.x0 = {{2, 1}};
  SirModel pm(pin);
  CHECK(pm.closure_size() == 2);
  SirModel::Bounds pb = pm.infected_bounds();
  CHECK(pb.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pb.upper == doctest::Approx(1.0).epsilon(1e-12));
  for (double v : pm.expected_infected_uniform(5)) CHECK(v == 1.0);
}

TEST_CASE("simulation agrees with the exact curve and is thread-invariant") {
  const SirModel& model = three_agent_model();
  const int K = 10;
  const long M = 20000;
  SirModel::MonteCarloResult mc = model.monte_carlo(K, M, 9);
  std::vector<double> curve = model.expected_infected_uniform(K);
  REQUIRE(mc.mean.size() == static_cast<std::size_t>(K) + 1);
  CHECK(mc.mean[0] == 1.0);
  CHECK(mc.stderr_[0] == 0.0);
  for (int k = 1; k <= K; ++k) {
    CHECK(mc.stderr_[static_cast<std::size_t>(k)] > 0.0);
    double diff = std::abs(mc.mean[static_cast<std::size_t>(k)] - curve[static_cast<std::size_t>(k)]);
    CHECK(diff <= 4.0 * mc.stderr_[static_cast<std::size_t>(k)] + 1e-12);
  }

  SirModel::MonteCarloResult repeat = model.monte_carlo(K, M, 9);
  CHECK(repeat.mean == mc.mean);
  CHECK(repeat.stderr_ == mc.stderr_);

  SirModel::MonteCarloResult threaded = model.monte_carlo(K, M, 9, 3);
  CHECK(threaded.mean == mc.mean);      // per-sample streams + integer sums
  CHECK(threaded.stderr_ == mc.stderr_);

  SirModel::MonteCarloResult other = model.monte_carlo(K, M, 10);
  CHECK(other.mean != mc.mean);
}
