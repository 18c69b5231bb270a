#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "core/bounds.hpp"
#include "core/decomposition.hpp"
#include "core/digraph.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"
#include "testutil.hpp"

using namespace stodi;
using testutil::example_graph;

namespace {

void check_matrix(const Matrix& got, const std::vector<std::vector<double>>& want, double tol) {
  REQUIRE(got.rows == want.size());
  for (std::size_t i = 0; i < got.rows; ++i) {
    REQUIRE(got.cols == want[i].size());
    for (std::size_t j = 0; j < got.cols; ++j) {
      INFO("entry (", i + 1, ",", j + 1, ")");
      CHECK(std::abs(got.at(i, j) - want[i][j]) <= tol);
    }
  }
}

}  // namespace

TEST_CASE("envelope matrices of the four-node example") {
  const double a = 2.0 / 3.0, b = 1.0 / 3.0;
  BoundMatrices bm = compute_bound_matrices(example_graph());
  check_matrix(bm.L,
               {{0, 0, 0, 0},
                {a, 0, 0, b},
                {0, 0, 0, b},
                {0, 0, b, 0}},
               1e-15);
  check_matrix(bm.M,
               {{0, a, 1, b},
                {a, 0, 0, b},
                {a, 0, 0, 1},
                {0, a, 1, 0}},
               1e-15);
}

TEST_CASE("for a one-regular graph the envelope collapses to the markov matrix") {
  // Two deterministic topologies: a 3-cycle and its reverse.
  Digraph fwd(3, {{1, 2}, {2, 3}, {3, 1}});
  Digraph rev(3, {{1, 3}, {2, 1}, {3, 2}});
  StochasticDigraph sd(3, {fwd, rev}, {0.25, 0.75});
  BoundMatrices bm = compute_bound_matrices(sd);
  CHECK(max_abs_diff(bm.L, bm.M) == 0.0);
  Matrix P = markov_matrix(sd);
  CHECK(max_abs_diff(bm.L, P) == 0.0);
  CHECK(P.at(0, 1) == 0.25);
  CHECK(P.at(0, 2) == 0.75);
}

TEST_CASE("random graphs: entrywise order and row-mass sanity") {
  std::mt19937_64 rng = make_engine(17);
  for (int trial = 0; trial < 40; ++trial) {
    StochasticDigraph sd = testutil::random_sa1_graph(rng);
    BoundMatrices bm = compute_bound_matrices(sd);
    for (std::size_t i = 0; i < bm.L.rows; ++i) {
      double lrow = 0.0, mrow = 0.0;
      for (std::size_t j = 0; j < bm.L.cols; ++j) {
        CHECK(bm.L.at(i, j) <= bm.M.at(i, j) + 1e-15);
        lrow += bm.L.at(i, j);
        mrow += bm.M.at(i, j);
      }
      CHECK(lrow <= 1.0 + 1e-12);   // forced mass cannot exceed the whole
      CHECK(mrow >= 1.0 - 1e-12);   // every topology allows at least one successor
    }
  }
}

TEST_CASE("reach recursion on the four-node example, target {4}") {
  StochasticDigraph sd = example_graph();
  std::set<NodeId> Q{4};
  ReachRecursionTable up = reach_recursion(sd, Q, 3, RecursionKind::Upper);
  ReachRecursionTable lo = reach_recursion(sd, Q, 3, RecursionKind::Lower);

  const double third = 1.0 / 3.0, fnine = 5.0 / 9.0;
  for (NodeId x = 1; x <= 4; ++x) {
    CHECK(up.at(0, x) == 0.0);
    CHECK(lo.at(0, x) == 0.0);
  }
  check_matrix(up.values,
               {{0, 0, 0, 0},
                {third, third, 1, 0},
                {1, fnine, 1, 1},
                {1, 1, 1, 1}},
               1e-15);
  check_matrix(lo.values,
               {{0, 0, 0, 0},
                {0, third, third, 0},
                {third, third, third, third},
                {third, fnine, fnine, third}},
               1e-15);
}

TEST_CASE("a node that can only leave the target forever scores zero") {
  // From node 1 the walk moves to 2 and stays; it never visits Q={1} again.
  StochasticDigraph sd(2, {Digraph(2, {{1, 2}, {2, 2}})}, {1.0});
  ReachRecursionTable up = reach_recursion(sd, {1}, 3, RecursionKind::Upper);
  for (int k = 0; k <= 3; ++k) {
    CHECK(up.at(k, 1) == 0.0);
    CHECK(up.at(k, 2) == 0.0);
  }
}

TEST_CASE("lower never exceeds upper and upper is nondecreasing in the horizon") {
  std::mt19937_64 rng = make_engine(23);
  for (int trial = 0; trial < 25; ++trial) {
    StochasticDigraph sd = testutil::random_sa1_graph(rng);
    std::set<NodeId> Q = testutil::random_target(rng, sd.n());
    const int K = 8;
    ReachRecursionTable up = reach_recursion(sd, Q, K, RecursionKind::Upper);
    ReachRecursionTable lo = reach_recursion(sd, Q, K, RecursionKind::Lower);
    for (int k = 0; k <= K; ++k) {
      for (NodeId x = 1; x <= sd.n(); ++x) {
        CHECK(lo.at(k, x) <= up.at(k, x) + 1e-12);
        CHECK(up.at(k, x) >= 0.0);
        CHECK(up.at(k, x) <= 1.0 + 1e-12);
        if (k > 0) CHECK(up.at(k, x) >= up.at(k - 1, x) - 1e-12);
      }
    }
  }
}

TEST_CASE("on a one-regular graph upper and lower coincide") {
  Digraph fwd(3, {{1, 2}, {2, 3}, {3, 1}});
  Digraph swap(3, {{1, 3}, {2, 2}, {3, 1}});
  StochasticDigraph sd(3, {fwd, swap}, {0.5, 0.5});
  ReachRecursionTable up = reach_recursion(sd, {3}, 6, RecursionKind::Upper);
  ReachRecursionTable lo = reach_recursion(sd, {3}, 6, RecursionKind::Lower);
  CHECK(max_abs_diff(up.values, lo.values) == 0.0);
}

TEST_CASE("recursion preconditions") {
  StochasticDigraph stranded(2, {Digraph(2, {{1, 2}})}, {1.0});
  try {
    reach_recursion(stranded, {2}, 3, RecursionKind::Upper);
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
    CHECK(std::string(e.what()).find("sink augmentation") != std::string::npos);
  }

  StochasticDigraph sd = example_graph();
  CHECK_THROWS_AS(reach_recursion(sd, {}, 3, RecursionKind::Upper), Error);
  CHECK_THROWS_AS(reach_recursion(sd, {9}, 3, RecursionKind::Upper), Error);
  CHECK_THROWS_AS(reach_recursion(sd, {4}, -1, RecursionKind::Upper), Error);
}
