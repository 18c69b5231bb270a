#include <doctest.h>

#include <string>

#include "core/digraph.hpp"
#include "core/error.hpp"
#include "core/json_io.hpp"
#include "testutil.hpp"

using namespace stodi;

namespace {

template <typename Fn>
Error capture(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected a stodi::Error");
  return Error(ErrorKind::InvalidArgument, "unreachable");
}

}  // namespace

TEST_CASE("the bundled four-node example file parses to the expected graph") {
  StochasticDigraph sd = load_graph(std::string(STODI_DATA_DIR) + "/example_4node.json");
  StochasticDigraph ref = testutil::example_graph();
  REQUIRE(sd.n() == ref.n());
  REQUIRE(sd.h() == ref.h());
  for (int w = 1; w <= ref.h(); ++w) {
    CHECK(sd.mu(w) == ref.mu(w));
    CHECK(sd.layer(w).edges() == ref.layer(w).edges());
  }
}

TEST_CASE("serialization is canonical and loading it back is byte-stable") {
  // Deliberately unsorted, duplicated input.
  std::string text = R"({"n": 3,
    "edge_sets": [[[3,1],[1,2],[1,2],[2,3]], [[2,1],[1,3],[3,3]]],
    "mu": [0.25, "3/4"]})";
  StochasticDigraph sd = parse_graph_json(text);
  std::string first = graph_to_json(sd);
  CHECK(first.find("[[1,2],[1,3]") == std::string::npos);  // nlohmann pretty-prints; just sanity-check non-empty
  StochasticDigraph back = parse_graph_json(first, "<round-trip>");
  CHECK(graph_to_json(back) == first);
  CHECK(back.layer(1).edges() == std::vector<Edge>{{1, 2}, {2, 3}, {3, 1}});
  CHECK(first.find("\"1/4\"") != std::string::npos);
  CHECK(first.find("\"3/4\"") != std::string::npos);
}

TEST_CASE("mu entries may be plain numbers or fraction strings") {
  StochasticDigraph a = parse_graph_json(R"({"n":1, "edge_sets": [[[1,1]]], "mu": [1]})");
  CHECK(a.mu(1) == 1.0);
  StochasticDigraph b = parse_graph_json(R"({"n":1, "edge_sets": [[[1,1]],[[1,1]]], "mu": [0.5, "1/2"]})");
  CHECK(b.mu(1) == 0.5);
  CHECK(b.mu(2) == 0.5);
}

TEST_CASE("decimal serialization can be forced") {
  StochasticDigraph sd = testutil::example_graph();
  std::string text = graph_to_json(sd, /*decimal_mu=*/true);
  CHECK(text.find("2/3") == std::string::npos);
  CHECK(text.find("0.6666666666666666") != std::string::npos);
}

TEST_CASE("parse errors name the source and the offending field") {
  Error e = capture([] { parse_graph_json("{", "broken.json"); });
  CHECK(e.kind() == ErrorKind::Parse);
  CHECK(std::string(e.what()).find("broken.json") != std::string::npos);

  e = capture([] { parse_graph_json(R"({"edge_sets": [], "mu": []})", "nofield.json"); });
  CHECK(e.kind() == ErrorKind::Parse);
  CHECK(std::string(e.what()).find("'n'") != std::string::npos);

  e = capture([] { parse_graph_json(R"({"n":2, "edge_sets": [[[1]]], "mu": [1]})", "badedge.json"); });
  CHECK(e.kind() == ErrorKind::Parse);
  CHECK(std::string(e.what()).find("edge_sets[0]") != std::string::npos);

  e = capture([] { parse_graph_json(R"({"n":2, "edge_sets": [[[1,5]]], "mu": [1]})", "range.json"); });
  CHECK(e.kind() == ErrorKind::Parse);
  CHECK(std::string(e.what()).find("edge_sets[0]") != std::string::npos);

  e = capture([] { parse_graph_json(R"({"n":1, "edge_sets": [[[1,1]]], "mu": ["2/"]})", "badmu.json"); });
  CHECK(e.kind() == ErrorKind::Parse);

  e = capture([] { parse_graph_json(R"({"n":1, "edge_sets": [[[1,1]],[[1,1]]], "mu": [0.5, 0.4]})", "sum.json"); });
  CHECK(e.kind() == ErrorKind::Parse);
  CHECK(std::string(e.what()).find("sum.json") != std::string::npos);
}

TEST_CASE("loading a missing file reports an I/O error naming the path") {
  Error e = capture([] { load_graph("/nonexistent/graph.json"); });
  CHECK(e.kind() == ErrorKind::Io);
  CHECK(std::string(e.what()).find("/nonexistent/graph.json") != std::string::npos);
}
