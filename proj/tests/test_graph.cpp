#include <catch2/catch_amalgamated.hpp>

#include "graphk/graph.hpp"
#include "graphk/graph_io.hpp"
#include "testutil.hpp"

using graphk::Edge;
using graphk::Graph;
using graphk::VertexKind;

TEST_CASE("parse a minimal graph") {
  Graph g = graphk::parse_graph("vertex v\n");
  REQUIRE(g.vertices() == std::vector<std::string>{"v"});
  REQUIRE(g.edges().empty());
}

TEST_CASE("parse comments, blanks and flags") {
  Graph g = graphk::parse_graph(
      "# two loops\n"
      "\n"
      "vertex v\n"
      "vertex w inf   # flagged\n"
      "edge a v v\n"
      "edge b v w\n");
  REQUIRE(g.vertices().size() == 2);
  REQUIRE(g.flagged_infinite("w"));
  REQUIRE_FALSE(g.flagged_infinite("v"));
  REQUIRE(g.edges().size() == 2);
}

TEST_CASE("parse errors carry line numbers") {
  using graphk::parse_error;
  auto msg = [](auto&& fn) {
    try {
      fn();
    } catch (const parse_error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  REQUIRE(msg([] { graphk::parse_graph("vertex v\nvertex v\n"); }) ==
          "line 2: duplicate vertex 'v'");
  REQUIRE(msg([] { graphk::parse_graph("vertex v\nedge e v w\n"); }) ==
          "line 2: edge 'e' uses undeclared vertex 'w'");
  REQUIRE(msg([] { graphk::parse_graph("vertx v\n"); }) ==
          "line 1: unknown directive 'vertx'");
  REQUIRE(msg([] { graphk::parse_graph("vertex v notinf\n"); }) ==
          "line 1: expected 'vertex <id> [inf]'");
  REQUIRE(msg([] { graphk::parse_graph("vertex v\nedge e v\n"); }) ==
          "line 2: expected 'edge <id> <origin> <terminus>'");
  REQUIRE(msg([] { graphk::parse_graph("vertex v\nedge e v v\nedge e v v\n"); }) ==
          "line 3: duplicate edge 'e'");
}

TEST_CASE("classification distinguishes sinks, emitters and sources") {
  Graph g = graphk::parse_graph(
      "vertex a\n"
      "vertex b\n"
      "vertex c inf\n"
      "vertex d\n"
      "edge e1 a b\n"
      "edge e2 c b\n");
  auto ca = classify_vertex(g, "a");
  REQUIRE(ca.kind == VertexKind::Regular);
  REQUIRE(ca.source);
  auto cb = classify_vertex(g, "b");
  REQUIRE(cb.kind == VertexKind::Sink);
  REQUIRE_FALSE(cb.source);
  auto cc = classify_vertex(g, "c");
  REQUIRE(cc.kind == VertexKind::InfiniteEmitter);
  REQUIRE(cc.source);
  auto cd = classify_vertex(g, "d");  // isolated
  REQUIRE(cd.kind == VertexKind::Sink);
  REQUIRE(cd.source);
  REQUIRE(graphk::regular_set(g) == std::set<std::string>{"a"});
}

TEST_CASE("a flagged vertex with no listed edges is not a sink") {
  Graph g = graphk::parse_graph("vertex v inf\n");
  REQUIRE(classify_vertex(g, "v").kind == VertexKind::InfiniteEmitter);
  REQUIRE(graphk::regular_set(g).empty());
}

TEST_CASE("incidence matrix and powers") {
  Graph g = testutil::loops_graph(2);
  auto im = graphk::incidence(g);
  REQUIRE(im.m.at(0, 0) == 2);
  REQUIRE(graphk::matrix_power(im.m, 3).at(0, 0) == 8);
  REQUIRE(graphk::matrix_power(im.m, 0) == graphk::Matrix::identity(1));
  REQUIRE_THROWS_AS(graphk::matrix_power(im.m, -1), std::invalid_argument);

  Graph h = graphk::parse_graph("vertex v\nvertex w\nedge e v w\n");
  auto imh = graphk::incidence(h);
  REQUIRE(imh.vertices == std::vector<std::string>{"v", "w"});
  REQUIRE(imh.m.at(0, 1) == 1);
  REQUIRE(graphk::matrix_power(imh.m, 2).is_zero());

  Graph f = graphk::parse_graph("vertex v inf\nvertex w\nedge e v w\n");
  REQUIRE(graphk::incidence(f).infinite == std::set<std::string>{"v"});
}

TEST_CASE("path enumeration") {
  Graph g = testutil::loops_graph(2);
  auto p0 = graphk::enumerate_paths(g, "v", 0);
  REQUIRE(p0.size() == 1);
  REQUIRE(p0[0].length() == 0);
  auto p2 = graphk::enumerate_paths(g, "v", 2);
  REQUIRE(p2.size() == 4);
  REQUIRE(p2[0].edge_ids == std::vector<std::string>{"e0", "e0"});
  REQUIRE(p2[3].edge_ids == std::vector<std::string>{"e1", "e1"});

  Graph h = graphk::parse_graph("vertex v\nvertex w\nedge e v w\n");
  REQUIRE(graphk::enumerate_paths(h, "w", 1).empty());
  REQUIRE(graphk::enumerate_paths(h, "v", 1, "w").size() == 1);
  REQUIRE(graphk::enumerate_paths(h, "v", 1, "v").empty());
}

TEST_CASE("path counts agree with incidence powers") {
  testutil::Rng rng(555);
  for (int c = 0; c < 60; ++c) {
    Graph g = testutil::random_graph(rng, 4, 7);
    auto im = graphk::incidence(g);
    for (int j = 0; j <= 3; ++j) {
      auto mj = graphk::matrix_power(im.m, j);
      for (std::size_t x = 0; x < im.vertices.size(); ++x)
        for (std::size_t y = 0; y < im.vertices.size(); ++y) {
          auto paths = graphk::enumerate_paths(g, im.vertices[x], j, im.vertices[y]);
          REQUIRE(graphk::Int(paths.size()) == mj.at(x, y));
        }
    }
  }
}

TEST_CASE("relative set of a graph inside itself is its regular set") {
  testutil::Rng rng(31);
  for (int c = 0; c < 40; ++c) {
    Graph g = testutil::random_graph(rng, 5, 8);
    REQUIRE(graphk::relative_set(g, g) == graphk::regular_set(g));
  }
}

TEST_CASE("relative set drops vertices that lost out-edges") {
  Graph e = testutil::loops_graph(2);
  Graph f({"v"}, {}, {Edge{"e0", "v", "v"}});
  REQUIRE(graphk::relative_set(e, f).empty());
  REQUIRE(graphk::relative_set(e, e) == std::set<std::string>{"v"});
}

TEST_CASE("a vertex keeping all out-edges stays relative even without in-edges") {
  Graph e = graphk::parse_graph(
      "vertex a\nvertex b\nedge e1 a b\nedge e2 b b\n");
  Graph f({"a", "b"}, {}, {Edge{"e1", "a", "b"}, Edge{"e2", "b", "b"}});
  REQUIRE(graphk::relative_set(e, f) == std::set<std::string>{"a", "b"});
  // drop the in-edge at b but keep its own loop: b still relative
  Graph f2({"b"}, {}, {Edge{"e2", "b", "b"}});
  REQUIRE(graphk::relative_set(e, f2) == std::set<std::string>{"b"});
}

TEST_CASE("relative set rejects non-subgraphs") {
  Graph e = testutil::loops_graph(1);
  Graph f({"v", "x"}, {}, {});
  REQUIRE_THROWS_AS(graphk::relative_set(e, f), std::invalid_argument);
  // same edge id, different endpoints
  Graph f2({"v"}, {}, {Edge{"e0", "v", "v"}});
  Graph e2({"v", "w"}, {}, {Edge{"e0", "v", "w"}});
  REQUIRE_THROWS_AS(graphk::relative_set(e2, f2), std::invalid_argument);
}

TEST_CASE("add_head hangs a fresh vertex over a source") {
  Graph g = graphk::parse_graph("vertex v\n");
  Graph d = graphk::add_head(g, "v");
  REQUIRE(d.vertices().size() == 2);
  REQUIRE(d.has_vertex("omega"));
  REQUIRE(d.in_edges("v").size() == 1);
  REQUIRE(d.edge(d.in_edges("v")[0]).origin == "omega");
  // the new head is itself a source, so the construction iterates
  Graph d2 = graphk::add_head(d, "omega");
  REQUIRE(d2.has_vertex("omega2"));
  REQUIRE(d2.in_edges("omega").size() == 1);
}

TEST_CASE("add_head avoids name collisions and checks sources") {
  Graph g = graphk::parse_graph("vertex omega\nvertex theta\n");
  Graph d = graphk::add_head(g, "theta");
  REQUIRE(d.has_vertex("omega2"));
  Graph loop = testutil::loops_graph(1);
  REQUIRE_THROWS_AS(graphk::add_head(loop, "v"), std::invalid_argument);
  REQUIRE_THROWS_AS(graphk::add_head(loop, "zzz"), std::invalid_argument);
}

TEST_CASE("graph serialization round-trips") {
  testutil::Rng rng(808);
  for (int c = 0; c < 50; ++c) {
    Graph g = testutil::random_graph(rng, 5, 8);
    Graph back = graphk::parse_graph(graphk::serialize_graph(g));
    REQUIRE(back == g);
    REQUIRE(graphk::serialize_graph(back) == graphk::serialize_graph(g));
  }
}

TEST_CASE("two-sided emitter chain parses with growing relative sets") {
  auto chain = graphk::parse_chain(testutil::two_sided_chain_text(3));
  REQUIRE(chain.size() == 3);
  REQUIRE(chain.stage(0).relative == std::set<std::string>{"-1", "1"});
  REQUIRE(chain.stage(1).relative == std::set<std::string>{"-1", "-2", "1", "2"});
  REQUIRE(chain.stage(2).relative ==
          std::set<std::string>{"-1", "-2", "-3", "1", "2", "3"});
  REQUIRE(chain.stage(2).graph.vertices().size() == 7);
  REQUIRE(chain.stage(0).graph.flagged_infinite("0"));
}

TEST_CASE("chain admissibility violations are reported") {
  using graphk::parse_chain;
  using graphk::parse_error;
  // out-edge added at a vertex saturated in an earlier stage
  std::string bad =
      "stage\n"
      "vertex a\nvertex b\n"
      "edge e1 a b\n"
      "saturate a\n"
      "stage\n"
      "edge e2 a a\n";
  REQUIRE_THROWS_WITH(parse_chain(bad),
                      Catch::Matchers::ContainsSubstring("saturated vertex 'a'"));
  REQUIRE_THROWS_WITH(parse_chain("stage\nvertex a\nsaturate a\n"),
                      Catch::Matchers::ContainsSubstring("non-regular"));
  REQUIRE_THROWS_WITH(parse_chain("stage\nsaturate q\n"),
                      Catch::Matchers::ContainsSubstring("unknown vertex 'q'"));
  REQUIRE_THROWS_WITH(parse_chain("vertex a\n"),
                      Catch::Matchers::ContainsSubstring("before the first stage"));
  REQUIRE_THROWS_AS(parse_chain("# nothing\n"), parse_error);
  // saturating in the same stage that adds the edges is fine
  auto ok = parse_chain("stage\nvertex a\nsaturate a\nedge e a a\n");
  REQUIRE(ok.stage(0).relative == std::set<std::string>{"a"});
}

TEST_CASE("chain construction validates monotonicity directly") {
  Graph g1 = testutil::loops_graph(1);
  Graph g2 = testutil::loops_graph(2);
  using graphk::Chain;
  using graphk::RelativeGraph;
  // shrinking the graph between stages
  REQUIRE_THROWS_AS(Chain({RelativeGraph(g2), RelativeGraph(g1)}),
                    std::invalid_argument);
  // freezing: v saturated at stage 1, stage 2 grows its out-edges
  REQUIRE_THROWS_AS(Chain({RelativeGraph(g1, {"v"}), RelativeGraph(g2, {"v"})}),
                    std::invalid_argument);
  // dropping a vertex from the relative set
  REQUIRE_THROWS_AS(Chain({RelativeGraph(g1, {"v"}), RelativeGraph(g1, {})}),
                    std::invalid_argument);
  REQUIRE_NOTHROW(Chain({RelativeGraph(g1, {}), RelativeGraph(g1, {"v"})}));
}

TEST_CASE("chain serialization round-trips") {
  auto text = testutil::two_sided_chain_text(3);
  auto chain = graphk::parse_chain(text);
  auto text2 = graphk::serialize_chain(chain);
  auto chain2 = graphk::parse_chain(text2);
  REQUIRE(chain2.size() == chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    REQUIRE(chain2.stage(i).graph == chain.stage(i).graph);
    REQUIRE(chain2.stage(i).relative == chain.stage(i).relative);
  }
  REQUIRE(graphk::serialize_chain(chain2) == text2);
}
