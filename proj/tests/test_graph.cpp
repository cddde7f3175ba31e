#include <gtest/gtest.h>

#include <random>

#include "polarnet/graph.hpp"
#include "test_support.hpp"

using namespace polarnet;
using namespace testing_support;

TEST(LoadEdgeList, CollapsesDuplicatesAndDropsSelfLoops) {
  auto dir = scratch_dir("dedupe");
  write_text(dir / "e.csv", "0,1\n1,0\n1,1\n");
  write_text(dir / "a.csv", "0,pro\n1,anti\n");
  auto g = load_edge_list((dir / "e.csv").string(), (dir / "a.csv").string());
  EXPECT_EQ(g.node_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.self_loops_dropped(), 1u);
  EXPECT_EQ(g.opinion(0), Opinion::Pro);
  EXPECT_EQ(g.opinion(1), Opinion::Anti);
  g.validate();
}

TEST(LoadEdgeList, ArbitraryLabelsHeadersAndCase) {
  auto dir = scratch_dir("labels");
  write_text(dir / "e.csv", "source,target\r\n-7, 1000000000000\r\n\r\n1000000000000,42\r\n");
  write_text(dir / "a.csv", "id,opinion\n42,PRO\n-7,Anti\n1000000000000,pro\n99,anti\n");
  auto g = load_edge_list((dir / "e.csv").string(), (dir / "a.csv").string());
  ASSERT_EQ(g.node_count(), 4u);  // 99 kept as an isolated node
  EXPECT_EQ(g.edge_count(), 2u);
  // dense ids follow ascending labels
  EXPECT_EQ(g.label(0), -7);
  EXPECT_EQ(g.label(1), 42);
  EXPECT_EQ(g.label(2), 99);
  EXPECT_EQ(g.label(3), 1000000000000);
  EXPECT_EQ(g.degree(2), 0u);
  EXPECT_EQ(g.opinion(1), Opinion::Pro);
  EXPECT_EQ(g.opinion(0), Opinion::Anti);
}

TEST(LoadEdgeList, MalformedLineReportsLineNumber) {
  auto dir = scratch_dir("malformed");
  write_text(dir / "e.csv", "0,1\n1,2\n2;3\n");
  write_text(dir / "a.csv", "0,pro\n1,pro\n2,pro\n");
  try {
    load_edge_list((dir / "e.csv").string(), (dir / "a.csv").string());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }

  write_text(dir / "e.csv", "0,1\nx,2\n");
  EXPECT_THROW(load_edge_list((dir / "e.csv").string(), (dir / "a.csv").string()), ParseError);
  write_text(dir / "e.csv", "0,1\n");
  write_text(dir / "a.csv", "0,pro\n1,maybe\n");
  EXPECT_THROW(load_edge_list((dir / "e.csv").string(), (dir / "a.csv").string()), ParseError);
}

TEST(LoadEdgeList, MissingOpinionListsOffenders) {
  auto dir = scratch_dir("missing");
  write_text(dir / "e.csv", "0,1\n1,2\n5,2\n");
  write_text(dir / "a.csv", "1,pro\n");
  try {
    load_edge_list((dir / "e.csv").string(), (dir / "a.csv").string());
    FAIL() << "expected AnnotationError";
  } catch (const AnnotationError& e) {
    EXPECT_EQ(e.offenders(), (std::vector<std::int64_t>{0, 2, 5}));
  }
}

TEST(LoadEdgeList, ConflictingOpinionIsAnAnnotationError) {
  auto dir = scratch_dir("conflict");
  write_text(dir / "e.csv", "0,1\n");
  write_text(dir / "a.csv", "0,pro\n1,anti\n0,anti\n");
  EXPECT_THROW(load_edge_list((dir / "e.csv").string(), (dir / "a.csv").string()), AnnotationError);
}

TEST(LoadEdgeList, SaveLoadRoundTripIsIdentical) {
  std::mt19937_64 rng(11);
  auto dir = scratch_dir("roundtrip");
  for (int trial = 0; trial < 20; ++trial) {
    auto dense = oracle::random_dense(rng, 10, 10);
    auto g = to_graph(dense);
    save_edge_list(g, (dir / "e.csv").string(), (dir / "a.csv").string());
    auto back = load_edge_list((dir / "e.csv").string(), (dir / "a.csv").string());
    EXPECT_EQ(back, g);
    // and once more: load is idempotent
    save_edge_list(back, (dir / "e2.csv").string(), (dir / "a2.csv").string());
    EXPECT_EQ(read_text(dir / "e.csv"), read_text(dir / "e2.csv"));
    EXPECT_EQ(read_text(dir / "a.csv"), read_text(dir / "a2.csv"));
  }
}

TEST(SubgraphByOpinion, DisjointTriangles) {
  std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
  std::vector<Opinion> ops{Opinion::Pro, Opinion::Pro, Opinion::Pro, Opinion::Anti, Opinion::Anti, Opinion::Anti};
  auto g = AnnotatedGraph::from_edges(6, e, ops);
  auto pro = subgraph_by_opinion(g, Opinion::Pro);
  EXPECT_EQ(pro.node_count(), 3u);
  EXPECT_EQ(pro.edge_count(), 3u);
  for (NodeId i = 0; i < 3; ++i) EXPECT_EQ(pro.opinion(i), Opinion::Pro);
}

TEST(SubgraphByOpinion, BipartiteCrossEdgesExcluded) {
  std::vector<Edge> e{{0, 2}, {0, 3}, {1, 2}, {1, 3}};
  std::vector<Opinion> ops{Opinion::Pro, Opinion::Pro, Opinion::Anti, Opinion::Anti};
  auto anti = subgraph_by_opinion(AnnotatedGraph::from_edges(4, e, ops), Opinion::Anti);
  EXPECT_EQ(anti.node_count(), 2u);
  EXPECT_EQ(anti.edge_count(), 0u);
  EXPECT_EQ(anti.label(0), 2);
}

TEST(SubgraphByOpinion, MatchesBruteForceFilter) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto d = oracle::random_dense(rng, 50, 50);
    auto g = to_graph(d);
    for (Opinion o : {Opinion::Pro, Opinion::Anti}) {
      const int want = o == Opinion::Pro ? 1 : 0;
      std::size_t nodes = 0, edges = 0;
      for (std::size_t i = 0; i < d.n; ++i) {
        nodes += d.label[i] == want;
        for (std::size_t j = i + 1; j < d.n; ++j)
          edges += d.adj[i][j] && d.label[i] == want && d.label[j] == want;
      }
      auto s = subgraph_by_opinion(g, o);
      s.validate();
      EXPECT_EQ(s.node_count(), nodes);
      EXPECT_EQ(s.edge_count(), edges);
    }
  }
}

TEST(Degree, StarIsolatedAndOutOfRange) {
  auto s = star(4);
  EXPECT_EQ(degree(s, 0), 4u);
  EXPECT_EQ(degree(s, 3), 1u);
  auto iso = make_graph(3, {{0, 1}});
  EXPECT_EQ(degree(iso, 2), 0u);
  EXPECT_THROW(degree(iso, 3), std::out_of_range);
}

TEST(Degree, HandshakeAndSymmetryOnRandomGraphs) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = to_graph(oracle::random_dense(rng, 1, 60));
    std::size_t sum = 0;
    for (NodeId i = 0; i < g.node_count(); ++i) {
      sum += g.degree(i);
      for (NodeId j : g.neighbors(i)) EXPECT_TRUE(g.has_edge(j, i));
    }
    EXPECT_EQ(sum, 2 * g.edge_count());
    g.validate();
  }
}

TEST(FromEdges, RejectsOutOfRangeEndpoint) {
  std::vector<Edge> e{{0, 5}};
  EXPECT_THROW(AnnotatedGraph::from_edges(3, e, std::vector<Opinion>(3)), std::out_of_range);
  EXPECT_THROW(AnnotatedGraph::from_edges(3, {}, std::vector<Opinion>(2)), std::invalid_argument);
}
