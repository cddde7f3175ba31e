#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "polarnet/generators.hpp"
#include "polarnet/metrics.hpp"
#include "test_support.hpp"

using namespace polarnet;
using namespace testing_support;

namespace {

/// n nodes and exactly e edges: (i, i+1), then (i, i+2), ... in order.
AnnotatedGraph graph_with_counts(std::size_t n, std::size_t e) {
  std::vector<Edge> edges;
  for (std::size_t step = 1; edges.size() < e; ++step)
    for (NodeId i = 0; i + step < n && edges.size() < e; ++i) edges.emplace_back(i, i + step);
  return make_graph(n, edges);
}

DegreeDistribution exact_power_law(double gamma, std::size_t kmax, double scale = 1e8) {
  DegreeDistribution d;
  for (std::size_t k = 1; k <= kmax; ++k) {
    auto nk = static_cast<std::size_t>(std::llround(scale * std::pow(static_cast<double>(k), -gamma)));
    d.counts[k] = nk;
    d.n += nk;
  }
  return d;
}

AnnotatedGraph two_cliques(std::size_t size) {
  std::vector<Edge> e;
  std::vector<Opinion> ops(2 * size, Opinion::Pro);
  for (std::size_t c = 0; c < 2; ++c)
    for (NodeId i = 0; i < size; ++i)
      for (NodeId j = i + 1; j < size; ++j) e.emplace_back(c * size + i, c * size + j);
  std::fill(ops.begin() + static_cast<std::ptrdiff_t>(size), ops.end(), Opinion::Anti);
  return AnnotatedGraph::from_edges(2 * size, e, ops);
}

AnnotatedGraph cross_bipartite(std::size_t a, std::size_t b) {
  std::vector<Edge> e;
  std::vector<Opinion> ops(a + b, Opinion::Pro);
  for (NodeId i = 0; i < a; ++i)
    for (NodeId j = 0; j < b; ++j) e.emplace_back(i, a + j);
  std::fill(ops.begin() + static_cast<std::ptrdiff_t>(a), ops.end(), Opinion::Anti);
  return AnnotatedGraph::from_edges(a + b, e, ops);
}

}  // namespace

TEST(Density, CompleteAndEdgeless) {
  EXPECT_DOUBLE_EQ(density(complete(3)), 1.0);
  for (std::size_t n = 2; n <= 20; ++n) EXPECT_DOUBLE_EQ(density(complete(n)), 1.0);
  EXPECT_DOUBLE_EQ(density(make_graph(10, {})), 0.0);
  EXPECT_THROW(density(make_graph(1, {})), MetricError);
}

TEST(Density, PublishedNetworkSizes) {
  // 2020: 113038 users, 223099 edges; 2022: 3617 users, 14604 edges
  EXPECT_NEAR(density(graph_with_counts(113038, 223099)), 3.49e-5, 0.005e-5);
  EXPECT_NEAR(density(graph_with_counts(3617, 14604)), 0.00223, 0.000005);
}

TEST(DegreeDistribution, SmallGraphs) {
  auto k3 = degree_distribution(complete(3));
  EXPECT_EQ(k3.counts, (std::map<std::size_t, std::size_t>{{2, 3}}));
  auto s4 = degree_distribution(star(4));
  EXPECT_EQ(s4.counts, (std::map<std::size_t, std::size_t>{{1, 4}, {4, 1}}));
  EXPECT_DOUBLE_EQ(s4.probability(1), 0.8);
  double total = 0;
  for (auto [k, nk] : s4.counts) total += s4.probability(k);
  EXPECT_DOUBLE_EQ(total, 1.0);
}

TEST(FitPowerLaw, RecoversExactExponent) {
  auto fit = fit_power_law(exact_power_law(2.0, 100));
  EXPECT_NEAR(fit.gamma, 2.0, 0.01);
  EXPECT_GT(fit.r2, 0.999);
  EXPECT_EQ(fit.points, 100u);
  for (double g0 : {1.5, 2.2, 2.5, 3.0}) {
    auto f = fit_power_law(exact_power_law(g0, 60, 1e10), 1);
    EXPECT_NEAR(f.gamma, g0, 0.01 * g0) << "gamma0 = " << g0;
  }
}

TEST(FitPowerLaw, KMinRestrictsSupport) {
  auto d = exact_power_law(2.0, 100);
  d.counts[1] = 1;  // distort k = 1 only
  EXPECT_GT(std::abs(fit_power_law(d, 1).gamma - 2.0), 0.05);
  EXPECT_NEAR(fit_power_law(d, 2).gamma, 2.0, 0.01);
  EXPECT_EQ(fit_power_law(d, 2).k_min, 2u);
}

TEST(FitPowerLaw, InsufficientSupportOrFlat) {
  DegreeDistribution d;
  d.counts = {{1, 10}, {2, 5}};
  d.n = 15;
  EXPECT_THROW(fit_power_law(d), FitError);
  d.counts[3] = 0;  // zero counts do not count as support
  EXPECT_THROW(fit_power_law(d), FitError);
  d.counts = {{1, 5}, {2, 5}, {3, 5}};
  EXPECT_THROW(fit_power_law(d), FitError);
  EXPECT_THROW(fit_power_law(exact_power_law(2.0, 10), 0), FitError);
}

TEST(FitPowerLaw, LogBinnedOnBarabasiAlbert) {
  // the preferential-attachment tail decays like k^-3
  auto d = degree_distribution(barabasi_albert(20000, 3, 17));
  auto binned = fit_power_law(d, 3, FitMethod::LogBinned);
  EXPECT_EQ(binned.method, FitMethod::LogBinned);
  EXPECT_GE(binned.gamma, 2.6);
  EXPECT_LE(binned.gamma, 3.4);
  // the per-degree histogram is flattened by the sparse tail
  EXPECT_LT(fit_power_law(d, 3).gamma, binned.gamma);
}

TEST(LocalClustering, CompleteAndStar) {
  auto k3 = complete(3);
  for (NodeId i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(local_clustering(k3, i), 1.0);
  auto s = star(5);
  EXPECT_DOUBLE_EQ(local_clustering(s, 0), 0.0);
  EXPECT_DOUBLE_EQ(local_clustering(s, 1), 0.0);  // degree 1
  EXPECT_THROW(local_clustering(s, 6), std::out_of_range);
}

TEST(LocalClustering, MatchesTriangleBruteForce) {
  std::mt19937_64 rng(30);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = oracle::random_dense(rng, 30, 30);
    auto g = to_graph(d);
    auto all = local_clustering_all(g);
    for (NodeId i = 0; i < d.n; ++i) {
      const double want = oracle::local_clustering(d, i);
      EXPECT_NEAR(local_clustering(g, i), want, 1e-12);
      EXPECT_NEAR(all[i], want, 1e-12);
    }
  }
}

TEST(AverageClustering, KnownValuesAndBounds) {
  EXPECT_DOUBLE_EQ(average_clustering(complete(4)), 1.0);
  EXPECT_DOUBLE_EQ(average_clustering(star(6)), 0.0);
  // triangle with a pendant: C = {1, 1, 1/3, 0} -> 7/12
  auto g = make_graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  EXPECT_NEAR(average_clustering(g), 7.0 / 12.0, 1e-15);
  EXPECT_THROW(average_clustering(AnnotatedGraph{}), MetricError);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    auto d = oracle::random_dense(rng, 1, 50);
    const double c = average_clustering(to_graph(d));
    EXPECT_NEAR(c, oracle::average_clustering(d), 1e-12);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(MixingMatrix, CrossAndSegregatedExtremes) {
  auto cross = mixing_matrix(cross_bipartite(2, 2));
  EXPECT_DOUBLE_EQ(cross(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(cross(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(cross(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(cross(1, 1), 0.0);
  auto seg = mixing_matrix(two_cliques(5));
  EXPECT_DOUBLE_EQ(seg(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(seg(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(seg(0, 1), 0.0);
  EXPECT_THROW(mixing_matrix(make_graph(4, {})), MetricError);
}

TEST(MixingMatrix, MatchesEdgeEnumerationAndInvariants) {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 50; ++trial) {
    auto d = oracle::random_dense(rng, 40, 40);
    if (d.edges() == 0) continue;
    auto m = mixing_matrix(to_graph(d));
    auto want = oracle::mixing(d);
    double sum = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        EXPECT_NEAR(m(a, b), want[a][b], 1e-12);
        EXPECT_GE(m(a, b), 0.0);
        sum += m(a, b);
      }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(m(0, 1), m(1, 0));
  }
}

TEST(Assortativity, Extremes) {
  MixingMatrix cross;
  cross.e = {{{0, 0.5}, {0.5, 0}}};
  EXPECT_DOUBLE_EQ(assortativity(cross), -1.0);
  MixingMatrix seg;
  seg.e = {{{0.5, 0}, {0, 0.5}}};
  EXPECT_DOUBLE_EQ(assortativity(seg), 1.0);
  EXPECT_DOUBLE_EQ(assortativity(mixing_matrix(cross_bipartite(3, 5))), -1.0);
  EXPECT_DOUBLE_EQ(assortativity(mixing_matrix(two_cliques(7))), 1.0);
}

TEST(Assortativity, SingleGroupIsDegenerate) {
  MixingMatrix one;
  one.e = {{{0, 0}, {0, 1}}};
  EXPECT_THROW(assortativity(one), MetricError);
  EXPECT_THROW(assortativity(mixing_matrix(complete(4))), MetricError);
}

TEST(Assortativity, RandomRelabelingIsNearZero) {
  auto g = erdos_renyi(1000, 0.004, 8);
  ASSERT_GE(g.edge_count(), 1000u);
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.5);
  double mean = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Labels labels(g.node_count());
    for (auto& l : labels) l = coin(rng);
    const double r = assortativity(mixing_matrix(g, labels));
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
    mean += r / 100;
  }
  EXPECT_LT(std::abs(mean), 0.05);
}

TEST(CrossConnection, Values) {
  MixingMatrix seg;
  seg.e = {{{0.5, 0}, {0, 0.5}}};
  EXPECT_DOUBLE_EQ(cross_connection_ratio(seg), 0.0);
  MixingMatrix m;
  m.e = {{{0.6, 0.05}, {0.05, 0.3}}};
  EXPECT_NEAR(cross_connection_ratio(m), 0.1 / 0.9, 1e-15);
  MixingMatrix cross;
  cross.e = {{{0, 0.5}, {0.5, 0}}};
  EXPECT_THROW(cross_connection_ratio(cross), MetricError);
}

TEST(MetricsReport, FullGraphAndSubgraphs) {
  auto g = two_community(300, 700, 0.05, 0.0005, 12);
  auto r = metrics_report(g);
  EXPECT_EQ(r.nodes, 1000u);
  EXPECT_NEAR(r.anti_fraction, 0.7, 1e-12);
  EXPECT_DOUBLE_EQ(r.density, density(g));
  EXPECT_DOUBLE_EQ(r.avg_clustering, average_clustering(g));
  ASSERT_TRUE(r.assortativity);
  EXPECT_GT(*r.assortativity, 0.9);
  ASSERT_TRUE(r.cross_connection);
  EXPECT_LT(*r.cross_connection, 0.05);
  EXPECT_GE(r.density, 0.0);
  EXPECT_LE(r.density, 1.0);

  auto anti = metrics_report(subgraph_by_opinion(g, Opinion::Anti));
  EXPECT_EQ(anti.nodes, 700u);
  EXPECT_DOUBLE_EQ(anti.anti_fraction, 1.0);
  EXPECT_FALSE(anti.assortativity);  // one group only
  ASSERT_TRUE(anti.cross_connection);
  EXPECT_DOUBLE_EQ(*anti.cross_connection, 0.0);
}
