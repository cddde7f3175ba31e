#ifndef POLARNET_METRICS_HPP
#define POLARNET_METRICS_HPP

/** @file
 * Structural and polarization metrics: density, degree distribution and its
 * power-law fit, clustering, attribute mixing matrix, assortativity and the
 * cross-connection ratio.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "polarnet/graph.hpp"

namespace polarnet {

/// A metric is undefined for the given input (too few nodes, empty edge set...).
class MetricError : public std::domain_error {
  using std::domain_error::domain_error;
};

/// Not enough support in the degree histogram to fit a power law.
class FitError : public MetricError {
  using MetricError::MetricError;
};

inline double density(const AnnotatedGraph& g) {
  const double n = static_cast<double>(g.node_count());
  if (g.node_count() < 2) throw MetricError("density needs at least 2 nodes");
  return static_cast<double>(g.edge_count()) / (n * (n - 1.0) / 2.0);
}

inline double mean_degree(const AnnotatedGraph& g) {
  if (g.node_count() == 0) throw MetricError("mean degree of empty graph");
  return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

struct DegreeDistribution {
  std::map<std::size_t, std::size_t> counts;  // degree -> number of nodes
  std::size_t n = 0;

  double probability(std::size_t k) const {
    auto it = counts.find(k);
    return it == counts.end() || n == 0 ? 0.0
                                        : static_cast<double>(it->second) / static_cast<double>(n);
  }
  std::size_t min_degree() const { return counts.empty() ? 0 : counts.begin()->first; }
  std::size_t max_degree() const { return counts.empty() ? 0 : counts.rbegin()->first; }
};

inline DegreeDistribution degree_distribution(const AnnotatedGraph& g) {
  DegreeDistribution d;
  d.n = g.node_count();
  for (NodeId i = 0; i < g.node_count(); ++i) ++d.counts[g.degree(i)];
  return d;
}

/// How the degree histogram is reduced before the log-log regression.
enum class FitMethod : std::uint8_t {
  Histogram,  ///< one point per distinct degree k >= k_min with n_k > 0
  LogBinned,  ///< one point per base-2 logarithmic bin, density = count / bin width
};

struct PowerLawFit {
  double gamma = 0.0;
  std::size_t k_min = 1;
  double r2 = 0.0;
  std::size_t points = 0;  // regression points used
  FitMethod method = FitMethod::Histogram;
};

namespace detail {

inline PowerLawFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() < 3) throw FitError("power-law fit needs at least 3 distinct degrees >= k_min");
  const double m = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  if (!(slope < 0.0)) throw FitError("degree histogram is not decreasing; no positive exponent");
  PowerLawFit fit;
  fit.gamma = -slope;
  fit.points = xs.size();
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace detail

/**
 * Least-squares line through (log k, log P(k)); gamma is minus the slope.
 *
 * The default uses every distinct degree k >= k_min with a nonzero count.
 * That estimator is exact on noiseless power-law data but is pulled towards
 * shallower slopes by the sparse tail of sampled graphs (degrees seen once).
 * LogBinned averages the tail over bins [k_min 2^j, k_min 2^(j+1)) and places
 * each point at the geometric centre of its bin.
 */
inline PowerLawFit fit_power_law(const DegreeDistribution& d, std::size_t k_min = 1,
                                 FitMethod method = FitMethod::Histogram) {
  if (k_min < 1) throw FitError("k_min must be at least 1");
  const double n = static_cast<double>(d.n);
  std::vector<double> xs, ys;
  if (method == FitMethod::Histogram) {
    for (auto [k, nk] : d.counts) {
      if (k < k_min || nk == 0) continue;
      xs.push_back(std::log(static_cast<double>(k)));
      ys.push_back(std::log(static_cast<double>(nk) / n));
    }
  } else {
    auto it = d.counts.lower_bound(k_min);
    for (std::size_t lo = k_min; it != d.counts.end(); lo *= 2) {
      const std::size_t hi = 2 * lo;  // exclusive
      std::size_t count = 0;
      for (; it != d.counts.end() && it->first < hi; ++it) count += it->second;
      if (count == 0) continue;
      const double width = static_cast<double>(hi - lo);
      xs.push_back(0.5 * std::log(static_cast<double>(lo) * static_cast<double>(hi - 1)));
      ys.push_back(std::log(static_cast<double>(count) / (width * n)));
    }
  }
  PowerLawFit fit = detail::fit_line(xs, ys);
  fit.k_min = k_min;
  fit.method = method;
  return fit;
}

/// Fraction of neighbor pairs of `i` that are linked; 0 when degree < 2.
inline double local_clustering(const AnnotatedGraph& g, NodeId i) {
  auto nb = g.neighbors(i);
  const std::size_t k = nb.size();
  if (k < 2) return 0.0;
  std::size_t links = 0;
  for (std::size_t a = 0; a < k; ++a) {
    auto other = g.neighbors(nb[a]);
    // count neighbors of nb[a] that are also neighbors of i and come after it
    auto it = other.begin();
    for (std::size_t b = a + 1; b < k; ++b) {
      it = std::lower_bound(it, other.end(), nb[b]);
      if (it == other.end()) break;
      if (*it == nb[b]) ++links;
    }
  }
  return 2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
}

/**
 * Per-node triangle counts via degree-ordered forward adjacency, then
 * C_i = 2 t_i / (k_i (k_i - 1)). Runs in O(m^1.5).
 */
inline std::vector<double> local_clustering_all(const AnnotatedGraph& g) {
  const std::size_t n = g.node_count();
  auto rank_less = [&](NodeId a, NodeId b) {
    auto da = g.degree(a), db = g.degree(b);
    return da < db || (da == db && a < b);
  };
  std::vector<std::vector<NodeId>> forward(n);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : g.neighbors(u))
      if (rank_less(u, v)) forward[u].push_back(v);

  std::vector<std::uint64_t> triangles(n, 0);
  std::vector<NodeId> mark(n, ~NodeId{0});
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : forward[u]) mark[v] = u;
    for (NodeId v : forward[u])
      for (NodeId w : forward[v])
        if (mark[w] == u) {
          ++triangles[u];
          ++triangles[v];
          ++triangles[w];
        }
  }
  std::vector<double> c(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    const double k = static_cast<double>(g.degree(i));
    if (k >= 2) c[i] = 2.0 * static_cast<double>(triangles[i]) / (k * (k - 1.0));
  }
  return c;
}

inline double average_clustering(const AnnotatedGraph& g) {
  if (g.node_count() == 0) throw MetricError("clustering of empty graph");
  double sum = 0.0;
  for (double c : local_clustering_all(g)) sum += c;
  return sum / static_cast<double>(g.node_count());
}

/// Binary node attribute; 1 = vaccinated / pro, 0 = unvaccinated / anti.
using Labels = std::vector<std::uint8_t>;

inline Labels opinion_labels(const AnnotatedGraph& g) {
  Labels l(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) l[i] = g.opinion(i) == Opinion::Pro ? 1 : 0;
  return l;
}

/// e[a][b]: fraction of edge endpoint pairings with labels (a, b), both orientations.
struct MixingMatrix {
  std::array<std::array<double, 2>, 2> e{};

  double operator()(int a, int b) const { return e[a][b]; }
  double trace() const { return e[0][0] + e[1][1]; }
  /// Sum of all elements of e·e.
  double square_sum() const {
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) s += e[i][k] * e[k][j];
    return s;
  }
};

inline MixingMatrix mixing_matrix(const AnnotatedGraph& g, std::span<const std::uint8_t> labels) {
  if (labels.size() != g.node_count()) throw std::invalid_argument("label count does not match node count");
  if (g.edge_count() == 0) throw MetricError("mixing matrix of a graph without edges");
  std::array<std::array<std::uint64_t, 2>, 2> counts{};
  for (auto [u, v] : g.edges()) {
    const int a = labels[u] ? 1 : 0, b = labels[v] ? 1 : 0;
    ++counts[a][b];
    ++counts[b][a];
  }
  const double total = 2.0 * static_cast<double>(g.edge_count());
  MixingMatrix m;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) m.e[a][b] = static_cast<double>(counts[a][b]) / total;
  return m;
}

inline MixingMatrix mixing_matrix(const AnnotatedGraph& g) {
  return mixing_matrix(g, opinion_labels(g));
}

/// Newman's attribute assortativity. Throws when only one group is present.
inline double assortativity(const MixingMatrix& m) {
  const double s = m.square_sum();
  const double denom = 1.0 - s;
  if (std::abs(denom) < 1e-15) throw MetricError("assortativity undefined: single-group mixing matrix");
  return (m.trace() - s) / denom;
}

inline double cross_connection_ratio(const MixingMatrix& m) {
  const double diag = m.e[1][1] + m.e[0][0];
  if (diag <= 0.0) throw MetricError("cross-connection ratio undefined: no within-group edges");
  return 2.0 * m.e[1][0] / diag;
}

struct MetricsReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double anti_fraction = 0.0;
  double density = 0.0;
  double mean_degree = 0.0;
  double avg_clustering = 0.0;
  std::optional<PowerLawFit> power_law;
  std::optional<double> assortativity;
  std::optional<double> cross_connection;
};

/**
 * All metrics for one graph. Fields whose metric is undefined for the input
 * (a single-opinion subgraph has no assortativity; a sparse one may not
 * support a fit) are left empty rather than failing the whole report.
 */
inline MetricsReport metrics_report(const AnnotatedGraph& g, std::size_t k_min = 1,
                                    FitMethod fit_method = FitMethod::Histogram) {
  MetricsReport r;
  r.nodes = g.node_count();
  r.edges = g.edge_count();
  if (r.nodes == 0) throw MetricError("metrics of empty graph");
  r.anti_fraction = static_cast<double>(g.count(Opinion::Anti)) / static_cast<double>(r.nodes);
  r.density = r.nodes >= 2 ? density(g) : 0.0;
  r.mean_degree = mean_degree(g);
  r.avg_clustering = average_clustering(g);
  try {
    r.power_law = fit_power_law(degree_distribution(g), k_min, fit_method);
  } catch (const FitError&) {
  }
  if (r.edges > 0) {
    auto m = mixing_matrix(g);
    try {
      r.assortativity = assortativity(m);
    } catch (const MetricError&) {
    }
    try {
      r.cross_connection = cross_connection_ratio(m);
    } catch (const MetricError&) {
    }
  }
  return r;
}

}  // namespace polarnet

#endif  // POLARNET_METRICS_HPP
