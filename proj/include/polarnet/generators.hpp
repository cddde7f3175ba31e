#ifndef POLARNET_GENERATORS_HPP
#define POLARNET_GENERATORS_HPP

/** @file
 * Synthetic contact networks: Erdős–Rényi, Watts–Strogatz, Barabási–Albert
 * and a planted two-community (pro/anti) block model. Every generator is a
 * pure function of its parameters and seed.
 */

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "polarnet/graph.hpp"
#include "polarnet/rng.hpp"

namespace polarnet {

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

inline bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace detail

/// G(n, p); all nodes Pro.
inline AnnotatedGraph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  detail::require(n >= 2, "erdos_renyi: n must be at least 2");
  detail::require(detail::is_probability(p), "erdos_renyi: p must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (rng.uniform() < p) edges.emplace_back(i, j);
  return AnnotatedGraph::from_edges(n, edges, std::vector<Opinion>(n, Opinion::Pro));
}

/**
 * Ring lattice where each node links to its k_ring/2 nearest neighbors on
 * each side; then every lattice edge (i, i+j) has its far endpoint replaced,
 * with probability p_rewire, by a uniform node that is neither i nor already
 * adjacent to i.
 */
inline AnnotatedGraph watts_strogatz(std::size_t n, std::size_t k_ring, double p_rewire,
                                     std::uint64_t seed) {
  detail::require(k_ring > 0 && k_ring % 2 == 0, "watts_strogatz: k_ring must be positive and even");
  detail::require(k_ring < n, "watts_strogatz: k_ring must be smaller than n");
  detail::require(detail::is_probability(p_rewire), "watts_strogatz: p_rewire must lie in [0, 1]");
  Rng rng(seed);
  std::vector<std::set<NodeId>> adj(n);
  const std::size_t half = k_ring / 2;
  for (NodeId i = 0; i < n; ++i)
    for (std::size_t j = 1; j <= half; ++j) {
      auto v = static_cast<NodeId>((i + j) % n);
      adj[i].insert(v);
      adj[v].insert(i);
    }
  for (std::size_t j = 1; j <= half; ++j) {
    for (NodeId i = 0; i < n; ++i) {
      auto v = static_cast<NodeId>((i + j) % n);
      if (rng.uniform() >= p_rewire) continue;
      if (!adj[i].contains(v)) continue;  // already rewired away
      if (adj[i].size() >= n - 1) continue;
      NodeId w;
      do {
        w = static_cast<NodeId>(rng.below(n));
      } while (w == i || adj[i].contains(w));
      adj[i].erase(v);
      adj[v].erase(i);
      adj[i].insert(w);
      adj[w].insert(i);
    }
  }
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId v : adj[i])
      if (i < v) edges.emplace_back(i, v);
  return AnnotatedGraph::from_edges(n, edges, std::vector<Opinion>(n, Opinion::Pro));
}

/**
 * Preferential attachment from an m-node clique. Each new node picks m
 * distinct targets with probability proportional to degree; repeats are
 * rejected and redrawn. With m = 1 the seed is a single node, and the first
 * newcomer attaches to it.
 */
inline AnnotatedGraph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  detail::require(m >= 1 && m < n, "barabasi_albert: need 1 <= m < n");
  Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(m * (n - m) + m * (m - 1) / 2);
  std::vector<NodeId> endpoints;  // each node repeated once per unit of degree
  endpoints.reserve(2 * edges.capacity());
  for (NodeId i = 0; i < m; ++i)
    for (NodeId j = i + 1; j < m; ++j) {
      edges.emplace_back(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  std::vector<NodeId> targets;
  for (auto t = static_cast<NodeId>(m); t < n; ++t) {
    targets.clear();
    while (targets.size() < m) {
      NodeId pick = endpoints.empty() ? static_cast<NodeId>(rng.below(t))
                                      : endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), pick) == targets.end()) targets.push_back(pick);
    }
    for (NodeId v : targets) {
      edges.emplace_back(v, t);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return AnnotatedGraph::from_edges(n, edges, std::vector<Opinion>(n, Opinion::Pro));
}

/**
 * Planted partition: nodes [0, n_pro) are Pro and [n_pro, n_pro + n_anti)
 * are Anti. Same-block pairs link with p_in, cross-block pairs with p_out.
 */
inline AnnotatedGraph two_community(std::size_t n_pro, std::size_t n_anti, double p_in, double p_out,
                                    std::uint64_t seed) {
  detail::require(n_pro + n_anti >= 2, "two_community: need at least 2 nodes");
  detail::require(detail::is_probability(p_in) && detail::is_probability(p_out),
                  "two_community: probabilities must lie in [0, 1]");
  detail::require(p_in >= p_out, "two_community: p_in must not be below p_out");
  const std::size_t n = n_pro + n_anti;
  Rng rng(seed);
  std::vector<Opinion> opinions(n, Opinion::Pro);
  std::fill(opinions.begin() + static_cast<std::ptrdiff_t>(n_pro), opinions.end(), Opinion::Anti);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) {
      const double p = opinions[i] == opinions[j] ? p_in : p_out;
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  return AnnotatedGraph::from_edges(n, edges, std::move(opinions));
}

struct ErdosRenyiSpec {
  std::size_t n = 0;
  double p = 0.0;
};
struct WattsStrogatzSpec {
  std::size_t n = 0;
  std::size_t k_ring = 0;
  double p_rewire = 0.0;
};
struct BarabasiAlbertSpec {
  std::size_t n = 0;
  std::size_t m = 0;
};
struct TwoCommunitySpec {
  std::size_t n_pro = 0;
  std::size_t n_anti = 0;
  double p_in = 0.0;
  double p_out = 0.0;
};

struct GeneratorSpec {
  std::variant<ErdosRenyiSpec, WattsStrogatzSpec, BarabasiAlbertSpec, TwoCommunitySpec> kind;
  std::uint64_t seed = 0;
};

inline AnnotatedGraph generate(const GeneratorSpec& spec) {
  struct Visitor {
    std::uint64_t seed;
    AnnotatedGraph operator()(const ErdosRenyiSpec& s) const { return erdos_renyi(s.n, s.p, seed); }
    AnnotatedGraph operator()(const WattsStrogatzSpec& s) const {
      return watts_strogatz(s.n, s.k_ring, s.p_rewire, seed);
    }
    AnnotatedGraph operator()(const BarabasiAlbertSpec& s) const {
      return barabasi_albert(s.n, s.m, seed);
    }
    AnnotatedGraph operator()(const TwoCommunitySpec& s) const {
      return two_community(s.n_pro, s.n_anti, s.p_in, s.p_out, seed);
    }
  };
  return std::visit(Visitor{spec.seed}, spec.kind);
}

}  // namespace polarnet

#endif  // POLARNET_GENERATORS_HPP
