// Independent brute-force references used only by the tests. Nothing here
// calls into the metric or epidemic implementations under test.
#ifndef POLARNET_TESTS_ORACLES_HPP
#define POLARNET_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

/// Dense adjacency-matrix graph with binary labels.
struct DenseGraph {
  std::size_t n = 0;
  std::vector<std::vector<bool>> adj;
  std::vector<int> label;  // 1 = pro / vaccinated

  std::size_t edges() const {
    std::size_t e = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) e += adj[i][j];
    return e;
  }
};

/// Random labeled graph: n in [nmin, nmax], edge probability p in [0.05, 0.6].
inline DenseGraph random_dense(std::mt19937_64& rng, std::size_t nmin, std::size_t nmax) {
  std::uniform_int_distribution<std::size_t> size(nmin, nmax);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DenseGraph g;
  g.n = size(rng);
  const double p = 0.05 + 0.55 * unit(rng);
  const double pro = unit(rng);
  g.adj.assign(g.n, std::vector<bool>(g.n, false));
  g.label.resize(g.n);
  for (std::size_t i = 0; i < g.n; ++i) g.label[i] = unit(rng) < pro ? 1 : 0;
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = i + 1; j < g.n; ++j)
      if (unit(rng) < p) g.adj[i][j] = g.adj[j][i] = true;
  return g;
}

inline double density(const DenseGraph& g) {
  double possible = 0;
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = i + 1; j < g.n; ++j) possible += 1;
  return static_cast<double>(g.edges()) / possible;
}

/// Triple loop over all neighbor pairs.
inline double local_clustering(const DenseGraph& g, std::size_t i) {
  std::size_t k = 0, links = 0;
  for (std::size_t j = 0; j < g.n; ++j) k += g.adj[i][j];
  if (k < 2) return 0.0;
  for (std::size_t j = 0; j < g.n; ++j)
    for (std::size_t l = j + 1; l < g.n; ++l)
      if (g.adj[i][j] && g.adj[i][l] && g.adj[j][l]) ++links;
  return 2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
}

inline double average_clustering(const DenseGraph& g) {
  double s = 0;
  for (std::size_t i = 0; i < g.n; ++i) s += local_clustering(g, i);
  return s / static_cast<double>(g.n);
}

/// Mixing matrix by enumerating ordered adjacent pairs.
inline std::array<std::array<double, 2>, 2> mixing(const DenseGraph& g) {
  std::array<std::array<double, 2>, 2> e{};
  double total = 0;
  for (std::size_t i = 0; i < g.n; ++i)
    for (std::size_t j = 0; j < g.n; ++j)
      if (g.adj[i][j]) {
        e[g.label[i]][g.label[j]] += 1;
        total += 1;
      }
  for (auto& row : e)
    for (auto& x : row) x /= total;
  return e;
}

/// Newman's r written via row sums a_i: r = (sum e_ii - sum a_i^2) / (1 - sum a_i^2).
inline double assortativity(const std::array<std::array<double, 2>, 2>& e) {
  double tr = 0, a2 = 0;
  for (int i = 0; i < 2; ++i) {
    tr += e[i][i];
    const double a = e[i][0] + e[i][1];
    a2 += a * a;
  }
  return (tr - a2) / (1 - a2);
}

inline double cross_connection(const std::array<std::array<double, 2>, 2>& e) {
  return 2 * e[1][0] / (e[1][1] + e[0][0]);
}

/// Gamma pdf with mean mu and sd sigma, from std::lgamma.
inline double gamma_pdf(double u, double mu, double sigma) {
  if (u <= 0) return 0.0;
  const double k = mu * mu / (sigma * sigma), theta = sigma * sigma / mu;
  return std::exp((k - 1) * std::log(u) - u / theta - std::lgamma(k) - k * std::log(theta));
}

namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb, double m,
                      double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15;
  return simpson(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
         simpson(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-14) {
  const double m = 0.5 * (a + b), fa = f(a), fb = f(b), fm = f(m);
  return detail::simpson(f, a, fa, b, fb, m, fm, (b - a) / 6 * (fa + 4 * fm + fb), tol, 50);
}

inline double infectiousness_integral(int t, double mu, double sigma) {
  if (t <= 0) return 0.0;
  return integrate([&](double u) { return gamma_pdf(u, mu, sigma); }, t - 1.0, static_cast<double>(t));
}

}  // namespace oracle

#endif  // POLARNET_TESTS_ORACLES_HPP
