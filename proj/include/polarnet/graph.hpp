#ifndef POLARNET_GRAPH_HPP
#define POLARNET_GRAPH_HPP

/** @file
 * Annotated undirected contact graphs: construction, validation, CSV
 * edge-list I/O and opinion subgraphs.
 */

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polarnet {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

enum class Opinion : std::uint8_t { Pro, Anti };

inline std::string_view to_string(Opinion o) noexcept {
  return o == Opinion::Pro ? "pro" : "anti";
}

/// Malformed input line. `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Nodes referenced by edges without an opinion, or conflicting opinions.
class AnnotationError : public std::runtime_error {
 public:
  AnnotationError(const std::string& what, std::vector<std::int64_t> offenders)
      : std::runtime_error(what), offenders_(std::move(offenders)) {}
  const std::vector<std::int64_t>& offenders() const noexcept { return offenders_; }

 private:
  std::vector<std::int64_t> offenders_;
};

/// Structural invariant broken (asymmetric, self-loop, duplicate edge).
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * Undirected simple graph with one opinion per node.
 *
 * Adjacency is stored in compressed sparse row form; each neighbor list is
 * sorted ascending. Node ids are dense in [0, n). The external label of each
 * node is kept for output traceability. Immutable after construction.
 */
class AnnotatedGraph {
 public:
  AnnotatedGraph() : offsets_{0} {}

  /**
   * Builds a graph over `n` dense ids. Duplicate edges (in either
   * orientation) collapse to one; self-loops are dropped and counted.
   * `labels` defaults to the identity mapping.
   */
  static AnnotatedGraph from_edges(std::size_t n, std::span<const Edge> edges,
                                   std::vector<Opinion> opinions,
                                   std::vector<std::int64_t> labels = {}) {
    if (opinions.size() != n)
      throw std::invalid_argument("opinion vector size does not match node count");
    if (labels.empty()) {
      labels.resize(n);
      for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::int64_t>(i);
    } else if (labels.size() != n) {
      throw std::invalid_argument("label vector size does not match node count");
    }

    AnnotatedGraph g;
    std::vector<Edge> arcs;
    arcs.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
      if (u == v) {
        ++g.self_loops_dropped_;
        continue;
      }
      arcs.emplace_back(u, v);
      arcs.emplace_back(v, u);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    g.offsets_.assign(n + 1, 0);
    for (auto [u, v] : arcs) ++g.offsets_[u + 1];
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.targets_.resize(arcs.size());
    for (std::size_t k = 0; k < arcs.size(); ++k) g.targets_[k] = arcs[k].second;
    g.opinions_ = std::move(opinions);
    g.labels_ = std::move(labels);
    return g;
  }

  std::size_t node_count() const noexcept { return opinions_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId i) const {
    check(i);
    return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
  }

  std::size_t degree(NodeId i) const {
    check(i);
    return offsets_[i + 1] - offsets_[i];
  }

  bool has_edge(NodeId i, NodeId j) const {
    auto nb = neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
  }

  Opinion opinion(NodeId i) const {
    check(i);
    return opinions_[i];
  }
  std::span<const Opinion> opinions() const noexcept { return opinions_; }

  std::int64_t label(NodeId i) const {
    check(i);
    return labels_[i];
  }
  std::span<const std::int64_t> labels() const noexcept { return labels_; }

  std::size_t self_loops_dropped() const noexcept { return self_loops_dropped_; }

  std::size_t count(Opinion o) const noexcept {
    return static_cast<std::size_t>(std::count(opinions_.begin(), opinions_.end(), o));
  }

  /// Each undirected edge once, as (i, j) with i < j, in ascending order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId i = 0; i < node_count(); ++i)
      for (NodeId j : neighbors(i))
        if (i < j) out.emplace_back(i, j);
    return out;
  }

  /// Full scan of the simple/undirected invariants.
  void validate() const {
    const std::size_t n = node_count();
    if (offsets_.size() != n + 1 || labels_.size() != n)
      throw ValidationError("inconsistent graph arrays");
    for (NodeId i = 0; i < n; ++i) {
      auto nb = neighbors(i);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        if (nb[k] >= n) throw ValidationError("neighbor id out of range");
        if (nb[k] == i) throw ValidationError("self-loop at node " + std::to_string(i));
        if (k > 0 && nb[k - 1] >= nb[k])
          throw ValidationError("unsorted or duplicate neighbor at node " + std::to_string(i));
        if (!has_edge(nb[k], i))
          throw ValidationError("asymmetric edge " + std::to_string(i) + "-" +
                                std::to_string(nb[k]));
      }
    }
    if (targets_.size() % 2 != 0) throw ValidationError("odd adjacency total");
  }

  friend bool operator==(const AnnotatedGraph& a, const AnnotatedGraph& b) {
    return a.offsets_ == b.offsets_ && a.targets_ == b.targets_ &&
           a.opinions_ == b.opinions_ && a.labels_ == b.labels_;
  }

 private:
  void check(NodeId i) const {
    if (i >= node_count())
      throw std::out_of_range("node id " + std::to_string(i) + " out of range");
  }

  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<Opinion> opinions_;
  std::vector<std::int64_t> labels_;
  std::size_t self_loops_dropped_ = 0;
};

inline std::size_t degree(const AnnotatedGraph& g, NodeId i) { return g.degree(i); }

/// Induced subgraph on nodes holding opinion `o`; ids re-densified in order.
inline AnnotatedGraph subgraph_by_opinion(const AnnotatedGraph& g, Opinion o) {
  constexpr NodeId absent = ~NodeId{0};
  std::vector<NodeId> remap(g.node_count(), absent);
  std::vector<std::int64_t> labels;
  NodeId next = 0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (g.opinion(i) != o) continue;
    remap[i] = next++;
    labels.push_back(g.label(i));
  }
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges())
    if (remap[u] != absent && remap[v] != absent) edges.emplace_back(remap[u], remap[v]);
  return AnnotatedGraph::from_edges(next, edges, std::vector<Opinion>(next, o),
                                    std::move(labels));
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool parse_int(std::string_view s, std::int64_t& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

/// Splits a two-field CSV line. Returns false if the field count is not 2.
inline bool split2(std::string_view line, std::string_view& a, std::string_view& b) {
  auto comma = line.find(',');
  if (comma == std::string_view::npos) return false;
  a = trim(line.substr(0, comma));
  b = trim(line.substr(comma + 1));
  return b.find(',') == std::string_view::npos;
}

template <class Fn>
void for_each_record(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (lineno == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF")
      view = trim(view.substr(3));
    if (view.empty()) continue;
    std::string_view a, b;
    if (!split2(view, a, b)) throw ParseError(path, lineno, "expected two comma-separated fields");
    std::int64_t id = 0;
    if (!parse_int(a, id)) {
      // header: only the first non-blank line may have a non-numeric first field
      if (first) {
        first = false;
        continue;
      }
      throw ParseError(path, lineno, "non-integer node label '" + std::string(a) + "'");
    }
    first = false;
    fn(lineno, id, b);
  }
}

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace detail

/**
 * Loads an edge list (`src,dst`) and an opinion file (`node,opinion`).
 *
 * Labels are arbitrary integers; dense ids follow ascending label order so
 * that save/load is idempotent. Nodes that appear only in the attribute file
 * are kept as isolated nodes.
 */
inline AnnotatedGraph load_edge_list(const std::string& edge_path, const std::string& attr_path) {
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  detail::for_each_record(edge_path, [&](std::size_t lineno, std::int64_t src,
                                         std::string_view dst_field) {
    std::int64_t dst = 0;
    if (!detail::parse_int(dst_field, dst))
      throw ParseError(edge_path, lineno, "non-integer node label '" + std::string(dst_field) + "'");
    raw.emplace_back(src, dst);
  });

  std::map<std::int64_t, Opinion> attrs;
  std::vector<std::int64_t> conflicts;
  detail::for_each_record(attr_path, [&](std::size_t lineno, std::int64_t node,
                                         std::string_view value) {
    Opinion o;
    if (detail::iequals(value, "pro"))
      o = Opinion::Pro;
    else if (detail::iequals(value, "anti"))
      o = Opinion::Anti;
    else
      throw ParseError(attr_path, lineno, "opinion must be 'pro' or 'anti', got '" +
                                              std::string(value) + "'");
    auto [it, inserted] = attrs.emplace(node, o);
    if (!inserted && it->second != o) conflicts.push_back(node);
  });
  if (!conflicts.empty())
    throw AnnotationError("conflicting opinions for " + std::to_string(conflicts.size()) + " node(s)",
                          std::move(conflicts));

  std::vector<std::int64_t> labels;
  labels.reserve(attrs.size() + raw.size());
  for (auto& [node, _] : attrs) labels.push_back(node);
  for (auto [a, b] : raw) {
    labels.push_back(a);
    labels.push_back(b);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  std::vector<std::int64_t> missing;
  std::vector<Opinion> opinions(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = attrs.find(labels[i]);
    if (it == attrs.end())
      missing.push_back(labels[i]);
    else
      opinions[i] = it->second;
  }
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) + " node(s) without an opinion:";
    for (std::size_t k = 0; k < missing.size() && k < 20; ++k) msg += " " + std::to_string(missing[k]);
    if (missing.size() > 20) msg += " ...";
    throw AnnotationError(msg, std::move(missing));
  }

  auto dense = [&](std::int64_t label) {
    return static_cast<NodeId>(std::lower_bound(labels.begin(), labels.end(), label) - labels.begin());
  };
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (auto [a, b] : raw) edges.emplace_back(dense(a), dense(b));
  const std::size_t n = labels.size();
  return AnnotatedGraph::from_edges(n, edges, std::move(opinions), std::move(labels));
}

/// Writes the graph in the same two-file format `load_edge_list` reads.
inline void save_edge_list(const AnnotatedGraph& g, const std::string& edge_path,
                           const std::string& attr_path) {
  std::ofstream edges(edge_path, std::ios::binary);
  if (!edges) throw std::runtime_error("cannot write " + edge_path);
  for (auto [u, v] : g.edges()) edges << g.label(u) << ',' << g.label(v) << '\n';
  std::ofstream attrs(attr_path, std::ios::binary);
  if (!attrs) throw std::runtime_error("cannot write " + attr_path);
  for (NodeId i = 0; i < g.node_count(); ++i)
    attrs << g.label(i) << ',' << to_string(g.opinion(i)) << '\n';
  if (!edges.flush() || !attrs.flush()) throw std::runtime_error("write failed");
}

}  // namespace polarnet

#endif  // POLARNET_GRAPH_HPP
