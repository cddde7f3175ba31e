#ifndef POLARNET_CONFIG_HPP
#define POLARNET_CONFIG_HPP

/** @file
 * Flat `key = value` run configuration.
 *
 * Blank lines and everything after `#` are ignored. Unset epidemic keys keep
 * their defaults (R=4, S_as=1.14, A_si=0.88, B_n=1, I_bar=2, mu=5.5,
 * sigma=2.14, VET=0.9, VEI=0.6). See README.md for the key list.
 */

#include <charconv>
#include <cstdint>
#include <cctype>
#include <fstream>
#include <locale>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "polarnet/epidemic.hpp"
#include "polarnet/experiment.hpp"
#include "polarnet/generators.hpp"
#include "polarnet/graph.hpp"

namespace polarnet {

/// Bad key, bad value or violated constraint. `key()` names the offender.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class GeneratorKind : std::uint8_t { ErdosRenyi, WattsStrogatz, BarabasiAlbert, TwoCommunity };

inline std::string_view to_string(GeneratorKind k) noexcept {
  switch (k) {
    case GeneratorKind::ErdosRenyi: return "er";
    case GeneratorKind::WattsStrogatz: return "ws";
    case GeneratorKind::BarabasiAlbert: return "ba";
    default: return "two-community";
  }
}

inline std::optional<GeneratorKind> parse_generator_kind(std::string_view s) {
  if (s == "er") return GeneratorKind::ErdosRenyi;
  if (s == "ws") return GeneratorKind::WattsStrogatz;
  if (s == "ba") return GeneratorKind::BarabasiAlbert;
  if (s == "two-community") return GeneratorKind::TwoCommunity;
  return std::nullopt;
}

/// Generator parameters as written in a config; unused ones stay empty.
struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::TwoCommunity;
  std::optional<std::size_t> n, k_ring, m, n_pro, n_anti;
  std::optional<double> p, p_rewire, p_in, p_out;
  std::uint64_t seed = 1;

  friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;

  GeneratorSpec spec() const {
    auto need = [](const auto& v, const char* key) {
      if (!v) throw ConfigError(key, "required by the selected generator");
      return *v;
    };
    GeneratorSpec s;
    s.seed = seed;
    switch (kind) {
      case GeneratorKind::ErdosRenyi: s.kind = ErdosRenyiSpec{need(n, "n"), need(p, "p")}; break;
      case GeneratorKind::WattsStrogatz:
        s.kind = WattsStrogatzSpec{need(n, "n"), need(k_ring, "k_ring"), need(p_rewire, "p_rewire")};
        break;
      case GeneratorKind::BarabasiAlbert: s.kind = BarabasiAlbertSpec{need(n, "n"), need(m, "m")}; break;
      case GeneratorKind::TwoCommunity:
        s.kind = TwoCommunitySpec{need(n_pro, "n_pro"), need(n_anti, "n_anti"), need(p_in, "p_in"),
                                  need(p_out, "p_out")};
        break;
    }
    return s;
  }

  /// Keys meaningful for `kind`.
  std::set<std::string> keys() const {
    switch (kind) {
      case GeneratorKind::ErdosRenyi: return {"n", "p"};
      case GeneratorKind::WattsStrogatz: return {"n", "k_ring", "p_rewire"};
      case GeneratorKind::BarabasiAlbert: return {"n", "m"};
      default: return {"n_pro", "n_anti", "p_in", "p_out"};
    }
  }
};

struct RunConfig {
  std::optional<std::string> edges_path;
  std::optional<std::string> attrs_path;
  std::optional<GeneratorConfig> generator;
  EpidemicParams params;
  Seeding seeding;
  std::size_t n_runs = 100;
  std::uint64_t master_seed = 1;
  AllocationStrategy strategy = AllocationStrategy::Polarized;
  bool redraw_allocation = true;
  unsigned threads = 1;
  std::optional<std::string> out_dir;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  bool has_file_source() const { return edges_path || attrs_path; }

  /// Parameter constraints. Graph sources may be incomplete here.
  void validate() const {
    try {
      params.validate();
    } catch (const std::invalid_argument& e) {
      std::string msg = e.what();
      auto colon = msg.find(':');
      throw ConfigError(msg.substr(0, colon), msg.substr(colon + 2));
    }
    if (seeding.count < 1) throw ConfigError("seed_count", "must be at least 1");
    if (n_runs < 1) throw ConfigError("n_runs", "must be at least 1");
    if (has_file_source() && generator)
      throw ConfigError("generator", "give either edges/attrs or a generator, not both");
    if (generator) {
      const auto allowed = generator->keys();
      auto check = [&](const auto& v, const char* key) {
        if (v && !allowed.contains(key))
          throw ConfigError(key, "not used by generator '" + std::string(to_string(generator->kind)) + "'");
      };
      check(generator->n, "n");
      check(generator->k_ring, "k_ring");
      check(generator->m, "m");
      check(generator->n_pro, "n_pro");
      check(generator->n_anti, "n_anti");
      check(generator->p, "p");
      check(generator->p_rewire, "p_rewire");
      check(generator->p_in, "p_in");
      check(generator->p_out, "p_out");
      auto prob = [](const std::optional<double>& v, const char* key) {
        if (v && !(*v >= 0.0 && *v <= 1.0)) throw ConfigError(key, "must lie in [0, 1]");
      };
      prob(generator->p, "p");
      prob(generator->p_rewire, "p_rewire");
      prob(generator->p_in, "p_in");
      prob(generator->p_out, "p_out");
    }
  }

  /// Exactly one complete graph source.
  void require_graph_source() const {
    validate();
    if (!has_file_source() && !generator)
      throw ConfigError("edges", "no graph source: give edges + attrs or a generator");
    if (has_file_source() && (!edges_path || !attrs_path))
      throw ConfigError(edges_path ? "attrs" : "edges", "edge and attribute files must be given together");
    if (generator) (void)generator->spec();
  }

  AnnotatedGraph load_graph() const {
    require_graph_source();
    if (generator) return generate(generator->spec());
    return load_edge_list(*edges_path, *attrs_path);
  }

  EnsembleOptions ensemble_options() const { return {seeding, redraw_allocation, threads}; }
};

namespace detail {

inline std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_real(const std::string& key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw ConfigError(key, "expected a number, got '" + std::string(v) + "'");
  return out;
}

template <class Int>
Int parse_integer(const std::string& key, std::string_view v) {
  Int out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw ConfigError(key, "expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

inline int parse_int_key(const std::string& key, std::string_view v) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw ConfigError(key, "expected an integer, got '" + std::string(v) + "'");
  return out;
}

inline bool parse_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + std::string(v) + "'");
}

/// Shortest representation that parses back to the same double.
inline std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace detail

/// Applies one `key = value` assignment.
inline void apply_config_entry(RunConfig& cfg, const std::string& key, std::string_view value) {
  using namespace detail;
  auto gen = [&]() -> GeneratorConfig& {
    if (!cfg.generator) cfg.generator.emplace();
    return *cfg.generator;
  };
  auto& p = cfg.params;
  if (key == "edges") cfg.edges_path = std::string(value);
  else if (key == "attrs") cfg.attrs_path = std::string(value);
  else if (key == "out_dir") cfg.out_dir = std::string(value);
  else if (key == "generator") {
    auto kind = parse_generator_kind(value);
    if (!kind) throw ConfigError(key, "expected er, ws, ba or two-community, got '" + std::string(value) + "'");
    gen().kind = *kind;
  }
  else if (key == "n") gen().n = parse_integer<std::size_t>(key, value);
  else if (key == "k_ring") gen().k_ring = parse_integer<std::size_t>(key, value);
  else if (key == "m") gen().m = parse_integer<std::size_t>(key, value);
  else if (key == "n_pro") gen().n_pro = parse_integer<std::size_t>(key, value);
  else if (key == "n_anti") gen().n_anti = parse_integer<std::size_t>(key, value);
  else if (key == "p") gen().p = parse_real(key, value);
  else if (key == "p_rewire") gen().p_rewire = parse_real(key, value);
  else if (key == "p_in") gen().p_in = parse_real(key, value);
  else if (key == "p_out") gen().p_out = parse_real(key, value);
  else if (key == "graph_seed") gen().seed = parse_integer<std::uint64_t>(key, value);
  else if (key == "R") p.R = parse_real(key, value);
  else if (key == "S_as") p.S_as = parse_real(key, value);
  else if (key == "A_si") p.A_si = parse_real(key, value);
  else if (key == "B_n") p.B_n = parse_real(key, value);
  else if (key == "I_bar") p.I_bar = parse_real(key, value);
  else if (key == "mu") p.mu = parse_real(key, value);
  else if (key == "sigma") p.sigma = parse_real(key, value);
  else if (key == "VET") p.VET = parse_real(key, value);
  else if (key == "VEI") p.VEI = parse_real(key, value);
  else if (key == "t_max_infectious") p.t_max_infectious = parse_int_key(key, value);
  else if (key == "horizon") p.horizon = parse_int_key(key, value);
  else if (key == "vet_draw") {
    if (value == "per-infection") p.vet_draw = VetDraw::PerInfection;
    else if (value == "per-day") p.vet_draw = VetDraw::PerDay;
    else throw ConfigError(key, "expected per-infection or per-day, got '" + std::string(value) + "'");
  }
  else if (key == "seed_count") cfg.seeding.count = parse_integer<std::size_t>(key, value);
  else if (key == "seed_pool") {
    if (value == "all") cfg.seeding.pool = SeedPool::All;
    else if (value == "unvaccinated") cfg.seeding.pool = SeedPool::UnvaccinatedOnly;
    else throw ConfigError(key, "expected all or unvaccinated, got '" + std::string(value) + "'");
  }
  else if (key == "n_runs") cfg.n_runs = parse_integer<std::size_t>(key, value);
  else if (key == "master_seed") cfg.master_seed = parse_integer<std::uint64_t>(key, value);
  else if (key == "strategy") {
    if (value == "polarized") cfg.strategy = AllocationStrategy::Polarized;
    else if (value == "homogeneous") cfg.strategy = AllocationStrategy::Homogeneous;
    else throw ConfigError(key, "expected polarized or homogeneous, got '" + std::string(value) + "'");
  }
  else if (key == "redraw_allocation") cfg.redraw_allocation = parse_bool(key, value);
  else if (key == "threads") cfg.threads = parse_integer<unsigned>(key, value);
  else throw ConfigError(key, "unknown key");
}

inline RunConfig parse_config_text(std::string_view text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::strip(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
    std::string key(detail::strip(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
    apply_config_entry(cfg, key, detail::strip(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

/// Text that parse_config_text maps back to an equal RunConfig.
inline std::string serialize_config(const RunConfig& cfg) {
  using detail::format_real;
  std::ostringstream out;
  out.imbue(std::locale::classic());
  const auto& p = cfg.params;
  if (cfg.edges_path) out << "edges = " << *cfg.edges_path << '\n';
  if (cfg.attrs_path) out << "attrs = " << *cfg.attrs_path << '\n';
  if (cfg.generator) {
    const auto& g = *cfg.generator;
    out << "generator = " << to_string(g.kind) << '\n';
    if (g.n) out << "n = " << *g.n << '\n';
    if (g.k_ring) out << "k_ring = " << *g.k_ring << '\n';
    if (g.m) out << "m = " << *g.m << '\n';
    if (g.n_pro) out << "n_pro = " << *g.n_pro << '\n';
    if (g.n_anti) out << "n_anti = " << *g.n_anti << '\n';
    if (g.p) out << "p = " << format_real(*g.p) << '\n';
    if (g.p_rewire) out << "p_rewire = " << format_real(*g.p_rewire) << '\n';
    if (g.p_in) out << "p_in = " << format_real(*g.p_in) << '\n';
    if (g.p_out) out << "p_out = " << format_real(*g.p_out) << '\n';
    out << "graph_seed = " << g.seed << '\n';
  }
  out << "R = " << format_real(p.R) << '\n'
      << "S_as = " << format_real(p.S_as) << '\n'
      << "A_si = " << format_real(p.A_si) << '\n'
      << "B_n = " << format_real(p.B_n) << '\n'
      << "I_bar = " << format_real(p.I_bar) << '\n'
      << "mu = " << format_real(p.mu) << '\n'
      << "sigma = " << format_real(p.sigma) << '\n'
      << "VET = " << format_real(p.VET) << '\n'
      << "VEI = " << format_real(p.VEI) << '\n'
      << "t_max_infectious = " << p.t_max_infectious << '\n'
      << "horizon = " << p.horizon << '\n'
      << "vet_draw = " << (p.vet_draw == VetDraw::PerDay ? "per-day" : "per-infection") << '\n'
      << "seed_count = " << cfg.seeding.count << '\n'
      << "seed_pool = " << (cfg.seeding.pool == SeedPool::All ? "all" : "unvaccinated") << '\n'
      << "n_runs = " << cfg.n_runs << '\n'
      << "master_seed = " << cfg.master_seed << '\n'
      << "strategy = " << to_string(cfg.strategy) << '\n'
      << "redraw_allocation = " << (cfg.redraw_allocation ? "true" : "false") << '\n'
      << "threads = " << cfg.threads << '\n';
  if (cfg.out_dir) out << "out_dir = " << *cfg.out_dir << '\n';
  return out.str();
}

}  // namespace polarnet

#endif  // POLARNET_CONFIG_HPP
