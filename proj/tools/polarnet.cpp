// polarnet command line: metrics, generate, simulate, compare.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data or
// validation error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polarnet/polarnet.hpp"

namespace fs = std::filesystem;
using namespace polarnet;

namespace {

struct GlobalOptions {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

struct ScenarioOptions {
  std::optional<std::string> edges, attrs, out_dir, strategy;
  std::optional<std::size_t> runs, seed_count;
  std::optional<double> i_bar;
};

RunConfig build_config(const GlobalOptions& g, const ScenarioOptions& s) {
  RunConfig cfg = g.config ? parse_config(*g.config) : RunConfig{};
  if (s.edges || s.attrs) {
    cfg.generator.reset();
    cfg.edges_path = s.edges;
    cfg.attrs_path = s.attrs;
  }
  if (s.out_dir) cfg.out_dir = s.out_dir;
  if (s.runs) cfg.n_runs = *s.runs;
  if (s.seed_count) cfg.seeding.count = *s.seed_count;
  if (s.i_bar) cfg.params.I_bar = *s.i_bar;
  if (s.strategy) apply_config_entry(cfg, "strategy", *s.strategy);
  if (g.seed) cfg.master_seed = *g.seed;
  if (g.threads) cfg.threads = *g.threads;
  cfg.require_graph_source();
  return cfg;
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir = cfg.out_dir.value_or(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

int run_metrics(const std::string& edges, const std::string& attrs, const std::optional<std::string>& subgraph,
                std::size_t k_min, const std::string& fit, const std::string& out) {
  AnnotatedGraph g = load_edge_list(edges, attrs);
  if (g.self_loops_dropped() > 0)
    std::cerr << "warning: dropped " << g.self_loops_dropped() << " self-loop(s)\n";
  if (subgraph) g = subgraph_by_opinion(g, *subgraph == "pro" ? Opinion::Pro : Opinion::Anti);
  const auto method = fit == "log-binned" ? FitMethod::LogBinned : FitMethod::Histogram;
  write_metrics_csv(metrics_report(g, k_min, method), out);
  return 0;
}

int run_generate(const GeneratorConfig& gen, const std::string& out_edges, const std::string& out_attrs) {
  AnnotatedGraph g = generate(gen.spec());
  save_edge_list(g, out_edges, out_attrs);
  std::cerr << "generated " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
  return 0;
}

void plot(const std::vector<CurveSet>& sets, const std::string& title, const fs::path& path) {
  emit_svg_plot(sets, title, path.string());
}

int run_simulate(const RunConfig& cfg) {
  const AnnotatedGraph g = cfg.load_graph();
  const fs::path dir = prepare_out_dir(cfg);
  auto e = run_ensemble(g, cfg.params, cfg.strategy, cfg.n_runs, cfg.master_seed, cfg.ensemble_options());
  write_curves_csv(e, (dir / "curves.csv").string());
  const EnsembleSummary* list[] = {&e};
  write_summary_csv(list, (dir / "summary.csv").string());
  const auto palette = cfg.strategy == AllocationStrategy::Polarized ? Palette::Red : Palette::Grey;
  plot({run_curves(e, Subpop::Unvaccinated, std::string(to_string(cfg.strategy)), palette)},
       "Daily infections among unvaccinated", dir / "curves.svg");
  std::cout << summary_csv(list);
  return 0;
}

int run_compare(const RunConfig& cfg) {
  const AnnotatedGraph g = cfg.load_graph();
  const fs::path dir = prepare_out_dir(cfg);
  auto c = compare_scenarios(g, cfg.params, cfg.n_runs, cfg.master_seed, cfg.ensemble_options());
  write_curves_csv(c.polarized, (dir / "curves_polarized.csv").string());
  write_curves_csv(c.homogeneous, (dir / "curves_homogeneous.csv").string());
  const EnsembleSummary* list[] = {&c.polarized, &c.homogeneous};
  write_summary_csv(list, (dir / "summary.csv").string());
  for (Subpop s : all_subpops) {
    const std::string name(to_string(s));
    plot({run_curves(c.polarized, s, "polarized", Palette::Red),
          run_curves(c.homogeneous, s, "homogeneous", Palette::Grey)},
         "Daily infections among " + (s == Subpop::All ? std::string("all individuals") : name),
         dir / ("compare_" + name + ".svg"));
  }
  std::cout << summary_csv(list);
  for (Subpop s : all_subpops)
    std::cout << "ratio," << to_string(s) << ',' << format_fixed(c.ratio(s)) << '\n';
  return 0;
}

void add_scenario_options(CLI::App* cmd, ScenarioOptions& s) {
  cmd->add_option("--edges", s.edges, "Edge list CSV (src,dst)");
  cmd->add_option("--attrs", s.attrs, "Opinion CSV (node,pro|anti)");
  cmd->add_option("--out", s.out_dir, "Output directory");
  cmd->add_option("--runs", s.runs, "Monte Carlo runs per scenario")->check(CLI::PositiveNumber);
  cmd->add_option("--seed-count", s.seed_count, "Index cases per run")->check(CLI::PositiveNumber);
  cmd->add_option("--ibar", s.i_bar, "Mean daily interactions")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polarization metrics and epidemic simulation on annotated contact networks"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--config", global.config, "key = value configuration file");
  app.add_option("--seed", global.seed, "Master seed (generate: graph seed)");
  app.add_option("--threads", global.threads, "Worker threads, 0 = auto");

  auto* metrics = app.add_subcommand("metrics", "Structural and polarization metrics of a graph");
  std::string m_edges, m_attrs, m_out, m_fit = "histogram";
  std::optional<std::string> m_subgraph;
  std::size_t m_kmin = 1;
  metrics->add_option("--edges", m_edges, "Edge list CSV")->required();
  metrics->add_option("--attrs", m_attrs, "Opinion CSV")->required();
  metrics->add_option("--subgraph", m_subgraph, "Restrict to one opinion")->check(CLI::IsMember({"pro", "anti"}));
  metrics->add_option("--kmin", m_kmin, "Smallest degree in the power-law fit")->check(CLI::PositiveNumber);
  metrics->add_option("--fit", m_fit, "Power-law fit method")->check(CLI::IsMember({"histogram", "log-binned"}));
  metrics->add_option("--out", m_out, "Report CSV path")->required();

  auto* gen = app.add_subcommand("generate", "Write a synthetic graph");
  std::string g_kind, g_edges, g_attrs;
  GeneratorConfig gcfg;
  gen->add_option("--kind", g_kind, "Generator")->required()->check(CLI::IsMember({"er", "ws", "ba", "two-community"}));
  gen->add_option("--n", gcfg.n, "Nodes (er, ws, ba)");
  gen->add_option("--p", gcfg.p, "Edge probability (er)");
  gen->add_option("--k-ring", gcfg.k_ring, "Ring degree, even (ws)");
  gen->add_option("--p-rewire", gcfg.p_rewire, "Rewiring probability (ws)");
  gen->add_option("--m", gcfg.m, "Edges per new node (ba)");
  gen->add_option("--n-pro", gcfg.n_pro, "Pro nodes (two-community)");
  gen->add_option("--n-anti", gcfg.n_anti, "Anti nodes (two-community)");
  gen->add_option("--p-in", gcfg.p_in, "Within-group probability (two-community)");
  gen->add_option("--p-out", gcfg.p_out, "Cross-group probability (two-community)");
  gen->add_option("--out-edges", g_edges, "Edge list output")->required();
  gen->add_option("--out-attrs", g_attrs, "Opinion output")->required();

  auto* sim = app.add_subcommand("simulate", "Monte Carlo ensemble for one allocation strategy");
  ScenarioOptions s_opts;
  add_scenario_options(sim, s_opts);
  sim->add_option("--strategy", s_opts.strategy, "Vaccine allocation")
      ->check(CLI::IsMember({"polarized", "homogeneous"}));

  auto* cmp = app.add_subcommand("compare", "Polarized versus homogeneous allocation");
  ScenarioOptions c_opts;
  add_scenario_options(cmp, c_opts);

  for (auto* sub : {metrics, gen, sim, cmp}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*metrics) return run_metrics(m_edges, m_attrs, m_subgraph, m_kmin, m_fit, m_out);
    if (*gen) {
      gcfg.kind = *parse_generator_kind(g_kind);
      if (global.seed) gcfg.seed = *global.seed;
      RunConfig check;
      check.generator = gcfg;
      check.validate();
      return run_generate(gcfg, g_edges, g_attrs);
    }
    if (*sim) return run_simulate(build_config(global, s_opts));
    if (*cmp) return run_compare(build_config(global, c_opts));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
