#ifndef POLARNET_EPIDEMIC_HPP
#define POLARNET_EPIDEMIC_HPP

/** @file
 * Daily agent-based virus transmission over a contact graph.
 *
 * An infected agent at time t since infection transmits to each susceptible
 * contact with probability
 *
 *     P(t) = 1 - exp(-lambda(t)),
 *     lambda(t) = R * S_as * A_si * B_n / I_bar * integral_{t-1}^{t} f(u) du,
 *
 * where f is the gamma density with mean mu and standard deviation sigma.
 * Vaccinated agents transmit only if a uniform draw u > VET, and an exposure
 * of a vaccinated susceptible is evaluated only if a uniform draw v > VEI.
 */

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "polarnet/graph.hpp"
#include "polarnet/rng.hpp"

namespace polarnet {

/// When the VET draw happens for a vaccinated infected agent.
enum class VetDraw : std::uint8_t {
  PerInfection,  ///< once, fixing the agent as transmitter for its whole infection
  PerDay,        ///< every infectious day, before sweeping the contact list
};

enum class SeedPool : std::uint8_t { All, UnvaccinatedOnly };

struct EpidemicParams {
  double R = 4.0;
  double S_as = 1.14;
  double A_si = 0.88;
  double B_n = 1.0;
  double I_bar = 2.0;
  double mu = 5.5;
  double sigma = 2.14;
  double VET = 0.9;
  double VEI = 0.6;
  int t_max_infectious = 21;
  int horizon = 150;
  VetDraw vet_draw = VetDraw::PerInfection;

  /// lambda(t) / integral(t)
  double rate_scale() const { return R * S_as * A_si * B_n / I_bar; }

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const {
    auto fail = [](const std::string& key, const std::string& why) {
      throw std::invalid_argument(key + ": " + why);
    };
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(R) || R < 0) fail("R", "must be a non-negative number");
    if (!finite(S_as) || S_as <= 0) fail("S_as", "must be positive");
    if (!finite(A_si) || A_si <= 0) fail("A_si", "must be positive");
    if (!finite(B_n) || B_n <= 0) fail("B_n", "must be positive");
    if (!finite(I_bar) || I_bar <= 0) fail("I_bar", "must be positive");
    if (!finite(mu) || mu <= 0) fail("mu", "must be positive");
    if (!finite(sigma) || sigma <= 0) fail("sigma", "must be positive");
    if (!(VET >= 0 && VET <= 1)) fail("VET", "must lie in [0, 1]");
    if (!(VEI >= 0 && VEI <= 1)) fail("VEI", "must lie in [0, 1]");
    if (t_max_infectious < 1) fail("t_max_infectious", "must be at least 1");
    if (horizon < 1) fail("horizon", "must be at least 1");
  }

  friend bool operator==(const EpidemicParams&, const EpidemicParams&) = default;
};

/// Mass of the gamma density (mean mu, sd sigma) on [t-1, t]; 0 for t <= 0.
inline double infectiousness_integral(int t, double mu, double sigma) {
  if (!(mu > 0) || !(sigma > 0)) throw std::invalid_argument("mu and sigma must be positive");
  if (t <= 0) return 0.0;
  const double shape = mu * mu / (sigma * sigma);
  const double scale = sigma * sigma / mu;
  const double hi = static_cast<double>(t) / scale;
  const double lo = static_cast<double>(t - 1) / scale;
  // upper tails are more accurate once both ends sit past the mode
  if (lo > shape) return boost::math::gamma_q(shape, lo) - boost::math::gamma_q(shape, hi);
  return boost::math::gamma_p(shape, hi) - (t == 1 ? 0.0 : boost::math::gamma_p(shape, lo));
}

inline double transmission_probability(int t, const EpidemicParams& p) {
  p.validate();
  if (t < 1) throw std::invalid_argument("time since infection must be at least 1");
  return -std::expm1(-p.rate_scale() * infectiousness_integral(t, p.mu, p.sigma));
}

/// P(t) for t = 0 .. t_max_infectious (entry 0 is unused and zero).
inline std::vector<double> transmission_table(const EpidemicParams& p) {
  p.validate();
  std::vector<double> table(static_cast<std::size_t>(p.t_max_infectious) + 1, 0.0);
  for (int t = 1; t <= p.t_max_infectious; ++t)
    table[static_cast<std::size_t>(t)] =
        -std::expm1(-p.rate_scale() * infectiousness_integral(t, p.mu, p.sigma));
  return table;
}

enum class Status : std::uint8_t { Susceptible, Infected, Recovered };

struct AgentState {
  Status status = Status::Susceptible;
  bool vaccinated = false;
  bool transmitter = false;  // meaningful while Infected
  int day_infected = -1;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct DailyCount {
  std::uint32_t unvaccinated = 0;
  std::uint32_t vaccinated = 0;
  std::uint32_t total() const { return unvaccinated + vaccinated; }
  friend bool operator==(const DailyCount&, const DailyCount&) = default;
};

struct SimulationState {
  int day = 0;
  std::vector<AgentState> agents;
  std::vector<DailyCount> daily_new_infections;  // index = day

  SimulationState() = default;
  explicit SimulationState(std::span<const std::uint8_t> vaccinated)
      : agents(vaccinated.size()), daily_new_infections(1) {
    for (std::size_t i = 0; i < agents.size(); ++i) agents[i].vaccinated = vaccinated[i] != 0;
  }

  std::size_t count(Status s) const {
    std::size_t c = 0;
    for (const auto& a : agents) c += a.status == s;
    return c;
  }
  bool any_infected() const {
    for (const auto& a : agents)
      if (a.status == Status::Infected) return true;
    return false;
  }
};

/**
 * Infection outcome of one exposure. `v` is the VEI draw (only consulted for
 * vaccinated targets), `w` the transmission draw.
 */
constexpr bool exposure_infects(bool target_vaccinated, double v, double w, double p,
                                double vei) noexcept {
  if (target_vaccinated && !(v > vei)) return false;
  return w < p;
}

namespace detail {

template <class Uniform>
void infect(AgentState& a, int day, const EpidemicParams& p, Uniform& uniform) {
  a.status = Status::Infected;
  a.day_infected = day;
  if (a.vaccinated && p.vet_draw == VetDraw::PerInfection)
    a.transmitter = uniform() > p.VET;
  else
    a.transmitter = true;
}

template <class Source>
auto as_uniform(Source& src) {
  if constexpr (requires { src.uniform(); })
    return [&src] { return src.uniform(); };
  else
    return [&src] { return static_cast<double>(src()); };
}

}  // namespace detail

/**
 * Infects `count` distinct agents drawn uniformly from `pool` on the current
 * day. Index-case selection uses `selector`; the VET transmitter draw for
 * vaccinated index cases uses `source`.
 */
template <class Source>
void seed_infections(SimulationState& state, std::size_t count, SeedPool pool, Rng& selector,
                     const EpidemicParams& params, Source& source) {
  std::vector<NodeId> candidates;
  for (NodeId i = 0; i < state.agents.size(); ++i) {
    const auto& a = state.agents[i];
    if (a.status != Status::Susceptible) continue;
    if (pool == SeedPool::UnvaccinatedOnly && a.vaccinated) continue;
    candidates.push_back(i);
  }
  if (count < 1) throw std::invalid_argument("seed count must be at least 1");
  if (count > candidates.size())
    throw std::invalid_argument("seed pool has " + std::to_string(candidates.size()) +
                                " agents, fewer than the requested " + std::to_string(count));
  // partial Fisher-Yates
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t pick = k + selector.below(candidates.size() - k);
    std::swap(candidates[k], candidates[pick]);
  }
  std::sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(count));
  auto uniform = detail::as_uniform(source);
  if (state.daily_new_infections.size() <= static_cast<std::size_t>(state.day))
    state.daily_new_infections.resize(static_cast<std::size_t>(state.day) + 1);
  auto& today = state.daily_new_infections[static_cast<std::size_t>(state.day)];
  for (std::size_t k = 0; k < count; ++k) {
    auto& a = state.agents[candidates[k]];
    detail::infect(a, state.day, params, uniform);
    ++(a.vaccinated ? today.vaccinated : today.unvaccinated);
  }
}

inline void seed_infections(SimulationState& state, std::size_t count, SeedPool pool, Rng& rng,
                            const EpidemicParams& params) {
  seed_infections(state, count, pool, rng, params, rng);
}

/**
 * Advances one day with a synchronous update.
 *
 * Agents whose time since infection exceeds t_max_infectious recover first.
 * Then every infectious transmitter (in node order) sweeps its sorted contact
 * list; each susceptible contact not already infected today is exposed:
 * a vaccinated contact draws v, then every contact draws w, and the contact
 * is infected iff exposure_infects(...). Agents infected today do not
 * transmit until tomorrow.
 *
 * `table` must come from transmission_table(params). `source` supplies
 * uniforms on [0, 1) either through `uniform()` or `operator()`.
 */
template <class Source>
void step_day(const AnnotatedGraph& g, SimulationState& state, const EpidemicParams& params,
              std::span<const double> table, Source& source) {
  auto uniform = detail::as_uniform(source);
  const int today = ++state.day;
  state.daily_new_infections.resize(static_cast<std::size_t>(today) + 1);
  DailyCount& fresh = state.daily_new_infections[static_cast<std::size_t>(today)];

  for (auto& a : state.agents)
    if (a.status == Status::Infected && today - a.day_infected > params.t_max_infectious)
      a.status = Status::Recovered;

  for (NodeId i = 0; i < state.agents.size(); ++i) {
    const AgentState& src = state.agents[i];
    if (src.status != Status::Infected || src.day_infected >= today) continue;
    if (!src.transmitter) continue;
    if (src.vaccinated && params.vet_draw == VetDraw::PerDay && !(uniform() > params.VET)) continue;
    const double p = table[static_cast<std::size_t>(today - src.day_infected)];
    for (NodeId j : g.neighbors(i)) {
      AgentState& dst = state.agents[j];
      if (dst.status != Status::Susceptible) continue;
      const double v = dst.vaccinated ? uniform() : 0.0;
      const double w = uniform();
      if (exposure_infects(dst.vaccinated, v, w, p, params.VEI)) {
        detail::infect(dst, today, params, uniform);
        ++(dst.vaccinated ? fresh.vaccinated : fresh.unvaccinated);
      }
    }
  }
}

struct Seeding {
  std::size_t count = 10;
  SeedPool pool = SeedPool::All;
  friend bool operator==(const Seeding&, const Seeding&) = default;
};

struct RunRecord {
  std::vector<DailyCount> daily;  // index = day, day 0 holds the index cases
  std::vector<AgentState> final_agents;
  int last_day = 0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Seeds for the independent random streams of one run.
struct RunSeeds {
  std::uint64_t seeding = 0;
  std::uint64_t dynamics = 0;

  static RunSeeds from(std::uint64_t seed) { return {derive_seed(seed, 0, 1), derive_seed(seed, 0, 2)}; }
};

/**
 * One epidemic from day 0 until `horizon` or until no agent is infected.
 * `observer(state)` is called after seeding and after every day.
 */
template <class Observer>
RunRecord run_epidemic(const AnnotatedGraph& g, std::span<const std::uint8_t> vaccinated,
                       const EpidemicParams& params, const Seeding& seeding, RunSeeds seeds,
                       Observer&& observer) {
  params.validate();
  if (vaccinated.size() != g.node_count())
    throw std::invalid_argument("vaccination flags do not match node count");
  const auto table = transmission_table(params);
  Rng selector(seeds.seeding);
  Rng dynamics(seeds.dynamics);
  SimulationState state(vaccinated);
  seed_infections(state, seeding.count, seeding.pool, selector, params, dynamics);
  observer(static_cast<const SimulationState&>(state));
  while (state.day < params.horizon && state.any_infected()) {
    step_day(g, state, params, table, dynamics);
    observer(static_cast<const SimulationState&>(state));
  }
  RunRecord rec;
  rec.last_day = state.day;
  rec.daily = std::move(state.daily_new_infections);
  rec.final_agents = std::move(state.agents);
  return rec;
}

inline RunRecord run_epidemic(const AnnotatedGraph& g, std::span<const std::uint8_t> vaccinated,
                              const EpidemicParams& params, const Seeding& seeding, std::uint64_t seed) {
  return run_epidemic(g, vaccinated, params, seeding, RunSeeds::from(seed), [](const SimulationState&) {});
}

}  // namespace polarnet

#endif  // POLARNET_EPIDEMIC_HPP
